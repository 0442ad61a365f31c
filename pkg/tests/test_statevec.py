import numpy as np
import pytest
from itertools import combinations

from conftest import kron_matrix
from cwslab.exceptions import BudgetExceededError, InconsistentCodeError, InvalidCodeError, LengthMismatchError
from cwslab.graphs import Graph, corrects, degeneracy_classes, errors_on, errors_up_to, graph_generators
from cwslab.measurement import Leaf, detection_expr, positive_projector
from cwslab.pauli import PauliOperator, mask_from_bits
from cwslab.stabilizer import ErrorGroup, StabilizerGroup, UstCode, build_aux_ust, subgroup_without
from cwslab.statevec import (
    StateVector,
    Subspace,
    apply_pauli,
    basis_index,
    basis_label,
    code_subspace,
    graph_state,
    measure,
    subspace_relation,
)

P = PauliOperator.from_string


def test_basis_labels():
    assert basis_index("100") == 1 and basis_index("001") == 4
    assert basis_label(1, 3) == "100"


def test_ring3_signs():
    s = graph_state(Graph.ring(3))
    amps = np.array([s.amplitudes[basis_index(format(i, "03b"))] for i in range(8)]) * np.sqrt(8)
    assert np.max(np.abs(amps - np.array([1, 1, 1, -1, 1, -1, -1, -1]))) <= 1e-12


def test_edgeless_plus():
    s = graph_state(Graph.edgeless(1))
    assert np.allclose(s.amplitudes, [2**-0.5, 2**-0.5], atol=1e-15)


def test_ring5_stabilized(ring5):
    s = graph_state(ring5)
    for g in graph_generators(ring5):
        assert np.max(np.abs(apply_pauli(g, s).amplitudes - s.amplitudes)) < 1e-12


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_graph_state_unique_joint_eigenvector(n):
    rng = np.random.default_rng(n)
    edges = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1) if rng.random() < 0.5]
    g = Graph.from_edges(n, edges)
    proj = np.eye(1 << n, dtype=complex)
    for gen in graph_generators(g):
        proj = proj @ (0.5 * (np.eye(1 << n) + kron_matrix(str(gen))))
    w, v = np.linalg.eigh(proj)
    assert np.isclose(w[-1], 1) and np.allclose(w[:-1], 0, atol=1e-12)
    s = graph_state(g).amplitudes
    assert abs(abs(np.vdot(v[:, -1], s)) - 1) < 1e-12


def test_apply_pauli_examples(ring5):
    zero = StateVector.basis(1, 0)
    assert apply_pauli(P("X"), zero).allclose(StateVector.basis(1, 1))
    assert np.allclose(apply_pauli(P("Y"), zero).amplitudes, [0, 1j])
    s = graph_state(ring5)
    w1 = apply_pauli(PauliOperator.z_type(5, mask_from_bits("01101")), s)
    assert abs(s.inner(w1)) < 1e-12
    with pytest.raises(LengthMismatchError):
        apply_pauli(P("XX"), zero)


def test_apply_pauli_matches_matrix_and_norm():
    rng = np.random.default_rng(0)
    for _ in range(50):
        n = int(rng.integers(1, 6))
        s = "".join("IXYZ"[k] for k in rng.integers(0, 4, n))
        v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
        v /= np.linalg.norm(v)
        out = apply_pauli(P(s), StateVector(n, v))
        assert np.allclose(out.amplitudes, kron_matrix(s) @ v, atol=1e-14)
        assert abs(out.norm - 1) < 1e-14
        twice = apply_pauli(P(s), out)
        assert np.allclose(twice.amplitudes, v, atol=1e-14)


def test_measure_basic():
    r = measure(Leaf(P("Z")), StateVector.basis(1, 0), seed=1)
    assert (r.outcome, r.probability) == (1, 1.0) and r.state.allclose(StateVector.basis(1, 0))
    plus = StateVector(1, np.array([1, 1]) / np.sqrt(2))
    outs = {measure(Leaf(P("Z")), plus, seed=k).outcome for k in range(20)}
    assert outs == {1, -1}
    r = measure(Leaf(P("Z")), plus, seed=3)
    assert abs(r.p_plus - 0.5) < 1e-12
    a, b = measure(Leaf(P("Z")), plus, seed=5), measure(Leaf(P("Z")), plus, seed=5)
    assert a.outcome == b.outcome and a.state.allclose(b.state)


def test_measure_probabilities_sum(code562):
    q = code_subspace(code562)
    psi = q.random_state(0)
    expr = detection_expr(build_aux_ust(code562, ErrorGroup.from_images(5, [1])))
    mv = expr.apply(psi.amplitudes)
    plus, minus = 0.5 * (psi.amplitudes + mv), 0.5 * (psi.amplitudes - mv)
    assert abs(np.vdot(plus, plus).real + np.vdot(minus, minus).real - 1) < 1e-12


def test_measure_example6(code562):
    q = code_subspace(code562)
    psi = q.random_state(4)
    x2 = apply_pauli(P("X2", 5), psi)
    da = ErrorGroup.from_images(5, [mask_from_bits("01000"), mask_from_bits("10100")])
    r = measure(detection_expr(build_aux_ust(code562, da)), x2, seed=0)
    assert r.outcome == 1 and abs(r.probability - 1) < 1e-12
    r2 = measure(detection_expr(build_aux_ust(code562, subgroup_without(da, 2))), x2, seed=0)
    assert r2.outcome == -1 and abs(r2.probability - 1) < 1e-12


def test_subspace_relations(code523, code562):
    q = code_subspace(code523)
    assert subspace_relation(q, q).kind == "identical"
    assert subspace_relation(q.apply_pauli(P("X2", 5)), q.apply_pauli(P("Z2", 5))).kind == "orthogonal"
    q6 = code_subspace(code562)
    rel = subspace_relation(q6.apply_pauli(P("Z1", 5)), q6.apply_pauli(P("Z3", 5)))
    assert rel.kind in ("overlapping", "orthogonal", "identical")
    assert len(rel.principal_angles) == 6


def test_code_subspaces(code562, ring3_trivial):
    assert code_subspace(code562).dim == 6
    triv = code_subspace(ring3_trivial)
    assert triv.dim == 1
    assert subspace_relation(triv, Subspace.from_vectors(3, [graph_state(ring3_trivial.graph)])).kind == "identical"
    da = ErrorGroup.from_images(5, [mask_from_bits("01000"), mask_from_bits("10100")])
    aux = code_subspace(build_aux_ust(code562, da))
    assert aux.dim == 24 and aux.gram_defect() < 1e-10


def test_inconsistent_ust_rejected(ring5):
    # Pauli translations are either orthogonal or equivalent; equivalent ones are refused
    base = StabilizerGroup([P("ZIIII")], 5)
    with pytest.raises(InvalidCodeError):
        UstCode(base, (P("IIIII"), P("IZIII")))
    with pytest.raises(InconsistentCodeError):
        Subspace.from_orthonormal(1, [StateVector.basis(1, 0), StateVector(1, np.array([1, 1]) / np.sqrt(2))])


def test_dense_budget(monkeypatch):
    monkeypatch.setenv("CWSLAB_DENSE_BUDGET", "4")
    with pytest.raises(BudgetExceededError):
        graph_state(Graph.ring(5))


@pytest.mark.parametrize("which", ["code523", "code562"])
def test_corrupted_spaces_identical_or_orthogonal(which, request):
    code = request.getfixturevalue(which)
    errs = errors_up_to(5, 1) if which == "code523" else errors_on(5, [2])
    assert corrects(code, errs)
    q = code_subspace(code)
    part = degeneracy_classes(code, errs)
    for e1, e2 in combinations(errs, 2):
        rel = subspace_relation(q.apply_pauli(e1), q.apply_pauli(e2))
        same = part is not None and any(e1 in c and e2 in c for c in part.classes.values())
        assert rel.kind == ("identical" if same else "orthogonal")


def test_ust_projector_equals_basis(code562):
    da = ErrorGroup.from_images(5, [mask_from_bits("01000"), mask_from_bits("10100")])
    aux = build_aux_ust(code562, da)
    assert np.max(np.abs(positive_projector(detection_expr(aux)) - code_subspace(aux).projector())) < 1e-10
