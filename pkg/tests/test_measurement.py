import numpy as np
import pytest

from conftest import kron_matrix
from cwslab.exceptions import NonCommutingError
from cwslab.graphs import Graph, graph_generators
from cwslab.measurement import (
    GateCostModel,
    Leaf,
    and_expr,
    conjugate_expr,
    cost,
    detection_expr,
    eval_dense,
    expression_cost,
    positive_projector,
    xor_expr,
)
from cwslab.pauli import PauliOperator, mask_from_bits
from cwslab.stabilizer import ErrorGroup, StabilizerGroup, UstCode, build_aux_ust, cws_as_ust
from cwslab.statevec import graph_state, stabilizer_code_basis

P = PauliOperator.from_string


def _rank(expr):
    return int(round(np.trace(positive_projector(expr)).real))


def test_leaf_dense_is_kron():
    assert np.array_equal(eval_dense(Leaf(P("XZZXI"))), kron_matrix("XZZXI"))
    with pytest.raises(ValueError):
        Leaf(P("iX"))


def test_and_idempotent_and_product():
    m = Leaf(P("XZ"))
    assert np.array_equal(eval_dense(and_expr([m, m])), eval_dense(m))
    e = and_expr([P("ZI"), P("IZ")])
    proj = positive_projector(e)
    target = np.zeros((4, 4))
    target[0, 0] = 1
    assert np.array_equal(proj, target)


def test_and_non_commuting_rejected():
    with pytest.raises(NonCommutingError):
        and_expr([P("XI"), P("ZI")])
    with pytest.raises(NonCommutingError):
        xor_expr([P("XI"), P("ZI")])


def test_dense_commutation_fallback():
    # -XX commutes with ZZ although its leaves XI and IX do not
    a = xor_expr([P("XI"), P("IX")])
    e = and_expr([a, P("ZZ")])
    assert np.allclose(eval_dense(e), 2 * positive_projector(a) @ positive_projector(Leaf(P("ZZ"))) - np.eye(4))


def test_xor_rules():
    m = Leaf(P("XZI"))
    assert np.array_equal(eval_dense(xor_expr([m])), eval_dense(m))
    z = Leaf(P("Z"))
    assert np.array_equal(eval_dense(xor_expr([z, z])), -np.eye(2))
    assert _rank(xor_expr([z, z])) == 0
    a, b = P("XXI"), P("ZZI")
    assert np.array_equal(eval_dense(xor_expr([a, b])), -(kron_matrix("XXI") @ kron_matrix("ZZI")))


def test_symmetric_difference():
    a, b = Leaf(P("ZI")), Leaf(P("IZ"))
    pa, pb = positive_projector(a), positive_projector(b)
    want = pa @ (np.eye(4) - pb) + pb @ (np.eye(4) - pa)
    assert np.array_equal(positive_projector(xor_expr([a, b])), want)


def test_stabilizer_code_intersection():
    gens = [P(s) for s in ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]]
    e = and_expr(gens)
    assert _rank(e) == 2
    basis = stabilizer_code_basis(gens, 5)
    assert np.max(np.abs(positive_projector(e) - basis.projector())) < 1e-10


def test_ring3_generators_project_on_graph_state():
    g = Graph.ring(3)
    proj = positive_projector(and_expr(graph_generators(g)))
    s = graph_state(g).amplitudes
    assert np.max(np.abs(proj - np.outer(s, s.conj()))) < 1e-12


def test_detection_expr_examples(code523, code562):
    full_aux = detection_expr(build_aux_ust(code523, ErrorGroup.from_images(5, [1, 2, 4, 8])))
    assert np.array_equal(eval_dense(full_aux), np.eye(32))
    assert _rank(detection_expr(cws_as_ust(code562))) == 6
    da = ErrorGroup.from_images(5, [mask_from_bits("01000"), mask_from_bits("10100")])
    assert _rank(detection_expr(build_aux_ust(code562, da))) == 24


def test_detection_expr_without_generators():
    u = UstCode(StabilizerGroup([], 2), (P("II"),))
    assert np.array_equal(eval_dense(detection_expr(u)), np.eye(4))


def test_conjugate_expr_moves_space(code523):
    e = P("X2", 5)
    mq = detection_expr(cws_as_ust(code523))
    moved = positive_projector(conjugate_expr(mq, e))
    m = kron_matrix("IXIII")
    assert np.allclose(moved, m @ positive_projector(mq) @ m.conj().T, atol=1e-12)


def test_labels():
    assert and_expr([P("XI"), P("IX")]).label() == "AND(XI, IX)"
    assert xor_expr([P("-ZI")]).label() == "XOR(-ZI)"


def test_cost_examples():
    assert cost("ust_detection", K=6, n=5, k=2).value == 216
    assert cost("and_chain", ell=1, n=5).value == 6
    assert cost("ust_detection", K=1, n=5, k=1).value == 48
    assert cost("ust_recovery_measurement", K=6, n=5, k=2).value == 2 * 6 * 6 * 2
    parts = [cost("and_chain", ell=2, n=5), cost("and_chain", ell=3, n=5)]
    assert cost("xor_chain", parts=parts).value == 18 + 30


def test_toffoli_fallback():
    t5 = cost("multicontrol_toffoli", m=5)
    assert t5.value is None and t5.flagged and t5.order == "O(m^2)"
    assert cost("multicontrol_toffoli", m=6).value == 16
    g = cost("generic_cws", n=4, K=2)
    assert g.value is None and g.flagged
    assert cost("generic_cws", n=5, K=2).value == 25 + 2 * 16
    bare = GateCostModel(generic_extra_controls=0)
    assert bare.cost("generic_cws", n=5, K=2).flagged
    assert bare.cost("generic_cws", n=6, K=2).value == 36 + 2 * 16
    with pytest.raises(ValueError):
        GateCostModel(generic_extra_controls=2)


def test_cost_errors():
    with pytest.raises(ValueError):
        cost("nope", n=1)
    with pytest.raises(ValueError):
        cost("and_chain", ell=0, n=5)
    with pytest.raises(ValueError):
        cost("ust_detection", K=1, n=3, k=4)
    with pytest.raises(ValueError):
        cost("and_chain", ell=1.5, n=5)


def test_expression_cost(code562):
    da = ErrorGroup.from_images(5, [mask_from_bits("01000"), mask_from_bits("10100")])
    e = detection_expr(build_aux_ust(code562, da))
    c = expression_cost(e)
    # six AND blocks of three Pauli checks
    assert c.value == 6 * (2 * 3 - 1) * 6
    assert c.value <= cost("ust_detection", K=6, n=5, k=2).value
