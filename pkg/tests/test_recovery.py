from fractions import Fraction

import pytest

from cwslab.exceptions import InvalidCodeError, UncorrectableError
from cwslab.graphs import ClassicalCode, CwsCode, Graph, cl_map, errors_up_to, is_additive
from cwslab.pauli import PauliOperator, mask_from_bits
from cwslab.recovery import (
    additive_operators,
    additive_schedule,
    beyond_t_schedule,
    claimed_reduction_bound,
    count_B,
    count_N,
    generic_recover,
    reduction_factor,
    run_trials,
    structured_recover,
    structured_schedule,
    syndrome_decode,
)
from cwslab.stabilizer import StabilizerGroup, syndrome
from cwslab.statevec import apply_pauli, code_subspace

P = PauliOperator.from_string


def test_counts():
    assert count_B(5, 1) == 16 and count_B(5, 2) == 106 and count_B(7, 0) == 1
    assert count_N(5, 1) == 6 and count_N(7, 0) == 0
    assert reduction_factor(5, 1) == Fraction(16, 6) == claimed_reduction_bound(5, 1)
    assert claimed_reduction_bound(5, 0) is None
    with pytest.raises(ValueError):
        count_B(3, 4)


@pytest.fixture(scope="module")
def q523(code523):
    return code_subspace(code523)


@pytest.fixture(scope="module")
def sched523(code523):
    return structured_schedule(code523, 1)


def test_generic_examples(code523, q523):
    psi = q523.random_state(2)
    out = generic_recover(code523, apply_pauli(P("Y3", 5), psi), 1, seed=0, original=psi, code_space=q523)
    assert out.identified_class == cl_map(code523.graph, P("Y3", 5)) and out.success
    ident = generic_recover(code523, psi, 1, seed=0, original=psi, code_space=q523)
    assert ident.measurements_used == 1 and ident.identified_class == 0
    used = [generic_recover(code523, apply_pauli(e, psi), 1, 0, psi, q523).measurements_used
            for e in errors_up_to(5, 1)]
    assert max(used) == 16 and sorted(used) == list(range(1, 17))


def test_structured_schedule_shapes(code523, code562, sched523):
    assert len(sched523.locate_phases) == 4
    assert all(len(b.group_phases) == 2 for b in sched523.blocks)
    assert sched523.worst_case == 6 == count_N(5, 1)
    single_set = structured_schedule(code562, 1, index_sets=[[2]])
    assert len(single_set.locate_phases) == 0 and len(single_set.blocks[0].group_phases) == 2
    with pytest.raises(InvalidCodeError):
        structured_schedule(code562, 1)
    with pytest.raises(ValueError):
        structured_schedule(code562, 1, index_sets=[[2, 3]])


def test_structured_exhaustive(code523, q523, sched523):
    psi = q523.random_state(9)
    for e in errors_up_to(5, 1):
        out = structured_recover(code523, apply_pauli(e, psi), schedule=sched523, seed=1,
                                 original=psi, code_space=q523)
        assert out.success and out.identified_class == cl_map(code523.graph, e)
        assert out.measurements_used <= count_N(5, 1)
        assert q523.residual(out.corrected_state) < 1e-10


def test_example6_recovery(code562):
    sch = structured_schedule(code562, 1, index_sets=[[2]])
    q = code_subspace(code562)
    psi = q.random_state(1)
    x2 = structured_recover(code562, apply_pauli(P("X2", 5), psi), schedule=sch, seed=0, original=psi)
    assert [line.outcome for line in x2.transcript] == [1, -1]
    assert x2.identified_class == mask_from_bits("10100") and x2.success
    y2 = structured_recover(code562, apply_pauli(P("Y2", 5), psi), schedule=sch, seed=0, original=psi)
    assert [line.outcome for line in y2.transcript] == [-1, -1]
    assert y2.identified_class == mask_from_bits("11100") and y2.success


def test_z_image_alone_leaves_logical_error(code562):
    # correcting with the bare Z^b operator fails whenever x.c_i is not constant
    q = code_subspace(code562)
    psi = q.random_state(1)
    bad = apply_pauli(PauliOperator.z_type(5, mask_from_bits("10100")), apply_pauli(P("X2", 5), psi))
    assert q.residual(bad) < 1e-10 and not bad.equal_up_to_phase(psi)


def test_paranoid_and_uncorrectable(code523, code562, q523, sched523):
    psi = q523.random_state(3)
    e = P("Z5", 5)  # lives only in the last index set
    out = structured_recover(code523, apply_pauli(e, psi), schedule=sched523, seed=0, paranoid=True,
                             original=psi, code_space=q523)
    assert out.success and out.paranoid_extra == 1 and out.measurements_used == 6
    sch = structured_schedule(code562, 1, index_sets=[[2]])
    q6 = code_subspace(code562)
    phi = q6.random_state(0)
    with pytest.raises(UncorrectableError):
        structured_recover(code562, apply_pauli(P("Z1", 5), phi), schedule=sch, seed=0, paranoid=True)


def test_additive_schedule(code523, q523):
    sch = additive_schedule(code523)
    ops = additive_operators(sch)
    assert [str(o) for o in ops] == ["YZIZY", "IXZZX", "ZZXIX", "ZIZYY"]
    assert sch.worst_case == 4
    stab = StabilizerGroup(ops)
    psi = q523.random_state(5)
    for e in errors_up_to(5, 1):
        out = structured_recover(code523, apply_pauli(e, psi), schedule=sch, seed=0, original=psi, code_space=q523)
        assert out.outcome_bits == syndrome(stab, e)
        assert out.success and out.identified_class == syndrome_decode(code523, stab, e, 1)


def test_additive_rejects_and_trivial(code562):
    with pytest.raises(InvalidCodeError):
        additive_schedule(code562)
    whole = CwsCode(Graph.edgeless(2), ClassicalCode.from_strings(["00", "10", "01", "11"]))
    assert is_additive(whole)
    assert additive_schedule(whole, t=0).phases == []


def test_generic_and_structured_agree(code523, q523, sched523):
    psi = q523.random_state(6)
    for e in errors_up_to(5, 1):
        bad = apply_pauli(e, psi)
        a = generic_recover(code523, bad, 1, 0, psi, q523)
        b = structured_recover(code523, bad, schedule=sched523, seed=0, original=psi, code_space=q523)
        assert a.identified_class == b.identified_class


def test_beyond_t(code523, code562):
    b = beyond_t_schedule(code523, 1, 2)
    assert not b.hazard and not b.elide_last
    assert len(b.locate_phases) == 5
    # the perfect code has no room for extra classes
    assert b.extra_phases == ()
    b0 = beyond_t_schedule(code562, 0, 1)
    assert b0.hazard and "overlap" in b0.hazard_note
    weights = [p.representative.weight for p in b0.extra_phases]
    assert weights == sorted(weights) and weights
    empty = beyond_t_schedule(code562, 1, 2, extra_classes=[], index_sets=[[2]])
    assert empty.hazard and empty.extra_phases == ()


def test_beyond_t_runs(code562):
    b0 = beyond_t_schedule(code562, 0, 1)
    q = code_subspace(code562)
    psi = q.random_state(2)
    e = b0.extra_phases[-1].representative
    out = structured_recover(code562, apply_pauli(e, psi), schedule=b0, seed=0, original=psi, code_space=q)
    assert out.success and out.identified_class == cl_map(code562.graph, e)
    assert out.measurements_used == 1 + len(b0.extra_phases)


def test_trials_deterministic(code523, sched523):
    a = run_trials(code523, sched523, [None] * 5, seed=42)
    b = run_trials(code523, sched523, [None] * 5, seed=42, jobs=3)
    assert [r.injected for r in a] == [r.injected for r in b]
    assert [[l.as_dict() for l in r.outcome.transcript] for r in a] == \
           [[l.as_dict() for l in r.outcome.transcript] for r in b]
    assert all(r.success for r in a)
