import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import kron_matrix
from cwslab.exceptions import LengthMismatchError, PauliParseError
from cwslab.pauli import (
    BinMatrix,
    PauliOperator,
    commutation_matrix,
    enumerate_paulis,
    gf2_nullspace,
    gf2_rank,
    gf2_solve,
    pauli_rank,
    product,
    same_group,
)

P = PauliOperator.from_string

pauli_text = st.integers(1, 5).flatmap(lambda n: st.text("IXYZ", min_size=n, max_size=n))
prefix = st.sampled_from(["", "-", "+i", "-i"])


def test_format_round_trip_examples():
    assert str(P("XZZXI")) == "XZZXI"
    assert str(P("-iY")) == "-iY"
    assert str(P("X") * P("Z")) == "-iY"
    assert str(P("X2Z5", 5)) == "IXIIZ"
    assert str(P("-X2", 5)) == "-IXIII"


def test_y_convention():
    # Y = i X Z
    y = P("Y")
    assert y == P("iX") * P("Z")
    assert np.array_equal(y.to_matrix(), kron_matrix("Y"))
    assert np.array_equal((P("iX") * P("Z")).to_matrix(), kron_matrix("Y"))


@pytest.mark.parametrize("bad", ["XQZ", "", "i", "X0", "X9"])
def test_parse_errors(bad):
    with pytest.raises((PauliParseError, ValueError)):
        P(bad, 5 if bad[-1:].isdigit() else None)


def test_length_mismatch():
    with pytest.raises(LengthMismatchError):
        P("XX") * P("XXX")
    with pytest.raises(PauliParseError):
        P("XX", 3)


@settings(max_examples=200, deadline=None)
@given(pauli_text, pauli_text, prefix, prefix)
def test_product_matches_matrices(a, b, pa, pb):
    if len(a) != len(b):
        b = (b * len(a))[: len(a)]
    A, B = P(pa + a), P(pb + b)
    assert np.array_equal((A * B).to_matrix(), kron_matrix(pa + a) @ kron_matrix(pb + b))
    assert np.array_equal(A.to_matrix(), kron_matrix(pa + a))


@settings(max_examples=200, deadline=None)
@given(pauli_text, pauli_text)
def test_commutation_matches_matrices(a, b):
    b = (b * len(a))[: len(a)]
    ma, mb = kron_matrix(a), kron_matrix(b)
    assert P(a).commutes(P(b)) == np.allclose(ma @ mb, mb @ ma)


@settings(max_examples=100, deadline=None)
@given(pauli_text, prefix)
def test_dagger_and_hermitian(a, pa):
    p = P(pa + a)
    m = p.to_matrix()
    assert np.array_equal(p.dagger().to_matrix(), m.conj().T)
    assert p.is_hermitian == np.allclose(m, m.conj().T)
    assert (p * p.dagger()).is_identity and (p * p.dagger()).phase == 0


def test_weight_support_sign():
    p = P("-IXIYZ")
    assert p.weight == 3 and p.support == (2, 4, 5)
    assert p.sign == -1 and P("XZZXI").sign == 1
    with pytest.raises(ValueError):
        P("iX").sign


def test_enumerate_counts():
    assert len(list(enumerate_paulis(5, 1))) == 15
    assert len(list(enumerate_paulis(4, 2))) == 6 * 9
    assert all(p.display_phase == 0 for p in enumerate_paulis(3, 2))


def test_gf2_helpers():
    m = BinMatrix(np.array([[1, 1, 0], [0, 1, 1], [1, 0, 1]], dtype=np.uint8))
    assert gf2_rank(m) == 2
    sol = gf2_solve(m.bits, np.array([1, 0, 1], dtype=np.uint8))
    assert sol is not None and np.array_equal(m.bits.astype(int) @ sol % 2, [1, 0, 1])
    assert gf2_solve(m.bits, np.array([1, 0, 0], dtype=np.uint8)) is None
    null = gf2_nullspace(m)
    assert null.shape == (1, 3) and not (m.bits.astype(int) @ null[0] % 2).any()


def test_pauli_rank_and_groups():
    gens = [P(s) for s in ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]]
    assert pauli_rank(gens) == 4
    assert pauli_rank(gens + [gens[0] * gens[1]]) == 4
    alt = [gens[0] * gens[1], gens[1], gens[2], gens[3]]
    assert same_group(gens, alt)
    cm = commutation_matrix(gens, [P("ZIIII")])
    assert cm.bits[:, 0].tolist() == [1, 0, 1, 0]


def test_product_helper():
    assert product([], 3) == PauliOperator.identity(3)
    assert product([P("XII"), P("ZII")], 3) == P("-iYII")
