from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from qes.msystem import BandedSystem, PVector, build_matrix, entry, max_norm, residual, tilde

F = Fraction


def symbols(n, name="s"):
    return tuple(sympy.symbols(f"{name}1:{n + 1}"))


def test_n2_q3_matrix():
    s1, s2, s3 = symbols(3)
    assert build_matrix(BandedSystem(2, 3, (s1, s2, s3))) == [[s1, 1], [s2, s1], [s3, s2], [1, s3]]


def test_n3_q3_matrix():
    s1, s2, s3 = symbols(3)
    m = build_matrix(BandedSystem(3, 3, (s1, s2, s3)))
    assert len(m) == 5 and all(len(r) == 3 for r in m)
    assert m[0] == [s1, 1, 0]
    assert m[1] == [s2, s1, 2]
    assert m[3] == [2, s3, s2]
    assert m[4] == [0, 1, s3]


def test_n3_q1_overlap_rows():
    (s1,) = symbols(1)
    assert build_matrix(BandedSystem(3, 1, (s1,))) == [[s1, 1, 0], [2, s1, 2], [0, 1, s1]]


def test_residual_examples():
    assert residual(BandedSystem(2, 1, (1,)), (-1, 1)) == [0, 0]
    assert residual(BandedSystem(3, 3, (2, 2, 2)), (F(-1, 2), 1, F(-1, 2))) == [0] * 5
    r = residual(BandedSystem(3, 3, (2, 2, 2)), (1, 1, 1))
    assert r[0] == 3 and max_norm(r) > 0


def test_tilde_reverses_couplings():
    s = symbols(3)
    sys = BandedSystem(3, 3, s)
    assert tilde(sys).s == tuple(reversed(s))
    assert tilde(tilde(sys)) == sys


@given(st.integers(2, 6), st.integers(1, 25))
def test_tilde_is_double_reversal(N, q):
    s = symbols(q)
    sys = BandedSystem(N, q, s)
    m, mt = build_matrix(sys), build_matrix(tilde(sys))
    assert mt == [list(reversed(row)) for row in reversed(m)]


@given(st.integers(2, 5), st.integers(1, 12))
def test_residual_of_tilde_is_reversed_residual(N, q):
    s, p = symbols(q), symbols(N, "p")
    lhs = residual(tilde(BandedSystem(N, q, s)), tuple(reversed(p)))
    rhs = list(reversed(residual(BandedSystem(N, q, s), p)))
    assert all(sympy.expand(a - b) == 0 for a, b in zip(lhs, rhs))


coupling = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@given(st.integers(2, 5), st.data())
def test_residual_is_linear_in_p(N, data):
    q = data.draw(st.integers(1, 8))
    s = data.draw(st.lists(coupling, min_size=q, max_size=q))
    p1 = data.draw(st.lists(coupling, min_size=N, max_size=N))
    p2 = data.draw(st.lists(coupling, min_size=N, max_size=N))
    c = data.draw(coupling)
    sys = BandedSystem(N, q, s)
    combo = [a + c * b for a, b in zip(p1, p2)]
    assert residual(sys, combo) == [a + c * b for a, b in zip(residual(sys, p1), residual(sys, p2))]


def test_entry_bands():
    sys = BandedSystem(4, 5, tuple(range(10, 15)))
    assert entry(sys, 1, 2) == 1 and entry(sys, 3, 4) == 3
    assert entry(sys, 4, 5) == 0  # outside the N columns' superdiagonal range
    assert [entry(sys, 5 + j, j) for j in range(1, 5)] == [3, 2, 1, 0]


def test_float_and_fraction_scalars_agree():
    s = (F(1, 3), F(-2), F(5, 7))
    p = (F(1), F(2, 3), F(-1, 4))
    exact = residual(BandedSystem(3, 3, s), p)
    approx = residual(BandedSystem(3, 3, tuple(map(float, s))), tuple(map(float, p)))
    assert [float(v) for v in exact] == pytest.approx(approx)


@pytest.mark.parametrize("args", [(1, 3, (1, 2, 3)), (2, 0, ()), (3, 2, (1,))])
def test_invalid_systems(args):
    with pytest.raises(ValueError):
        BandedSystem(*args)


def test_pvector_rejects_zero_and_wrong_length():
    with pytest.raises(ValueError):
        PVector((0, 0, 0))
    assert list(PVector((F(-1, 2), 1, F(-1, 2)), 1)) == [F(-1, 2), 1, F(-1, 2)]
    with pytest.raises(ValueError):
        residual(BandedSystem(3, 1, (1,)), (1, 1))
