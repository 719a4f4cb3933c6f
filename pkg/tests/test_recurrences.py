from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from qes.exactpoly import DivisibilityError, Poly
from qes.msystem import BandedSystem, residual
from qes.recurrences import (
    XI,
    YZ,
    branch_residual,
    chebyshev_reduction,
    n2_chain,
    n3_degenerate,
    n4_divisibility,
    n4_table,
    regrade,
    sigma_table,
    w_from_table,
    w_sequence,
    z_quotient,
)

xi = Poly.var(XI)
Y = Poly.var("Y", YZ)
Z = Poly.var("Z", YZ)


def test_sigma_table_values():
    t = sigma_table(3)
    assert t.Sigma(1) == xi - 2
    assert t.sigma(2) == xi - 3
    assert t.Sigma(2) == xi**2 - 4 * xi + 2
    assert t.sigma(3) == xi**2 - 5 * xi + 5
    with pytest.raises(IndexError):
        t.sigma(0)


def test_sigma_closed_form_via_sympy():
    # Sigma_k(xi) = 2 T_2k(sqrt(xi)/2), computed independently
    x = sympy.Symbol("x")
    t = sigma_table(12)
    for k in range(13):
        ref = sympy.expand(2 * sympy.chebyshevt(2 * k, x))
        mine = sum(sympy.Rational(int(c)) * (4 * x**2) ** m for m, c in enumerate(t.Sigma(k).coeffs()))
        assert sympy.expand(mine - ref) == 0


@pytest.mark.parametrize("k", [1, 2, 7, 20])
def test_chebyshev_reduction(k):
    assert chebyshev_reduction(k)


def test_chebyshev_reduction_rejects_k0():
    with pytest.raises(ValueError):
        chebyshev_reduction(0)


def test_n2_chain_examples():
    assert [(b.alpha, b.s) for b in n2_chain(2)] == [(1, (1, 1))]
    assert [(b.alpha, b.s) for b in n2_chain(3)] == [(-1, (-1, 1, -1)), (1, (1, 1, 1))]


@pytest.mark.parametrize("q", range(1, 13))
def test_n2_residuals_exactly_zero(q):
    branches = n2_chain(q)
    assert len(branches) == (2 if q % 2 else 1)
    for b in branches:
        assert branch_residual(b) == [0] * (q + 1)


def test_n3_degenerate_examples():
    assert n3_degenerate(4) == []
    got = {b.rho: b.s for b in n3_degenerate(3)}
    assert got == {1: (0, 2, 0), -1: (0, -2, 0)}
    assert [(b.rho, b.s) for b in n3_degenerate(5)] == [(1, (0, 2, 0, 2, 0))]


@pytest.mark.parametrize("q", [1, 3, 5, 7, 9, 11, 13])
def test_n3_degenerate_residuals_and_reduction(q):
    for b in n3_degenerate(q):
        assert branch_residual(b) == [0] * (q + 2)
        red = b.reduced()
        if q == 1:
            assert red is None
        else:
            assert residual(red, b.reduced_p) == [0] * (red.q + 1)


def test_n4_seed_relations():
    t = n4_table(2)
    Q0 = Y * Z + 3 * Z - 3
    R = Z * Y * Q0 + Z * Z * Y + 2 * Z * Z - Z * Y
    S = Z * R + Z * Z * Q0 - Z * Z * Y - 2 * Z * Z
    assert t.Q[0] == Q0 and t.P[0] == Y + 2
    assert t.P[1] == R
    assert t.Q[1] == S


def test_w_sequence_matches_table():
    t = n4_table(10)
    from_table = w_from_table(t)
    W = w_sequence(20)
    for n in range(21):
        assert W[n] == from_table[n], n


@pytest.mark.parametrize("n", [0, 1, 2, 5])
def test_n4_divisibility(n):
    assert n4_divisibility(n)


def test_z_quotient_failure_carries_remainder():
    w = regrade(Y * Z * Z + 3 * Z)
    with pytest.raises(DivisibilityError) as err:
        z_quotient(w, 2, 7)
    assert err.value.remainder == regrade(3 * Z)
    assert z_quotient(w, 1, 7) == regrade(Y * Z + 3)


def test_half_integer_grading_degree():
    W = w_sequence(1)
    assert W[-1].degree_in("Y") == 1 and W[-1].min_degree_in("Y") == -1
    assert W[-1].degree == Fraction(1, 2)


@given(st.integers(1, 40))
def test_sigma_interleaving(k):
    t = sigma_table(k + 1)
    assert t.sigma(k + 1) == t.Sigma(k) - t.sigma(k)
    assert t.Sigma(k) == xi * t.sigma(k) - t.Sigma(k - 1)


def test_table_length_cap():
    with pytest.raises(ValueError):
        sigma_table(10_001)
    with pytest.raises(ValueError):
        n4_table(-1)

