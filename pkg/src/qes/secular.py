"""Secular (matching) polynomials at N = 3 and the QE solutions they encode.

The matching rule depends on ``q mod 4``:

=========  ====================================  ========
branch     secular polynomial                    variable
=========  ====================================  ========
4K         a sigma_{K+1}(a^2) - Sigma_K(a^2)     s = a
4K+1       Sigma_{K+1}(ξ) - Sigma_K(ξ)           ξ
4K+2       a sigma_{K+1}(a^2) - Sigma_{K+1}(a^2) s = a
4K+3       sigma_{K+2}(ξ) - sigma_{K+1}(ξ)       ξ
=========  ====================================  ========

Every polynomial is stored with a positive leading coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import mpmath

from .exactpoly import (
    DEFAULT_PRECISION,
    AlgebraicRoot,
    DivisibilityError,
    Poly,
    chebyshev_U,
    factor_rational_roots,
    real_roots,
    to_mpf,
)
from .msystem import BandedSystem, max_norm, residual
from .recurrences import XI, sigma_table

S = "s"
BRANCHES = ("4K", "4K+1", "4K+2", "4K+3")


class StructuralError(ArithmeticError):
    """A structural identity (exact division, integrality, closed form) failed."""


class ConsistencyError(ArithmeticError):
    """Reconstructed couplings do not annihilate the banded system."""


@dataclass(frozen=True)
class SecularProblem:
    q: int
    K: int
    branch: str
    variable: str
    secular: Poly

    @property
    def degree(self) -> int:
        return self.secular.degree


def branch_of(q: int) -> tuple[str, int]:
    if q < 1:
        raise ValueError("q must be at least 1")
    return BRANCHES[q % 4], q // 4


def _positive(p: Poly) -> Poly:
    return -p if p.leading_coefficient < 0 else p


def secular_poly(q: int) -> SecularProblem:
    branch, K = branch_of(q)
    t = sigma_table(K + 2)
    if branch in ("4K", "4K+2"):
        a = Poly.var(S)
        a2 = a * a
        big = t.Sigma(K) if branch == "4K" else t.Sigma(K + 1)
        poly = a * t.sigma(K + 1).substitute(XI, a2) - big.substitute(XI, a2)
        return SecularProblem(q, K, branch, S, _positive(poly))
    if branch == "4K+1":
        poly = t.Sigma(K + 1) - t.Sigma(K)
    else:
        poly = t.sigma(K + 2) - t.sigma(K + 1)
    return SecularProblem(q, K, branch, XI, _positive(poly))


# roots


@dataclass(frozen=True)
class RootSeed:
    """A real value of ``s_1`` together with the ratio ``rho = a / ã``."""

    s1: AlgebraicRoot
    rho: int

    @property
    def value(self) -> float:
        return float(self.s1)


@dataclass(frozen=True)
class QERoots:
    problem: SecularProblem
    seeds: tuple[RootSeed, ...]
    excluded: tuple[tuple[AlgebraicRoot, str], ...] = ()
    rho_minus_checked: bool = False

    def __iter__(self):
        return iter(self.seeds)

    def __len__(self):
        return len(self.seeds)

    def values(self) -> list[float]:
        return [s.value for s in self.seeds]


def _in_s(poly: Poly, sign: int) -> Poly:
    s = Poly.var(S)
    return poly.substitute(XI, sign * s * s)


def qe_roots(prob: SecularProblem, precision_bits: int = DEFAULT_PRECISION) -> QERoots:
    """Real ``s_1`` values admitted by the secular polynomial.

    In the ξ convention a positive root yields ``s_1 = ±sqrt(ξ)`` with rho = 1.
    A negative root only survives on the 4K+3 branch, where rho = -1 makes
    ``a^2 = -ξ`` positive; elsewhere it is reported and dropped, as is ξ = 0.
    """
    seeds: list[RootSeed] = []
    excluded: list[tuple[AlgebraicRoot, str]] = []
    if prob.variable == S:
        for r in real_roots(prob.secular, precision_bits):
            if r.is_exact and r.exact == 0:
                excluded.append((r, "s1 = 0 is not admissible"))
            else:
                seeds.append(RootSeed(r, 1))
        return QERoots(prob, tuple(seeds), tuple(excluded))

    xi_roots = real_roots(prob.secular, precision_bits)
    negatives = [r for r in xi_roots if r.hi < 0 or (r.is_exact and r.lo < 0)]
    for r in xi_roots:
        if r.is_exact and r.exact == 0:
            excluded.append((r, "xi = 0 gives s1 = 0, not admissible"))
        elif r in negatives and prob.branch != "4K+3":
            excluded.append((r, "negative xi root: no real coupling on this branch"))

    plus = [r for r in real_roots(_in_s(prob.secular, 1), precision_bits) if not (r.is_exact and r.exact == 0)]
    seeds.extend(RootSeed(r, 1) for r in plus)
    positives = [r for r in xi_roots if r.lo > 0]
    if len(plus) != 2 * len(positives):
        raise StructuralError(f"q={prob.q}: {len(plus)} s-roots for {len(positives)} positive xi roots")
    if prob.branch == "4K+3":
        minus = [r for r in real_roots(_in_s(prob.secular, -1), precision_bits) if not (r.is_exact and r.exact == 0)]
        seeds.extend(RootSeed(r, -1) for r in minus)
    seeds.sort(key=lambda sd: (sd.s1.lo, sd.rho))
    return QERoots(prob, tuple(seeds), tuple(excluded), rho_minus_checked=prob.branch == "4K+3")


# couplings


@dataclass(frozen=True)
class QESolution:
    N: int
    q: int
    root: AlgebraicRoot | Fraction
    rho: int
    xi: object
    couplings: tuple
    p: tuple
    residual: object
    precision_bits: int
    exact: bool = field(default=False)

    @property
    def s1(self) -> float:
        return float(self.couplings[0])

    @property
    def system(self) -> BandedSystem:
        return BandedSystem(self.N, self.q, self.couplings)


def _couplings(q, a, rho, xi, t):
    out = []
    for i in range(1, q + 1):
        j = (i + 1) // 2
        if i % 2:
            out.append(a * rho ** (j - 1) * t.sigma(j)(xi))
        else:
            out.append(rho ** j * t.Sigma(j)(xi))
    return tuple(out)


def couplings_from_root(
    q: int,
    s1: AlgebraicRoot | Fraction | int,
    rho: int = 1,
    precision_bits: int = DEFAULT_PRECISION,
) -> QESolution:
    """Full coupling vector ``s_1..s_q`` and ``p = (-1/a, 1, -1/ã)`` for a root.

    Rational roots are processed exactly and must give a zero residual; other
    roots are evaluated with mpmath and must leave a residual below
    ``2**(-precision_bits/2)``.
    """
    if rho not in (1, -1):
        raise ValueError("rho must be +1 or -1")
    t = sigma_table(q // 2 + 1)
    exact_value = None
    if isinstance(s1, AlgebraicRoot):
        if s1.is_exact:
            exact_value = s1.exact
        elif s1.width > Fraction(1, 2 ** precision_bits):
            s1 = s1.refine(precision_bits)
            exact_value = s1.exact
    else:
        exact_value = Fraction(s1)
    if exact_value is not None:
        a = exact_value
        if a == 0:
            raise ValueError("s1 = 0 is not admissible")
        xi = rho * a * a
        couplings = _couplings(q, a, rho, xi, t)
        p = (-1 / a, Fraction(1), -rho / a)
        res = residual(BandedSystem(3, q, couplings), p)
        bound = max_norm(res)
        if bound != 0:
            raise ConsistencyError(f"q={q}, s1={a}: exact residual {bound} is nonzero")
        return QESolution(3, q, s1, rho, xi, couplings, p, bound, precision_bits, exact=True)

    with mpmath.workprec(precision_bits):
        a = to_mpf(s1.midpoint)
        xi = rho * a * a
        couplings = _couplings(q, a, rho, xi, t)
        p = (-1 / a, mpmath.mpf(1), -rho / a)
        bound = max_norm(residual(BandedSystem(3, q, couplings), p))
        tol = mpmath.mpf(2) ** (-precision_bits / 2)
        if bound > tol:
            raise ConsistencyError(f"q={q}, s1≈{mpmath.nstr(a, 15)}: residual {mpmath.nstr(bound, 5)} above {mpmath.nstr(tol, 5)}")
    return QESolution(3, q, s1, rho, xi, couplings, p, bound, precision_bits)


def solutions(q: int, precision_bits: int = DEFAULT_PRECISION) -> list[QESolution]:
    roots = qe_roots(secular_poly(q), precision_bits)
    return [couplings_from_root(q, sd.s1, sd.rho, precision_bits) for sd in roots]


# structure of the coefficients


def reduced_even_secular(q: int) -> tuple[int, ...]:
    """Coefficients ``c_0..c_{q/2}`` of ``secular(q) / (s - 2)``, leading coefficient +1."""
    if q < 2 or q % 2:
        raise ValueError("q must be even and at least 2")
    prob = secular_poly(q)
    try:
        red = prob.secular.exact_divide(Poly.from_coeffs([-2, 1], S))
    except DivisibilityError as exc:
        raise StructuralError(f"q={q}: secular polynomial not divisible by s - 2") from exc
    cs = red.coeffs()
    cs = [c / cs[-1] for c in cs]
    if any(c.denominator != 1 for c in cs):
        raise StructuralError(f"q={q}: non-integer reduced coefficients {cs}")
    return tuple(int(c) for c in cs)


def pascal_magnitude(q: int, k: int) -> int:
    """Interleaved-binomial guess for ``|c_k|`` of the reduced even secular row."""
    h = q // 2
    return comb((h + k) // 2, (h - k) // 2)


def compact_form_4k1(K: int) -> Poly:
    """``(ξ - 4) * sum_m (-1)^(K-m) C(K+m, K-m) ξ^m``, checked against ``secular_poly(4K+1)``."""
    if K < 0:
        raise ValueError("K must be non-negative")
    inner = Poly.from_coeffs([(-1) ** (K - m) * comb(K + m, K - m) for m in range(K + 1)], XI)
    poly = Poly.from_coeffs([-4, 1], XI) * inner
    if poly != secular_poly(4 * K + 1).secular:
        raise StructuralError(f"compact form differs from the secular polynomial at K={K}")
    return poly


def kappa_sequence(K: int) -> tuple[int, ...]:
    """``(d_K, ..., d_0)``: secular(4K+1) divided by (ξ - 4), highest power first."""
    red = secular_poly(4 * K + 1).secular.exact_divide(Poly.from_coeffs([-4, 1], XI))
    cs = red.coeffs()
    if any(c.denominator != 1 for c in cs):
        raise StructuralError(f"K={K}: non-integer coefficients")
    return tuple(int(c) for c in reversed(cs))


# the 4K+3 conjecture


@dataclass(frozen=True)
class ConjectureReport:
    K: int
    holds: bool
    matched_roots: tuple[float, ...]
    leftovers: tuple[tuple[str, float | None], ...]
    reflection_symmetric: bool
    removed: tuple[tuple[int, int], ...]


def strip_trivial(poly: Poly) -> tuple[Poly, list[tuple[int, int]]]:
    """Divide out ξ - 4 and ξ with their multiplicities."""
    removed = []
    for root in (4, 0):
        lin = Poly.from_coeffs([-root, 1], XI)
        m = 0
        while True:
            try:
                poly = poly.exact_divide(lin)
            except DivisibilityError:
                break
            m += 1
        if m:
            removed.append((root, m))
    return poly, removed


def reflection_symmetric(poly: Poly) -> bool:
    """Exact test that the root multiset of ``poly`` is invariant under ξ -> 4 - ξ."""
    reflected = poly.substitute(XI, Poly.from_coeffs([4, -1], XI))
    return reflected == poly or reflected == -poly


def chebyshev_u_in_xi(K: int) -> Poly:
    """``U_K((2 - ξ)/2)`` as a polynomial in ξ."""
    return chebyshev_U(K).substitute("x", Poly.from_coeffs([1, Fraction(-1, 2)], XI))


def conjecture_check(K: int, precision_bits: int = DEFAULT_PRECISION) -> ConjectureReport:
    """Compare the nontrivial 4K+3 secular roots with the zeros of ``U_K((2-ξ)/2)``."""
    if K < 1:
        raise ValueError("K must be at least 1")
    core, removed = strip_trivial(secular_poly(4 * K + 3).secular)
    ours = _multiset(real_roots(core, precision_bits))
    theirs = _multiset(real_roots(chebyshev_u_in_xi(K), precision_bits))
    tol = Fraction(1, 2 ** (precision_bits // 2))
    matched, left_ours = [], []
    for r in ours:
        hit = next((i for i, u in enumerate(theirs) if abs(u.midpoint - r.midpoint) <= tol), None)
        if hit is None:
            left_ours.append(r)
        else:
            matched.append(r)
            theirs.pop(hit)
    complex_count = core.degree - len(ours)
    leftovers = [("secular", float(r)) for r in left_ours] + [("chebyshev", float(u)) for u in theirs]
    leftovers += [("secular-complex", None)] * complex_count
    return ConjectureReport(
        K=K,
        holds=not leftovers,
        matched_roots=tuple(float(r) for r in matched),
        leftovers=tuple(leftovers),
        reflection_symmetric=reflection_symmetric(core),
        removed=tuple(removed),
    )


def _multiset(roots: list[AlgebraicRoot]) -> list[AlgebraicRoot]:
    out = []
    for r in roots:
        out.extend([r] * r.multiplicity)
    return out


def factored_str(poly: Poly) -> str:
    """Display with rational linear factors split off, e.g. ``(ξ - 2)(ξ - 4)``."""
    lins, rest = factor_rational_roots(poly)
    var = poly.vars[0]
    parts = []
    for r, m in lins:
        lin = str(Poly.from_coeffs([-r, 1], var))
        parts.append(f"({lin})" + (f"^{m}" if m > 1 else ""))
    lead = rest.leading_coefficient if rest.degree >= 0 else Fraction(1)
    if rest.degree > 0:
        parts.append(f"({rest})")
    elif lead != 1:
        parts.insert(0, str(lead))
    return "".join(parts) if parts else str(poly)
