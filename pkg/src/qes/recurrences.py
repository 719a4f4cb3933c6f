"""Closed-form recurrence sequences for N = 2, 3 and 4."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactpoly import DivisibilityError, Poly, chebyshev_T, real_roots
from .msystem import BandedSystem, residual

XI = "ξ"
MAX_TERMS = 10_000


def _check_cap(n: int):
    if n > MAX_TERMS:
        raise ValueError(f"table length {n} exceeds the cap of {MAX_TERMS}")


@dataclass(frozen=True)
class SigmaTable:
    """``Sigma_k`` for k = 0..kmax and ``sigma_k`` for k = 1..kmax+1, polynomials in ξ."""

    big: tuple[Poly, ...]
    small: tuple[Poly, ...]

    @property
    def kmax(self) -> int:
        return len(self.big) - 1

    def Sigma(self, k: int) -> Poly:
        return self.big[k]

    def sigma(self, k: int) -> Poly:
        if k < 1:
            raise IndexError("sigma is indexed from 1")
        return self.small[k - 1]


def sigma_table(kmax: int) -> SigmaTable:
    """Coupled sequences ``Sigma_k = ξ sigma_k - Sigma_{k-1}``, ``sigma_{k+1} = Sigma_k - sigma_k``."""
    if kmax < 0:
        raise ValueError("kmax must be non-negative")
    _check_cap(kmax)
    xi = Poly.var(XI)
    big = [Poly.const(2, (XI,))]
    small = [Poly.const(1, (XI,))]
    for k in range(1, kmax + 1):
        big.append(xi * small[k - 1] - big[k - 1])
        small.append(big[k] - small[k - 1])
    return SigmaTable(tuple(big), tuple(small))


def chebyshev_reduction(k: int, table: SigmaTable | None = None) -> bool:
    """True iff ``Sigma_k(4x^2) = 2 T_{2k}(x)`` and ``x sigma_k(4x^2) = T_{2k-1}(x)``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    table = table if table is not None and table.kmax >= k else sigma_table(k)
    x = Poly.var("x")
    four_x2 = 4 * x * x
    big = table.Sigma(k).substitute(XI, four_x2)
    small = table.sigma(k).substitute(XI, four_x2)
    return big == 2 * chebyshev_T(2 * k) and x * small == chebyshev_T(2 * k - 1)


# N = 2


@dataclass(frozen=True)
class N2Branch:
    alpha: Fraction
    s: tuple[Fraction, ...]
    p: tuple[Fraction, ...]

    @property
    def system(self) -> BandedSystem:
        return BandedSystem(2, len(self.s), self.s)


def n2_chain(q: int) -> list[N2Branch]:
    """Real branches of the N = 2 chain ``s_k = alpha^k`` with ``alpha^(q+1) = 1``."""
    if q < 1:
        raise ValueError("q must be at least 1")
    a = Poly.var("α")
    out = []
    for root in real_roots(a ** (q + 1) - 1):
        alpha = root.exact
        s = tuple(alpha ** k for k in range(1, q + 1))
        out.append(N2Branch(alpha, s, (-1 / alpha, Fraction(1))))
    return out


# N = 3, p_1 = 0


@dataclass(frozen=True)
class DegenerateBranch:
    """N = 3 solution with vanishing middle coefficient, ``s_{2k} = 2 rho^k``."""

    rho: Fraction
    s: tuple[Fraction, ...]
    p: tuple[Fraction, ...]

    @property
    def system(self) -> BandedSystem:
        return BandedSystem(3, len(self.s), self.s)

    def reduced(self) -> BandedSystem | None:
        """Equivalent N = 2 system with couplings ``s_{2k}/2``; None when q = 1."""
        half = tuple(v / 2 for v in self.s[1::2])
        return BandedSystem(2, len(half), half) if half else None

    @property
    def reduced_p(self) -> tuple[Fraction, ...]:
        return (-1 / self.rho, Fraction(1))


def n3_degenerate(q: int) -> list[DegenerateBranch]:
    if q < 1:
        raise ValueError("q must be at least 1")
    if q % 2 == 0:
        return []
    Q = (q - 1) // 2
    r = Poly.var("ϱ")
    out = []
    for root in real_roots(r ** (Q + 1) - 1):
        rho = root.exact
        s = tuple(2 * rho ** (i // 2) if i % 2 == 0 else Fraction(0) for i in range(1, q + 1))
        out.append(DegenerateBranch(rho, s, (-1 / rho, Fraction(0), Fraction(1))))
    return out


def branch_residual(branch) -> list:
    return residual(branch.system, branch.p)


# N = 4

YZ = ("Y", "Z")


@dataclass(frozen=True)
class N4Table:
    P: tuple[Poly, ...]
    Q: tuple[Poly, ...]

    @property
    def nmax(self) -> int:
        return len(self.P) - 1


def n4_table(nmax: int) -> N4Table:
    """``P_n, Q_n`` for n = 0..nmax from the seeds ``Q_{-1} = 1/Z``, ``P_0 = Y + 2``, ``Q_0 = YZ + 3Z - 3``."""
    if nmax < 0:
        raise ValueError("nmax must be non-negative")
    _check_cap(nmax)
    Y = Poly.var("Y", YZ, laurent=True)
    Z = Poly.var("Z", YZ, laurent=True)
    one = Poly.const(1, YZ, laurent=True)
    q_prev = one.shift("Z", -1)
    P = [Y + 2]
    Q = [Y * Z + 3 * Z - 3]
    for n in range(nmax):
        p_next = Y * Z * Q[n] + Z * Z * P[n] - Y * Z * Z * (Q[n - 1] if n else q_prev)
        q_next = Z * p_next + Z * Z * Q[n] - Z * Z * P[n]
        P.append(p_next)
        Q.append(q_next)
    return N4Table(tuple(p.as_polynomial() for p in P), tuple(q.as_polynomial() for q in Q))


def regrade(p: Poly) -> Poly:
    """Re-express a (Y, Z) polynomial in the half-integer grading on Y."""
    terms = {(2 * e[0], e[1]): c for e, c in p.terms.items()}
    return Poly(terms, YZ, grading=(2, 1), laurent=True)


def _w_seeds():
    g = dict(grading=(2, 1), laurent=True)
    root_y = Poly({(1, 0): 1}, YZ, **g)
    w_m2 = Poly({(0, -1): 1}, YZ, **g)
    w_m1 = Poly({(1, 0): 1, (-1, 0): 2}, YZ, **g)
    w_0 = Poly({(2, 1): 1, (0, 1): 3, (0, 0): -3}, YZ, **g)
    return root_y, w_m2, w_m1, w_0


def w_sequence(nmax: int) -> dict[int, Poly]:
    """``W_n`` for n = -2..nmax via the single recurrence
    ``W_{n+1} = sqrt(Y) Z W_n + Z^2 W_{n-1} - sqrt(Y) Z^2 W_{n-2}``.
    """
    _check_cap(nmax)
    root_y, w_m2, w_m1, w_0 = _w_seeds()
    z = Poly({(0, 1): 1}, YZ, grading=(2, 1), laurent=True)
    W = {-2: w_m2, -1: w_m1, 0: w_0}
    for n in range(nmax):
        W[n + 1] = root_y * z * W[n] + z * z * W[n - 1] - root_y * z * z * W[n - 2]
    return W


def w_from_table(table: N4Table) -> dict[int, Poly]:
    """``W_{2m+1} = P_{m+1}/sqrt(Y)`` and ``W_{2m+2} = Q_{m+1}``, graded."""
    out = {0: regrade(table.Q[0])}
    for m in range(table.nmax):
        out[2 * m + 1] = regrade(table.P[m + 1]).shift("Y", -1)
        out[2 * m + 2] = regrade(table.Q[m + 1])
    return out


def z_quotient(w: Poly, k: int, index: int) -> Poly:
    """``w / Z^k``, raising :class:`DivisibilityError` if a lower power of Z survives."""
    i = w.vars.index("Z")
    low = {e: c for e, c in w.terms.items() if e[i] < k}
    if low:
        rem = Poly(low, w.vars, w.grading, w.laurent)
        raise DivisibilityError(f"W_{index} is not divisible by Z^{k}", rem)
    return w.shift("Z", -k)


def n4_divisibility(n: int, W: dict[int, Poly] | None = None) -> bool:
    """Check that ``W_{3n}``, ``W_{3n-1}`` are divisible by ``Z^{2n}`` and ``W_{3n-2}`` by ``Z^{2n-1}``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return True
    if W is None or max(W) < 3 * n:
        W = w_sequence(3 * n)
    z_quotient(W[3 * n], 2 * n, 3 * n)
    z_quotient(W[3 * n - 1], 2 * n, 3 * n - 1)
    z_quotient(W[3 * n - 2], 2 * n - 1, 3 * n - 2)
    return True
