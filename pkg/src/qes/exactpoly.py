"""Exact rational polynomials, Chebyshev generators and certified real roots.

Coefficients are :class:`fractions.Fraction`.  A :class:`Poly` lives in one or
two named variables.  Exponents are stored as integers; a per-variable grading
of 2 means the stored exponent ``e`` stands for ``e/2`` (half-integer powers).
Negative exponents are only accepted on polynomials flagged ``laurent``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

import mpmath

DEFAULT_PRECISION = 256

Exponent = tuple[int, ...]


class DivisibilityError(ArithmeticError):
    """Raised when an exact division leaves a nonzero remainder."""

    def __init__(self, message: str, remainder: "Poly"):
        super().__init__(f"{message}; remainder = {remainder}")
        self.remainder = remainder


class IncompatiblePolys(ValueError):
    pass


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    raise TypeError(f"exact coefficient expected, got {type(c).__name__}")


class Poly:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("vars", "grading", "laurent", "_terms", "_hash")

    def __init__(
        self,
        terms: Mapping[Exponent, object] | None = None,
        vars: Sequence[str] = ("x",),
        grading: Sequence[int] | None = None,
        laurent: bool = False,
    ):
        vars = tuple(vars)
        if not 1 <= len(vars) <= 2:
            raise ValueError("one or two variables supported")
        grading = tuple(grading) if grading is not None else (1,) * len(vars)
        if len(grading) != len(vars) or any(g not in (1, 2) for g in grading):
            raise ValueError(f"bad grading {grading!r}")
        clean: dict[Exponent, Fraction] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != len(vars):
                raise ValueError(f"exponent {exp} does not match variables {vars}")
            if not laurent and min(exp) < 0:
                raise ValueError(f"negative exponent {exp} on a non-Laurent polynomial")
            c = _frac(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if not clean[exp]:
                    del clean[exp]
        self.vars = vars
        self.grading = grading
        self.laurent = laurent
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    # construction helpers

    @classmethod
    def var(cls, name: str = "x", vars: Sequence[str] | None = None, **kw) -> "Poly":
        vars = tuple(vars) if vars else (name,)
        exp = tuple(1 if v == name else 0 for v in vars)
        return cls({exp: 1}, vars, **kw)

    @classmethod
    def const(cls, c, vars: Sequence[str] = ("x",), **kw) -> "Poly":
        return cls({(0,) * len(tuple(vars)): c}, vars, **kw)

    @classmethod
    def from_coeffs(cls, coeffs: Iterable, var: str = "x") -> "Poly":
        """Univariate polynomial from ascending coefficients."""
        return cls({(i,): c for i, c in enumerate(coeffs)}, (var,))

    def _like(self, terms, laurent=None) -> "Poly":
        return Poly(terms, self.vars, self.grading, self.laurent if laurent is None else laurent)

    # inspection

    @property
    def terms(self) -> dict[Exponent, Fraction]:
        return dict(self._terms)

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int | Fraction:
        """Maximum total exponent (in actual, not stored, units); -1 for zero."""
        if not self._terms:
            return -1
        best = max(sum(Fraction(e, g) for e, g in zip(exp, self.grading)) for exp in self._terms)
        return int(best) if best.denominator == 1 else best

    def degree_in(self, name: str) -> int:
        i = self.vars.index(name)
        return max((exp[i] for exp in self._terms), default=-1)

    def min_degree_in(self, name: str) -> int:
        i = self.vars.index(name)
        return min((exp[i] for exp in self._terms), default=0)

    def is_polynomial(self) -> bool:
        return all(min(exp) >= 0 for exp in self._terms)

    def as_polynomial(self) -> "Poly":
        """Drop the Laurent flag; fails if any negative exponent remains."""
        if not self.is_polynomial():
            raise ValueError(f"{self} has negative exponents")
        return self._like(self._terms, laurent=False)

    def coeffs(self) -> list[Fraction]:
        """Dense ascending coefficients of a univariate natural polynomial."""
        self._require_univariate()
        if not self._terms:
            return []
        out = [Fraction(0)] * (max(e[0] for e in self._terms) + 1)
        for (e,), c in self._terms.items():
            out[e] = c
        return out

    @property
    def leading_coefficient(self) -> Fraction:
        self._require_univariate()
        if not self._terms:
            return Fraction(0)
        return self._terms[max(self._terms)]

    def _require_univariate(self):
        if self.nvars != 1 or self.grading != (1,) or not self.is_polynomial():
            raise ValueError("operation needs a univariate polynomial with natural exponents")

    # arithmetic

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.vars != self.vars or other.grading != self.grading:
                raise IncompatiblePolys(f"variables {self.vars}/{self.grading} vs {other.vars}/{other.grading}")
            return other
        return Poly.const(other, self.vars, grading=self.grading)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for exp, c in other._terms.items():
            out[exp] = out.get(exp, 0) + c
        return self._like(out, self.laurent or other.laurent)

    __radd__ = __add__

    def __neg__(self):
        return self._like({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = _frac(other)
            return self._like({e: c * v for e, v in self._terms.items()})
        other = self._coerce(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return self._like(out, self.laurent or other.laurent)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = Poly.const(1, self.vars, grading=self.grading, laurent=self.laurent)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, Poly):
            return self.exact_divide(other)
        c = _frac(other)
        return self._like({e: v / c for e, v in self._terms.items()})

    def shift(self, name: str, k: int) -> "Poly":
        """Multiply by ``name**(k/grading)``; negative k needs a Laurent result."""
        i = self.vars.index(name)
        out = {e[:i] + (e[i] + k,) + e[i + 1:]: c for e, c in self._terms.items()}
        laurent = self.laurent or any(e[i] < 0 for e in out)
        return self._like(out, laurent)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        """Univariate long division."""
        self._require_univariate()
        other = self._coerce(other)
        other._require_univariate()
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        quot, rem = _dense_divmod(self.coeffs(), other.coeffs())
        return Poly.from_coeffs(quot, self.vars[0]), Poly.from_coeffs(rem, self.vars[0])

    def exact_divide(self, other) -> "Poly":
        """Exact quotient; raises :class:`DivisibilityError` carrying the remainder.

        Univariate divisors are handled by long division, monomial divisors by
        exponent shifts (a negative exponent left over counts as remainder).
        """
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if len(other._terms) == 1:
            (exp, c), = other._terms.items()
            shifted = {tuple(a - b for a, b in zip(e, exp)): v / c for e, v in self._terms.items()}
            neg = {e: v for e, v in shifted.items() if min(e) < 0}
            if neg and not self.laurent:
                rem = self._like({tuple(a + b for a, b in zip(e, exp)): v * c for e, v in neg.items()})
                raise DivisibilityError(f"{self} is not divisible by {other}", rem)
            return self._like(shifted)
        quot, rem = self.divmod(other)
        if not rem.is_zero():
            raise DivisibilityError(f"{self} is not divisible by {other}", rem)
        return quot

    def derivative(self) -> "Poly":
        self._require_univariate()
        return self._like({(e - 1,): c * e for (e,), c in self._terms.items() if e})

    def substitute(self, name: str, value: "Poly") -> "Poly":
        """Replace variable ``name`` by a polynomial in the remaining variables."""
        i = self.vars.index(name)
        if self.grading[i] != 1 or any(e[i] < 0 for e in self._terms):
            raise ValueError("substitution needs natural exponents on the replaced variable")
        if not isinstance(value, Poly):
            value = Poly.const(value, tuple(v for v in self.vars if v != name) or ("x",))
        rest = tuple(v for j, v in enumerate(self.vars) if j != i)
        if rest and not set(rest) <= set(value.vars):
            raise IncompatiblePolys(f"{value.vars} does not cover {rest}")
        out = Poly.const(0, value.vars, grading=value.grading, laurent=value.laurent)
        cache: dict[int, Poly] = {}
        for exp, c in self._terms.items():
            k = exp[i]
            if k not in cache:
                cache[k] = value ** k
            term = cache[k] * c
            for j, v in enumerate(self.vars):
                if j != i and exp[j]:
                    term = term * Poly.var(v, value.vars, grading=value.grading) ** exp[j]
            out = out + term
        return out

    # evaluation

    def __call__(self, *args, prec: int | None = None):
        return self.evaluate(*args, prec=prec)

    def evaluate(self, *args, prec: int | None = None):
        """Evaluate at a point.

        Univariate: ``p.evaluate(x)``.  Bivariate: ``p.evaluate(y, z)`` in
        variable order or a mapping.  Rational points with integral actual
        exponents give an exact :class:`Fraction` (Horner for univariate);
        anything else is computed with mpmath at ``prec`` bits.
        """
        if len(args) == 1 and isinstance(args[0], Mapping):
            point = tuple(args[0][v] for v in self.vars)
        else:
            point = tuple(args)
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinate(s)")
        exact = all(isinstance(x, (int, Rational)) for x in point) and prec is None
        if exact and all(g == 1 for g in self.grading):
            point = tuple(Fraction(x) for x in point)
            if self.nvars == 1 and self.is_polynomial():
                return horner(self.coeffs(), point[0])
            total = Fraction(0)
            for exp, c in self._terms.items():
                term = c
                for x, e in zip(point, exp):
                    term *= x ** e
                total += term
            return total
        with mpmath.workprec(prec or DEFAULT_PRECISION):
            pts = [to_mpf(x) for x in point]
            total = mpmath.mpf(0)
            for exp, c in self._terms.items():
                term = to_mpf(c)
                for x, e, g in zip(pts, exp, self.grading):
                    term *= x ** (mpmath.mpf(e) / g) if g != 1 else x ** e
                total += term
            return +total

    # comparison and display

    def _key(self):
        return (self.vars, self.grading, tuple(self._terms.items()))

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self._key() == other._key()
        if isinstance(other, (int, Rational)):
            return self == Poly.const(other, self.vars, grading=self.grading)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for exp, c in sorted(self._terms.items(), key=lambda t: (-sum(Fraction(e, g) for e, g in zip(t[0], self.grading)), [-e for e in t[0]])):
            mono = "".join(_mono(v, e, g) for v, e, g in zip(self.vars, exp, self.grading))
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            else:
                body = str(mag) + mono
            parts.append((sign, body))
        head_sign, head = parts[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def _mono(v: str, e: int, g: int) -> str:
    if e == 0:
        return ""
    power = Fraction(e, g)
    if power == 1:
        return v
    if power.denominator == 1:
        return f"{v}^{power.numerator}"
    return f"{v}^({power})"


def to_mpf(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    if isinstance(x, Rational):
        return mpmath.mpf(int(x.numerator)) / int(x.denominator)
    return mpmath.mpf(x)


def horner(coeffs: Sequence, x):
    acc = 0 * x
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _dense_divmod(num: list[Fraction], den: list[Fraction]):
    num = list(num)
    while den and den[-1] == 0:
        den = den[:-1]
    if len(num) < len(den):
        return [], num
    lead = den[-1]
    quot = [Fraction(0)] * (len(num) - len(den) + 1)
    for k in range(len(quot) - 1, -1, -1):
        c = num[k + len(den) - 1] / lead
        quot[k] = c
        if c:
            for j, d in enumerate(den):
                num[k + j] -= c * d
    rem = num[: len(den) - 1]
    while rem and rem[-1] == 0:
        rem.pop()
    return quot, rem


# univariate toolkit


def gcd(p: Poly, q: Poly) -> Poly:
    """Monic greatest common divisor of two univariate polynomials."""
    a, b = p.coeffs(), q.coeffs()
    while b:
        _, r = _dense_divmod(a, b)
        a, b = b, r
    if not a:
        return Poly({}, p.vars)
    return Poly.from_coeffs([c / a[-1] for c in a], p.vars[0])


def square_free_part(p: Poly) -> Poly:
    if p.is_zero():
        raise ValueError("zero polynomial has no square-free part")
    g = gcd(p, p.derivative())
    return p.exact_divide(g)


def square_free_factorization(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: ``p = lc * prod(f_i ** i)`` with square-free, coprime ``f_i``."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    out = []
    dp = p.derivative()
    a = gcd(p, dp)
    b = p.exact_divide(a)
    c = dp.exact_divide(a)
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        a = gcd(b, d)
        if a.degree > 0:
            out.append((a, i))
        b = b.exact_divide(a)
        c = d.exact_divide(a)
        d = c - b.derivative()
        i += 1
    return out


def integer_coeffs(p: Poly) -> list[int]:
    """Primitive integer coefficient vector with positive leading term."""
    cs = p.coeffs()
    lcm = 1
    for c in cs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in cs]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if ints and ints[-1] < 0:
        g = -g
    return [v // g for v in ints] if g else ints


def chebyshev_T(n: int, var: str = "x") -> Poly:
    """Chebyshev polynomial of the first kind, by ``T_{k+1} = 2x T_k - T_{k-1}``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    x = Poly.var(var)
    prev, cur = Poly.const(1, (var,)), x
    if n == 0:
        return prev
    for _ in range(n - 1):
        prev, cur = cur, 2 * x * cur - prev
    return cur


def chebyshev_U(n: int, var: str = "x") -> Poly:
    """Chebyshev polynomial of the second kind, ``U_0 = 1``, ``U_1 = 2x``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    x = Poly.var(var)
    prev, cur = Poly.const(1, (var,)), 2 * x
    if n == 0:
        return prev
    for _ in range(n - 1):
        prev, cur = cur, 2 * x * cur - prev
    return cur


# real root isolation


def _sign_at(ints: Sequence[int], x: Fraction) -> int:
    # sign of sum c_k n^k d^(deg-k) equals sign of p(n/d) since d > 0
    n, d = x.numerator, x.denominator
    total = 0
    npow, dpow = 1, d ** (len(ints) - 1)
    for c in ints:
        total += c * npow * dpow
        npow *= n
        dpow //= d
    return (total > 0) - (total < 0)


def _positive_primitive(cs: Sequence[Fraction]) -> list[int]:
    # clear denominators and content by a positive factor only
    lcm = 1
    for c in cs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in cs]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    return [v // g for v in ints] if g else ints


def _sturm_chain(ints: list[int]) -> list[list[int]]:
    chain = [ints, [k * c for k, c in enumerate(ints)][1:]]
    while len(chain[-1]) > 1:
        _, rem = _dense_divmod([Fraction(c) for c in chain[-2]], [Fraction(c) for c in chain[-1]])
        if not rem:
            break
        chain.append(_positive_primitive([-c for c in rem]))
    return chain


class SturmSequence:
    """Sturm chain of a square-free integer polynomial."""

    def __init__(self, p: Poly):
        self.ints = integer_coeffs(p)
        self.chain = _sturm_chain(self.ints)

    def variations(self, x: Fraction) -> int:
        signs = [s for s in (_sign_at(f, x) for f in self.chain) if s]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    def count(self, lo: Fraction, hi: Fraction) -> int:
        """Number of distinct roots in ``(lo, hi]``."""
        return self.variations(lo) - self.variations(hi)

    def sign(self, x: Fraction) -> int:
        return _sign_at(self.ints, x)


def root_bound(p: Poly) -> Fraction:
    """Power of two strictly above every root modulus (Cauchy bound)."""
    cs = p.coeffs()
    lead = abs(cs[-1])
    cauchy = 1 + max((abs(c) / lead for c in cs[:-1]), default=Fraction(0))
    b = Fraction(1)
    while b <= cauchy:
        b *= 2
    return b


@dataclass(frozen=True)
class AlgebraicRoot:
    """A real root of ``poly`` certified by the isolating interval ``[lo, hi]``.

    ``lo == hi`` marks an exact rational root.  Otherwise ``poly`` has exactly
    one root in ``(lo, hi)`` and opposite signs at the endpoints.
    """

    lo: Fraction
    hi: Fraction
    poly: Poly = field(compare=False)
    multiplicity: int = 1

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def exact(self) -> Fraction | None:
        return self.lo if self.is_exact else None

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def value(self, prec: int = DEFAULT_PRECISION):
        with mpmath.workprec(prec):
            return +to_mpf(self.midpoint)

    def __float__(self):
        return float(self.midpoint)

    def refine(self, bits: int) -> "AlgebraicRoot":
        """Bisect until the interval is narrower than ``2**-bits``; never widens."""
        if self.is_exact:
            return self
        ints = integer_coeffs(self.poly)
        lo, hi = self.lo, self.hi
        slo = _sign_at(ints, lo)
        target = Fraction(1, 2 ** bits)
        while hi - lo > target:
            mid = (lo + hi) / 2
            s = _sign_at(ints, mid)
            if s == 0:
                return AlgebraicRoot(mid, mid, self.poly, self.multiplicity)
            if s == slo:
                lo = mid
            else:
                hi = mid
        guess = ((lo + hi) / 2).limit_denominator(abs(ints[-1]))
        if lo <= guess <= hi and _sign_at(ints, guess) == 0:
            return AlgebraicRoot(guess, guess, self.poly, self.multiplicity)
        return AlgebraicRoot(lo, hi, self.poly, self.multiplicity)

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi


def isolate_real_roots(p: Poly) -> list[AlgebraicRoot]:
    """Disjoint isolating intervals for the real roots of a square-free ``p``."""
    sturm = SturmSequence(p)
    if len(sturm.ints) <= 1:
        return []
    bound = root_bound(p)
    out: list[AlgebraicRoot] = []
    stack = [(-bound, bound, sturm.count(-bound, bound))]
    while stack:
        lo, hi, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            out.append(AlgebraicRoot(lo, hi, p))
            continue
        mid = (lo + hi) / 2
        if sturm.sign(mid) == 0:
            out.append(AlgebraicRoot(mid, mid, p))
            delta = (hi - lo) / 4
            while True:
                a, b = mid - delta, mid + delta
                if sturm.sign(a) and sturm.sign(b) and sturm.count(a, b) == 1:
                    break
                delta /= 2
            stack.append((lo, a, sturm.count(lo, a)))
            stack.append((b, hi, sturm.count(b, hi)))
        else:
            stack.append((lo, mid, sturm.count(lo, mid)))
            stack.append((mid, hi, sturm.count(mid, hi)))
    return sorted(out, key=lambda r: r.lo)


def real_roots(p: Poly, precision_bits: int = DEFAULT_PRECISION) -> list[AlgebraicRoot]:
    """All distinct real roots of univariate ``p``, ascending, refined to ``2**-precision_bits``.

    Each root records its multiplicity in ``p``.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial has no isolated roots")
    p._require_univariate()
    if p.degree == 0:
        return []
    sqf = square_free_part(p)
    factors = square_free_factorization(p)
    roots = []
    for r in isolate_real_roots(sqf):
        r = r.refine(precision_bits)
        mult = 1
        for f, m in factors:
            fi = integer_coeffs(f)
            if r.is_exact:
                hit = _sign_at(fi, r.lo) == 0
            else:
                hit = _sign_at(fi, r.lo) * _sign_at(fi, r.hi) < 0
            if hit:
                mult = m
                break
        roots.append(AlgebraicRoot(r.lo, r.hi, sqf, mult))
    return roots


def rational_roots(p: Poly) -> list[Fraction]:
    """Exact rational roots (distinct, ascending)."""
    return [r.exact for r in real_roots(p, precision_bits=64) if r.is_exact]


def factor_rational_roots(p: Poly) -> tuple[list[tuple[Fraction, int]], Poly]:
    """Split off linear factors over Q: returns ``[(root, multiplicity)], cofactor``."""
    found = []
    rest = p
    for r in real_roots(p, precision_bits=64):
        if r.is_exact:
            lin = Poly.from_coeffs([-r.lo, 1], p.vars[0])
            for _ in range(r.multiplicity):
                rest = rest.exact_divide(lin)
            found.append((r.lo, r.multiplicity))
    return found, rest
