"""The banded (q+N-1) x N nonlinear system whose null vectors are QE solutions.

Row ``i`` and column ``j`` (both 1-based) of the matrix receive

* ``i`` on the superdiagonal ``j = i + 1`` (only while ``i <= N - 1``),
* ``N - j`` on the lower band ``i - j = q``,
* the coupling ``s[i-j+1]`` whenever ``1 <= i - j + 1 <= q``.

Scalars are generic: the same code runs over Fractions, mpmath floats, plain
floats or sympy symbols.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence


@dataclass(frozen=True)
class BandedSystem:
    N: int
    q: int
    s: tuple

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("N must be at least 2")
        if self.q < 1:
            raise ValueError("q must be at least 1")
        object.__setattr__(self, "s", tuple(self.s))
        if len(self.s) != self.q:
            raise ValueError(f"expected {self.q} couplings, got {len(self.s)}")

    @property
    def shape(self) -> tuple[int, int]:
        return self.q + self.N - 1, self.N


@dataclass(frozen=True)
class PVector:
    """Coefficients of the polynomial factor, with the component set to 1 recorded."""

    values: tuple
    normalized_index: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if all(v == 0 for v in self.values):
            raise ValueError("p vector is identically zero")

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, k):
        return self.values[k]


def entry(sys: BandedSystem, i: int, j: int) -> Any:
    """Matrix entry at 1-based row ``i``, column ``j``."""
    v = 0
    if j == i + 1 and i <= sys.N - 1:
        v = v + i
    if i - j == sys.q and 1 <= j <= sys.N:
        v = v + (sys.q + sys.N - i)
    k = i - j + 1
    if 1 <= k <= sys.q:
        v = v + sys.s[k - 1]
    return v


def build_matrix(sys: BandedSystem) -> list[list]:
    rows, cols = sys.shape
    return [[entry(sys, i, j) for j in range(1, cols + 1)] for i in range(1, rows + 1)]


def residual(sys: BandedSystem, p: Sequence) -> list:
    """``M(s) @ p``; zero exactly when ``(s, p)`` solves the system."""
    p = tuple(p)
    if len(p) != sys.N:
        raise ValueError(f"p has {len(p)} components, system has N={sys.N}")
    out = []
    for row in build_matrix(sys):
        acc = 0
        for m, pj in zip(row, p):
            if m != 0:
                acc = acc + m * pj
        out.append(acc)
    return out


def max_norm(vec: Sequence):
    return max((abs(v) for v in vec), default=0)


def tilde(sys: BandedSystem) -> BandedSystem:
    """Upside-down transposition: the same system with the couplings reversed."""
    return BandedSystem(sys.N, sys.q, tuple(reversed(sys.s)))
