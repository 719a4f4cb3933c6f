"""Brute-force numeric solver for the raw banded system, used to certify closed forms.

The unknown coefficient vector ``p`` is parametrized by a few boundary values.
Couplings are then filled in from the top rows (solving each row for its
first-column coupling) and from the bottom rows (solving for the last-column
coupling).  The ``N - 1`` middle rows that are left over form a small square
(or, for the degenerate N = 3 family, overdetermined) system in the
parameters.  It is solved by damped Newton from every point of a dense grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import mpmath
import numpy as np

from .msystem import BandedSystem, entry, max_norm, residual
from .parallel import parallel_map
from .recurrences import n2_chain, n3_degenerate
from .secular import qe_roots, secular_poly


@dataclass(frozen=True)
class OracleConfig:
    box: tuple[float, float] = (-6.0, 6.0)
    step: float = 0.05
    newton_tol: float = 1e-12
    max_iter: int = 60
    dedupe_tol: float = 1e-8
    residual_tol: float = 1e-10
    residual_prec: int = 64
    max_seeds: int = 300_000
    chunk: int = 20_000
    workers: int = 1


N4_CONFIG = OracleConfig(step=0.25)


@dataclass(frozen=True)
class Family:
    name: str
    dim: int
    to_p: Callable


def _p_n2(x):
    (a,) = x
    return [-1 / a, np.ones_like(a)]


def _p_n3(x):
    a, at = x
    return [-1 / a, np.ones_like(a), -1 / at]


def _p_n3_degenerate(x):
    (c,) = x
    return [c, np.zeros_like(c), np.ones_like(c)]


def _p_n4(x):
    alpha, alpha_t, b = x
    return [-1 / (b * alpha), 1 / b, np.ones_like(alpha), -1 / alpha_t]


FAMILIES = {
    2: [Family("generic", 1, _p_n2)],
    3: [Family("generic", 2, _p_n3), Family("degenerate", 1, _p_n3_degenerate)],
    4: [Family("generic", 3, _p_n4)],
}


@dataclass(frozen=True)
class OracleSolution:
    N: int
    q: int
    family: str
    params: tuple[float, ...]
    s: tuple[float, ...]
    p: tuple[float, ...]
    residual: float

    @property
    def s1(self) -> float:
        return self.s[0]


@dataclass(frozen=True)
class OracleResult:
    N: int
    q: int
    solutions: tuple[OracleSolution, ...]
    seeds: int
    discarded: int


class _Slot:
    """Placeholder coupling used to read the entry rule off ``msystem.entry``."""

    def __init__(self, k, const=0):
        self.k, self.const = k, const

    def __add__(self, other):
        return _Slot(self.k, self.const + other)

    __radd__ = __add__


def row_structure(N: int, q: int) -> list[list[tuple[int, int | None, int]]]:
    """Per row: ``(column, coupling index or None, constant)`` for each nonzero cell."""
    sys = BandedSystem(N, q, tuple(_Slot(k) for k in range(1, q + 1)))
    rows = []
    for i in range(1, q + N):
        cells = []
        for j in range(1, N + 1):
            e = entry(sys, i, j)
            if isinstance(e, _Slot):
                cells.append((j, e.k, e.const))
            elif e:
                cells.append((j, None, e))
        rows.append(cells)
    return rows


def _row(rows, s, i, p):
    acc = 0.0
    for j, k, c in rows[i - 1]:
        coef = s[k - 1] + c if k is not None else c
        acc = acc + coef * p[j - 1]
    return acc


def fill(N: int, q: int, p: list, split: int | None = None, rows=None):
    """Couplings from the outer rows and residual of the ``N - 1`` middle rows.

    Rows ``1..split`` fix ``s_1..s_split`` top-down; rows ``q+N-1`` down to
    ``split+N`` fix ``s_q..s_{split+1}`` bottom-up.
    """
    rows = rows or row_structure(N, q)
    m = q // 2 if split is None else split
    zero = np.zeros_like(p[0], dtype=float)
    s = [zero] * q
    for i in range(1, m + 1):
        s[i - 1] = zero
        s[i - 1] = -_row(rows, s, i, p) / p[0]
    for i in range(q + N - 1, m + N - 1, -1):
        k = i - N + 1
        s[k - 1] = zero
        s[k - 1] = -_row(rows, s, i, p) / p[N - 1]
    res = [_row(rows, s, i, p) for i in range(m + 1, m + N)]
    return s, res


def _solve_chunk(args):
    N, q, fam_name, x0, cfg = args
    fam = next(f for f in FAMILIES[N] if f.name == fam_name)
    rows = row_structure(N, q)
    limit = 1e3 * max(abs(cfg.box[0]), abs(cfg.box[1]))

    def F(x):
        with np.errstate(all="ignore"):
            _, res = fill(N, q, fam.to_p(list(x)), rows=rows)
        return np.array(res)

    x = x0.copy()
    active = np.ones(x.shape[1], dtype=bool)
    done = np.zeros(x.shape[1], dtype=bool)
    fx = F(x)
    norm = np.max(np.abs(fx), axis=0)
    for _ in range(cfg.max_iter):
        done |= norm <= cfg.newton_tol
        active &= np.isfinite(norm) & ~done & np.all(np.abs(x) < limit, axis=0)
        if not active.any():
            break
        xa = x[:, active]
        fa = fx[:, active]
        h = 1e-7 * np.maximum(1.0, np.abs(xa))
        J = np.empty((fa.shape[1], fa.shape[0], xa.shape[0]))
        for d in range(xa.shape[0]):
            e = np.zeros_like(xa)
            e[d] = h[d]
            J[:, :, d] = ((F(xa + e) - F(xa - e)) / (2 * h[d])).T
        with np.errstate(all="ignore"):
            dx = _newton_step(J, fa)
        na = norm[active]
        lam = np.ones(na.shape)
        xn = xa + dx
        fn = F(xn)
        nn = np.max(np.abs(fn), axis=0)
        for _ in range(10):
            worse = ~(nn < na)
            if not worse.any():
                break
            lam[worse] /= 2
            xn[:, worse] = xa[:, worse] + lam[worse] * dx[:, worse]
            fn[:, worse] = F(xn[:, worse])
            nn[worse] = np.max(np.abs(fn[:, worse]), axis=0)
        idx = np.flatnonzero(active)
        stalled = ~(nn < na)
        keep = idx[~stalled]
        x[:, keep] = xn[:, ~stalled]
        fx[:, keep] = fn[:, ~stalled]
        norm[keep] = nn[~stalled]
        active[idx[stalled]] = False
    done |= norm <= cfg.newton_tol
    return x[:, done], int((~done).sum())


def _newton_step(J: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Least-squares Newton step per seed; J is (seeds, eqs, dim), f is (eqs, seeds)."""
    bad = ~np.all(np.isfinite(J), axis=(1, 2))
    J = np.where(bad[:, None, None], 0.0, J)
    rhs = np.where(np.isfinite(f.T), f.T, 0.0)[:, :, None]
    if J.shape[1] == J.shape[2]:
        det = np.linalg.det(J)
        ok = np.isfinite(det) & (np.abs(det) > 1e-300) & ~bad
        dx = np.full((J.shape[0], J.shape[2]), np.nan)
        if ok.any():
            dx[ok] = -np.linalg.solve(J[ok], rhs[ok])[:, :, 0]
        return dx.T
    JT = np.transpose(J, (0, 2, 1))
    A = JT @ J
    det = np.linalg.det(A)
    ok = np.isfinite(det) & (np.abs(det) > 1e-300) & ~bad
    dx = np.full((J.shape[0], J.shape[2]), np.nan)
    if ok.any():
        dx[ok] = -np.linalg.solve(A[ok], (JT @ rhs)[ok])[:, :, 0]
    return dx.T


def _grid(dim: int, cfg: OracleConfig) -> np.ndarray:
    lo, hi = cfg.box
    n = int(round((hi - lo) / cfg.step)) + 1
    if n ** dim > cfg.max_seeds:
        raise ValueError(f"{n ** dim} seeds exceed max_seeds={cfg.max_seeds}; enlarge the step")
    axis = np.linspace(lo, hi, n)
    mesh = np.meshgrid(*([axis] * dim), indexing="ij")
    return np.stack([m.ravel() for m in mesh])


def oracle_solve(N: int, q: int, config: OracleConfig | None = None) -> OracleResult:
    """All real solutions found by grid-seeded Newton, deduplicated."""
    if N not in FAMILIES:
        raise ValueError("oracle supports N = 2, 3, 4")
    if not 1 <= q <= 12:
        raise ValueError("oracle supports 1 <= q <= 12")
    cfg = config or (N4_CONFIG if N == 4 else OracleConfig())
    found: list[OracleSolution] = []
    seeds = discarded = 0
    for fam in FAMILIES[N]:
        grid = _grid(fam.dim, cfg)
        with np.errstate(all="ignore"):
            _, r0 = fill(N, q, fam.to_p(list(grid)))
        ok = np.all(np.isfinite(np.array(r0)), axis=0)
        grid = grid[:, ok]
        seeds += grid.shape[1]
        chunks = [(N, q, fam.name, grid[:, k:k + cfg.chunk], cfg) for k in range(0, grid.shape[1], cfg.chunk)]
        xs = []
        for x, bad in parallel_map(_solve_chunk, chunks, cfg.workers):
            xs.append(x)
            discarded += bad
        x = np.concatenate(xs, axis=1) if xs else np.zeros((fam.dim, 0))
        for params in _dedupe(x, cfg.dedupe_tol):
            sol = _certify(N, q, fam, params, cfg)
            if sol is None:
                discarded += 1
            else:
                found.append(sol)
    found.sort(key=lambda s: (s.family, s.s1, s.params))
    return OracleResult(N, q, tuple(found), seeds, discarded)


def _dedupe(x: np.ndarray, tol: float) -> list[tuple[float, ...]]:
    pts = sorted(map(tuple, x.T.tolist()))
    reps: list[tuple[float, ...]] = []
    for pt in pts:
        if not all(np.isfinite(pt)):
            continue
        if not any(max(abs(a - b) for a, b in zip(pt, r)) <= tol for r in reps):
            reps.append(pt)
    return reps


def _certify(N, q, fam, params, cfg) -> OracleSolution | None:
    x = [np.array([v]) for v in params]
    p = fam.to_p(x)
    s, _ = fill(N, q, p)
    s = tuple(float(v[0]) for v in s)
    p = tuple(float(v[0]) for v in p)
    with mpmath.workprec(cfg.residual_prec):
        res = max_norm(residual(BandedSystem(N, q, tuple(mpmath.mpf(v) for v in s)), [mpmath.mpf(v) for v in p]))
        res = float(res)
    if not res <= cfg.residual_tol:
        return None
    return OracleSolution(N, q, fam.name, tuple(params), s, p, res)


# comparison with the closed forms


@dataclass(frozen=True)
class OracleReport:
    N: int
    q: int
    tol: float
    matched: tuple[tuple[float, float], ...]
    matched_degenerate: tuple[tuple[float, float], ...]
    missing_in_oracle: tuple[float, ...]
    missing_in_closed_form: tuple[float, ...]
    discrepancy: bool
    seeds: int
    discarded: int

    @property
    def agrees(self) -> bool:
        return not self.missing_in_oracle and not self.missing_in_closed_form


def closed_form_s1(N: int, q: int) -> dict[str, list[float]]:
    if N == 2:
        return {"generic": [float(b.alpha) for b in n2_chain(q)], "degenerate": []}
    if N == 3:
        return {
            "generic": qe_roots(secular_poly(q)).values(),
            "degenerate": [float(b.s[0]) for b in n3_degenerate(q)],
        }
    raise ValueError("closed forms exist only for N = 2 and N = 3")


def _distinct(values, tol):
    out: list[float] = []
    for v in sorted(values):
        if not out or abs(v - out[-1]) > tol:
            out.append(v)
    return out


def _match(closed, found, tol):
    closed, found = _distinct(closed, tol), _distinct(found, tol)
    pairs, spare = [], list(found)
    missing = []
    for c in closed:
        best = min(spare, key=lambda f: abs(f - c), default=None)
        if best is not None and abs(best - c) <= tol:
            pairs.append((c, best))
            spare.remove(best)
        else:
            missing.append(c)
    return pairs, missing, spare


def oracle_compare(N: int, q: int, tol: float = 1e-6, config: OracleConfig | None = None) -> OracleReport:
    closed = closed_form_s1(N, q)
    result = oracle_solve(N, q, config)
    by_family: dict[str, list[float]] = {"generic": [], "degenerate": []}
    for sol in result.solutions:
        by_family[sol.family].append(sol.s1)
    gen, miss_g, extra_g = _match(closed["generic"], by_family["generic"], tol)
    deg, miss_d, extra_d = _match(closed["degenerate"], by_family["degenerate"], tol)
    any_closed = bool(closed["generic"] or closed["degenerate"])
    return OracleReport(
        N=N,
        q=q,
        tol=tol,
        matched=tuple(gen),
        matched_degenerate=tuple(deg),
        missing_in_oracle=tuple(sorted(miss_g + miss_d)),
        missing_in_closed_form=tuple(sorted(extra_g + extra_d)),
        discrepancy=any_closed and not result.solutions,
        seeds=result.seeds,
        discarded=result.discarded,
    )
