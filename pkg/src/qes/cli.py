"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from functools import partial

import mpmath

from .exactpoly import DEFAULT_PRECISION, DivisibilityError
from .oracle import OracleConfig, N4_CONFIG, closed_form_s1, oracle_compare, oracle_solve
from .parallel import parallel_map, workers_from_env
from .recurrences import n4_divisibility, n4_table, w_sequence
from .secular import conjecture_check, couplings_from_root, factored_str, qe_roots, secular_poly
from .tables import reproduce

SCHEMA_VERSION = "1"
CONFIRMED_KMAX = 5


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if v < 1:
        raise argparse.ArgumentTypeError(f"{v} must be at least 1")
    return v


def _oracle_q(text: str) -> int:
    v = _positive_int(text)
    if v > 12:
        raise argparse.ArgumentTypeError("the oracle accepts q <= 12")
    return v


def _exact(v) -> str | int:
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else str(v)
    if isinstance(v, int):
        return v
    return mpmath.nstr(v, 30)


def _decimal(v, digits: int = 30) -> str:
    if isinstance(v, (Fraction, int)):
        v = mpmath.mpf(v.numerator) / v.denominator if isinstance(v, Fraction) else mpmath.mpf(v)
    return mpmath.nstr(v, digits)


def _g17(v) -> str:
    return f"{float(v):.17g}"


class Output:
    """Payload plus its pretty and CSV renderings."""

    def __init__(self, payload: dict, pretty: str, header: list[str], rows: list[list], code: int = 0):
        self.payload = {"schema_version": SCHEMA_VERSION, **payload}
        self.pretty = pretty
        self.header = header
        self.rows = rows
        self.code = code

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.payload, indent=2, ensure_ascii=False) + "\n"
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(self.header)
            w.writerows(self.rows)
            return buf.getvalue()
        return self.pretty.rstrip("\n") + "\n"


# commands


def cmd_secular(args) -> Output:
    prob = secular_poly(args.q)
    coeffs = [_exact(c) for c in prob.secular.coeffs()]
    payload = {
        "command": "secular",
        "q": prob.q,
        "branch": prob.branch,
        "K": prob.K,
        "variable": prob.variable,
        "degree": prob.degree,
        "coeffs": coeffs,
        "polynomial": str(prob.secular),
        "factored": factored_str(prob.secular),
    }
    pretty = (
        f"q = {prob.q}   branch {prob.branch}, K = {prob.K}   variable {prob.variable}\n"
        f"secular:  {prob.secular}\n"
        f"factored: {payload['factored']}"
    )
    rows = [[prob.q, prob.branch, prob.K, prob.variable, k, c] for k, c in enumerate(coeffs)]
    return Output(payload, pretty, ["q", "branch", "K", "variable", "power", "coefficient"], rows)


def _root_entry(sd, prec):
    r = sd.s1
    with mpmath.workprec(prec):
        v = r.value(prec)
        xi = sd.rho * v * v
        return {
            "value": float(v),
            "decimal": mpmath.nstr(v, 30),
            "exact": str(r.exact) if r.is_exact else f"root of {r.poly} in [{mpmath.nstr(_mpf(r.lo), 25)}, {mpmath.nstr(_mpf(r.hi), 25)}]",
            "rho": sd.rho,
            "xi": float(xi),
            "multiplicity": r.multiplicity,
        }


def _mpf(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


def cmd_roots(args) -> Output:
    prob = secular_poly(args.q)
    roots = qe_roots(prob, args.precision)
    entries = [_root_entry(sd, args.precision) for sd in roots]
    excluded = [{"value": float(r), "reason": why} for r, why in roots.excluded]
    payload = {
        "command": "roots",
        "q": prob.q,
        "branch": prob.branch,
        "K": prob.K,
        "variable": prob.variable,
        "roots": entries,
        "excluded": excluded,
        "rho_minus_checked": roots.rho_minus_checked,
        "rho_minus_roots": sum(1 for sd in roots if sd.rho == -1),
    }
    lines = [f"q = {prob.q}   branch {prob.branch}, K = {prob.K}   {len(entries)} real root(s) s1"]
    for i, e in enumerate(entries):
        lines.append(f"  [{i}] s1 = {e['decimal']}   rho = {e['rho']:+d}   ({e['exact']})")
    for e in excluded:
        lines.append(f"  excluded {e['value']:.17g}: {e['reason']}")
    if roots.rho_minus_checked:
        lines.append(f"  rho = -1 branch: {payload['rho_minus_roots']} root(s)")
    rows = [[prob.q, i, _g17(e["value"]), e["rho"], e["exact"]] for i, e in enumerate(entries)]
    return Output(payload, "\n".join(lines), ["q", "root_index", "value", "rho", "exact"], rows)


def cmd_couplings(args) -> Output:
    prob = secular_poly(args.q)
    sols = [couplings_from_root(args.q, sd.s1, sd.rho, args.precision) for sd in qe_roots(prob, args.precision)]
    entries = []
    for sol in sols:
        with mpmath.workprec(args.precision):
            entries.append({
                "s1": sol.s1,
                "rho": sol.rho,
                "exact": sol.exact,
                "couplings": [_decimal(c) for c in sol.couplings],
                "couplings_exact": [str(_exact(c)) for c in sol.couplings] if sol.exact else None,
                "p": [_decimal(c) for c in sol.p],
                "residual": float(sol.residual),
            })
    payload = {"command": "couplings", "q": args.q, "branch": prob.branch, "K": prob.K, "solutions": entries}
    lines = [f"q = {args.q}   branch {prob.branch}   {len(entries)} QE solution(s), N = 3"]
    for e in entries:
        cs = ", ".join(c if e["exact"] else mpmath.nstr(mpmath.mpf(c), 12) for c in (e["couplings_exact"] or e["couplings"]))
        lines.append(f"  s1 = {e['s1']:+.12f} rho = {e['rho']:+d}  s = ({cs})  residual = {e['residual']:.3g}")
    rows = []
    for i, e in enumerate(entries):
        for k, c in enumerate(e["couplings"], start=1):
            rows.append([args.q, i, k, _g17(mpmath.mpf(c))])
    return Output(payload, "\n".join(lines), ["q", "solution_index", "coupling_index", "value"], rows)


def cmd_tables(args) -> Output:
    cells = reproduce(args.which, args.precision)
    cells.sort(key=lambda c: (c.q, c.index))
    failed = [c for c in cells if not c.ok]
    payload = {
        "command": "tables",
        "which": args.which,
        "cells": [{"q": c.q, "index": c.index, "value": c.value, "expected": c.expected, "status": c.status} for c in cells],
        "passed": len(cells) - len(failed),
        "failed": len(failed),
    }
    lines = [f"Table {args.which}: {payload['passed']} PASS, {payload['failed']} FAIL (tol 1e-10)"]
    for c in cells:
        shown = "-" if c.value is None else (str(c.value) if isinstance(c.value, int) else f"{c.value:.15g}")
        lines.append(f"  q={c.q:<3d} [{c.index}] {shown:>22}  expected {c.expected:<40} {c.status}")
    rows = [[c.q, c.index, "" if c.value is None else (c.value if isinstance(c.value, int) else _g17(c.value)), c.expected, c.status] for c in cells]
    return Output(payload, "\n".join(lines), ["q", "root_index", "value", "expected", "status"], rows, 1 if failed else 0)


def cmd_conjecture(args) -> Output:
    reports = parallel_map(partial(conjecture_check, precision_bits=args.precision), range(1, args.kmax + 1))
    entries = []
    code = 0
    lines = []
    for r in reports:
        confirmed = r.K <= CONFIRMED_KMAX
        if confirmed and not r.holds:
            code = 1
        entries.append({
            "K": r.K,
            "q": 4 * r.K + 3,
            "holds": r.holds,
            "confirmed_range": confirmed,
            "reflection_symmetric": r.reflection_symmetric,
            "matched_roots": list(r.matched_roots),
            "leftovers": [list(x) for x in r.leftovers],
            "removed": [list(x) for x in r.removed],
        })
        tag = "" if confirmed else "  (informational)"
        verdict = "holds" if r.holds else "FAILS"
        lines.append(f"K = {r.K:<2d} q = {4 * r.K + 3:<3d} {verdict}, {len(r.matched_roots)} nontrivial roots matched, "
                     f"reflection {'symmetric' if r.reflection_symmetric else 'BROKEN'}{tag}")
    payload = {"command": "conjecture", "kmax": args.kmax, "results": entries}
    rows = [[e["K"], e["q"], e["holds"], e["reflection_symmetric"], len(e["matched_roots"]), len(e["leftovers"])] for e in entries]
    return Output(payload, "\n".join(lines), ["K", "q", "holds", "reflection_symmetric", "matched", "leftovers"], rows, code)


def cmd_oracle(args) -> Output:
    base = N4_CONFIG if args.N == 4 else OracleConfig()
    cfg = OracleConfig(
        box=tuple(args.box) if args.box else base.box,
        step=args.step or base.step,
        workers=workers_from_env(),
    )
    result = oracle_solve(args.N, args.q, cfg)
    sols = [{"family": s.family, "s1": s.s1, "s": list(s.s), "p": list(s.p), "residual": s.residual} for s in result.solutions]
    payload = {"command": "oracle", "N": args.N, "q": args.q, "box": list(cfg.box), "step": cfg.step,
               "seeds": result.seeds, "discarded": result.discarded, "solutions": sols}
    lines = [f"oracle N = {args.N}, q = {args.q}: {len(sols)} solution(s) from {result.seeds} seeds ({result.discarded} discarded)"]
    for s in sols:
        lines.append(f"  {s['family']:<10} s1 = {s['s1']:+.12f}   residual {s['residual']:.2e}")
    code = 0
    if args.N in (2, 3):
        rep = oracle_compare(args.N, args.q, args.tol, cfg)
        payload.update({
            "tol": args.tol,
            "closed_form": closed_form_s1(args.N, args.q),
            "matched": [list(m) for m in rep.matched],
            "matched_degenerate": [list(m) for m in rep.matched_degenerate],
            "missing_in_oracle": list(rep.missing_in_oracle),
            "missing_in_closed_form": list(rep.missing_in_closed_form),
            "discrepancy": rep.discrepancy,
            "agrees": rep.agrees,
        })
        lines.append(f"matched {len(rep.matched)} closed-form value(s) + {len(rep.matched_degenerate)} degenerate; "
                     f"missing in oracle {list(rep.missing_in_oracle)}, missing in closed form {list(rep.missing_in_closed_form)}")
        lines.append("AGREE" if rep.agrees else "DISAGREE")
        code = 0 if rep.agrees else 1
    else:
        lines.append("N = 4: exploratory only, no closed form to compare")
    rows = [[s["family"], _g17(s["s1"]), f"{s['residual']:.3e}"] for s in sols]
    return Output(payload, "\n".join(lines), ["family", "s1", "residual"], rows, code)


def cmd_n4(args) -> Output:
    table = n4_table(args.nmax)
    W = w_sequence(3 * args.nmax) if args.nmax else None
    checks = []
    code = 0
    for n in range(1, args.nmax + 1):
        try:
            ok, err = n4_divisibility(n, W), None
        except DivisibilityError as exc:
            ok, err, code = False, str(exc), 1
        checks.append({"n": n, "holds": ok, "error": err})
    payload = {"command": "n4", "nmax": args.nmax, "P": [str(p) for p in table.P], "Q": [str(q) for q in table.Q],
               "divisibility": checks}
    lines = []
    for n in range(args.nmax + 1):
        lines.append(f"P_{n} = {table.P[n]}")
        lines.append(f"Q_{n} = {table.Q[n]}")
    for c in checks:
        lines.append(f"n = {c['n']}: W_{3 * c['n']}, W_{3 * c['n'] - 1} | Z^{2 * c['n']} and W_{3 * c['n'] - 2} | Z^{2 * c['n'] - 1}: "
                     + ("holds" if c["holds"] else f"FAILS ({c['error']})"))
    rows = [[n, str(table.P[n]), str(table.Q[n]), next((c["holds"] for c in checks if c["n"] == n), "")] for n in range(args.nmax + 1)]
    return Output(payload, "\n".join(lines), ["n", "P", "Q", "divisible"], rows, code)


# parser


def _add_common(p: argparse.ArgumentParser, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--precision", type=_positive_int, default=d(DEFAULT_PRECISION), help="working precision in bits")
    p.add_argument("--format", choices=("pretty", "json", "csv"), default=d("pretty"))
    p.add_argument("--out", default=d(None), help="write output to this path instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qes", description="Quasi-exact N = 2, 3, 4 Magyari-Schrödinger systems in the D -> infinity limit.")
    _add_common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        p = sub.add_parser(name, help=help)
        _add_common(p, suppress=True)
        p.set_defaults(func=fn)
        return p

    add("secular", cmd_secular, "secular polynomial at N = 3").add_argument("--q", type=_positive_int, required=True)
    add("roots", cmd_roots, "real QE roots s1 at N = 3").add_argument("--q", type=_positive_int, required=True)
    add("couplings", cmd_couplings, "full coupling vectors at N = 3").add_argument("--q", type=_positive_int, required=True)
    add("tables", cmd_tables, "reproduce a reference table").add_argument("--which", type=int, choices=(1, 2, 3, 4), required=True)
    add("conjecture", cmd_conjecture, "Chebyshev-U conjecture at q = 4K+3").add_argument("--kmax", type=_positive_int, required=True)
    p = add("oracle", cmd_oracle, "brute-force numeric cross-check")
    p.add_argument("--N", type=int, choices=(2, 3, 4), required=True)
    p.add_argument("--q", type=_oracle_q, required=True)
    p.add_argument("--box", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--step", type=float)
    p.add_argument("--tol", type=float, default=1e-6)
    p = add("n4", cmd_n4, "N = 4 recurrence table and divisibility laws")
    p.add_argument("--nmax", type=int, default=3)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "step", None) is not None and args.step <= 0:
        parser.error("--step must be positive")
    if getattr(args, "nmax", 0) < 0:
        parser.error("--nmax must be non-negative")
    try:
        out = args.func(args)
    except ValueError as exc:
        parser.error(str(exc))
    text = out.render(args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return out.code


if __name__ == "__main__":
    sys.exit(main())
