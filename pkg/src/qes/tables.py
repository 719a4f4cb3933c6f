"""Regenerate the four reference root/coefficient tables and diff them against golden values.

Golden values are exact expressions evaluated at run time.  ``±`` and ``∓``
each expand independently to both signs.
"""

from __future__ import annotations

import ast
import itertools
import operator
from dataclasses import dataclass

import mpmath

from .exactpoly import DEFAULT_PRECISION, Poly, real_roots, to_mpf
from .secular import qe_roots, reduced_even_secular, secular_poly

TOL = 1e-10

TABLE1 = {
    2: {"closed": ["2", "-1"]},
    4: {"closed": ["2", "(sqrt(5)-1)/2", "-(sqrt(5)+1)/2"]},
    6: {"closed": ["2"], "aux": [1, 1, -2, -1]},
    8: {"closed": ["2", "-1"], "aux": [1, 0, -3, 1]},
    10: {"closed": ["2"], "aux": [1, 1, -4, -3, 3, 1]},
}

# listed prefixes c_0, c_1, ... of each row
TABLE2 = {
    2: (1, 1),
    4: (-1, 1, 1),
    6: (-1, -2, 1, 1),
    8: (1, -2, -3, 1, 1),
    10: (1, 3, -3, -4, 1, 1),
    12: (-1, 3, 6, -4, -5, 1),
    14: (-1, -4, 6, 10, -5, -6),
    16: (1, -4, -10, 10, 15, -6),
}

TABLE3 = {
    1: ["2", "-2"],
    3: ["2", "-2"],
    5: ["2", "1", "-1", "-2"],
    7: ["2", "sqrt(2)", "-sqrt(2)", "-2"],
    9: ["2", "sqrt((3+sqrt(5))/2)", "sqrt((3-sqrt(5))/2)", "-sqrt((3-sqrt(5))/2)", "-sqrt((3+sqrt(5))/2)", "-2"],
    11: ["2", "sqrt(3)", "1", "-1", "-sqrt(3)", "-2"],
}

TABLE4 = {
    3: ["±2"],
    7: ["±2", "±sqrt(2)"],
    11: ["±2", "±sqrt(2±1)"],
    15: ["±2", "±sqrt(2)", "±sqrt(2±sqrt(2))"],
    19: ["±2", "±sqrt(2±(sqrt(5)∓1)/2)"],
    23: ["±2", "±sqrt(2)", "±sqrt(2±sqrt(2∓1))"],
}

_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def evaluate_expression(expr: str, prec: int = DEFAULT_PRECISION):
    """Evaluate an arithmetic expression with ``sqrt`` at ``prec`` bits."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return mpmath.mpf(node.value)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "sqrt" and len(node.args) == 1:
            return mpmath.sqrt(ev(node.args[0]))
        raise ValueError(f"unsupported expression element in {expr!r}")

    with mpmath.workprec(prec):
        return +ev(ast.parse(expr, mode="eval"))


def expand_signs(expr: str) -> list[str]:
    """All sign choices for every ``±`` / ``∓`` in ``expr``, each chosen independently."""
    slots = [i for i, ch in enumerate(expr) if ch in "±∓"]
    out = []
    for combo in itertools.product("+-", repeat=len(slots)):
        chars = list(expr)
        for i, sign in zip(slots, combo):
            chars[i] = sign
        out.append("".join(chars).replace("+-", "-").replace("--", "+"))
    return out


def golden_values(exprs: list[str], prec: int = DEFAULT_PRECISION) -> list[tuple[str, object]]:
    """Distinct values of the expanded expressions, sorted descending."""
    vals: list[tuple[str, object]] = []
    for e in exprs:
        for form in expand_signs(e):
            v = evaluate_expression(form, prec)
            if all(abs(v - w) > TOL for _, w in vals):
                vals.append((form, v))
    return sorted(vals, key=lambda t: -t[1])


@dataclass(frozen=True)
class Cell:
    table: int
    q: int
    index: int
    value: float | int | None
    expected: str
    status: str

    @property
    def ok(self) -> bool:
        return self.status == "PASS"


def _root_values(q: int, prec: int):
    roots = qe_roots(secular_poly(q), prec)
    with mpmath.workprec(prec):
        return sorted((sd.s1.value(prec) for sd in roots), reverse=True)


def _match_cells(table: int, q: int, got: list, expected: list[tuple[str, object]]) -> list[Cell]:
    cells = []
    spare = list(got)
    for idx, (expr, v) in enumerate(expected):
        hit = next((g for g in spare if abs(g - v) <= TOL), None)
        if hit is None:
            cells.append(Cell(table, q, idx, None, expr, "FAIL"))
        else:
            spare.remove(hit)
            cells.append(Cell(table, q, idx, float(hit), expr, "PASS"))
    for g in spare:
        cells.append(Cell(table, q, len(cells), float(g), "(unexpected)", "FAIL"))
    return cells


def table1(prec: int = DEFAULT_PRECISION) -> list[Cell]:
    cells = []
    for q, row in TABLE1.items():
        got = _root_values(q, prec)
        secular = secular_poly(q).secular
        expected = golden_values(row["closed"], prec)
        part = _match_cells(1, q, got, expected)
        if "aux" in row:
            aux = Poly.from_coeffs(list(reversed(row["aux"])), "a")
            leftovers = [c for c in part if c.expected == "(unexpected)"]
            part = [c for c in part if c.expected != "(unexpected)"]
            aux_roots = real_roots(aux, prec)
            label = f"root of {aux}"
            for c in leftovers:
                with mpmath.workprec(prec):
                    v = next(g for g in got if float(g) == c.value)
                    ok = abs(aux(v, prec=prec)) <= TOL and abs(secular(v, prec=prec)) <= TOL
                part.append(Cell(1, q, c.index, c.value, label, "PASS" if ok else "FAIL"))
            if len(leftovers) != len(aux_roots):
                part.append(Cell(1, q, len(part), len(leftovers), f"{len(aux_roots)} roots of {aux}", "FAIL"))
        cells.extend(part)
    return cells


def table2() -> list[Cell]:
    cells = []
    for q, listed in TABLE2.items():
        row = reduced_even_secular(q)
        for k, want in enumerate(listed):
            got = row[k] if k < len(row) else None
            cells.append(Cell(2, q, k, got, str(want), "PASS" if got == want else "FAIL"))
    return cells


def _sign_table(table: int, data: dict, prec: int) -> list[Cell]:
    cells = []
    for q, exprs in data.items():
        cells.extend(_match_cells(table, q, _root_values(q, prec), golden_values(exprs, prec)))
    return cells


def table3(prec: int = DEFAULT_PRECISION) -> list[Cell]:
    return _sign_table(3, TABLE3, prec)


def table4(prec: int = DEFAULT_PRECISION) -> list[Cell]:
    return _sign_table(4, TABLE4, prec)


def reproduce(which: int, prec: int = DEFAULT_PRECISION) -> list[Cell]:
    if which == 1:
        return table1(prec)
    if which == 2:
        return table2()
    if which == 3:
        return table3(prec)
    if which == 4:
        return table4(prec)
    raise ValueError("which must be 1, 2, 3 or 4")


__all__ = ["Cell", "reproduce", "golden_values", "expand_signs", "evaluate_expression", "to_mpf"]
