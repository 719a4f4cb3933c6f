import numpy as np
import pytest

from qes.oracle import (
    N4_CONFIG,
    OracleConfig,
    closed_form_s1,
    fill,
    oracle_compare,
    oracle_solve,
    row_structure,
)
from qes.secular import couplings_from_root


def s1_values(result, family="generic"):
    return sorted(round(s.s1, 8) for s in result.solutions if s.family == family)


def test_n3_q5():
    res = oracle_solve(3, 5)
    assert s1_values(res) == [-2, -1, 1, 2]
    assert s1_values(res, "degenerate") == [0.0]
    assert all(s.residual <= 1e-10 for s in res.solutions)


def test_n2_q4_single_branch():
    res = oracle_solve(2, 4)
    assert len(res.solutions) == 1
    assert res.solutions[0].s == pytest.approx((1, 1, 1, 1), abs=1e-10)


def test_n3_q7():
    assert s1_values(oracle_solve(3, 7)) == pytest.approx([-2, -(2**0.5), 2**0.5, 2], abs=1e-8)


def test_compare_n3_q3():
    rep = oracle_compare(3, 3)
    assert sorted(c for c, _ in rep.matched) == [-2, 2]
    assert [c for c, _ in rep.matched_degenerate] == [0.0]
    assert rep.agrees and not rep.discrepancy
    # both degenerate branches share s1 = 0; they differ further down
    degenerate = sorted(tuple(round(v, 8) for v in s.s) for s in oracle_solve(3, 3).solutions if s.family == "degenerate")
    assert degenerate == [(0, -2, 0), (0, 2, 0)]


def test_compare_n2_q5():
    rep = oracle_compare(2, 5)
    assert sorted(c for c, _ in rep.matched) == [-1, 1]
    assert rep.agrees


def test_compare_n3_q9():
    rep = oracle_compare(3, 9)
    assert len(rep.matched) == 6
    assert rep.agrees


def test_fill_reproduces_closed_form_couplings():
    sol = couplings_from_root(6, 2)
    p = [np.array([float(v)]) for v in sol.p]
    s, res = fill(3, 6, p)
    assert [float(v[0]) for v in s] == pytest.approx([float(c) for c in sol.couplings])
    assert max(abs(float(r[0])) for r in res) < 1e-12


@pytest.mark.parametrize("split", [1, 2, 3, 4])
def test_fill_split_independent_at_a_solution(split):
    sol = couplings_from_root(5, 1)
    p = [np.array([float(v)]) for v in sol.p]
    s, res = fill(3, 5, p, split=split)
    assert [float(v[0]) for v in s] == pytest.approx([float(c) for c in sol.couplings])
    assert max(abs(float(r[0])) for r in res) < 1e-12


def test_row_structure_reads_entry_rule():
    rows = row_structure(3, 1)
    assert rows[1] == [(1, None, 2), (2, 1, 0), (3, None, 2)]


def test_deterministic_and_worker_independent():
    cfg = OracleConfig(step=0.1)
    a = oracle_solve(3, 4, cfg)
    b = oracle_solve(3, 4, cfg)
    c = oracle_solve(3, 4, OracleConfig(step=0.1, chunk=997, workers=2))
    assert a == b
    assert [s.s for s in a.solutions] == [s.s for s in c.solutions]


def test_n4_exploratory_q1():
    res = oracle_solve(4, 1, N4_CONFIG)
    assert sorted({round(s.s1, 8) for s in res.solutions}) == [-3, -1, 1, 3]
    with pytest.raises(ValueError):
        closed_form_s1(4, 1)


def test_input_limits():
    with pytest.raises(ValueError):
        oracle_solve(3, 13)
    with pytest.raises(ValueError):
        oracle_solve(5, 2)
    with pytest.raises(ValueError):
        oracle_solve(4, 2, OracleConfig(step=0.01))
