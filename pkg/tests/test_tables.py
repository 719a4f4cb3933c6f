import mpmath
import pytest

from qes.tables import evaluate_expression, expand_signs, golden_values, reproduce


def test_expression_evaluator():
    with mpmath.workprec(256):
        assert abs(evaluate_expression("sqrt(2+sqrt(2))") - mpmath.sqrt(2 + mpmath.sqrt(2))) < mpmath.mpf(2) ** -250
    with pytest.raises(ValueError):
        evaluate_expression("__import__('os')")


def test_sign_expansion_is_independent():
    assert expand_signs("±sqrt(2±1)") == ["+sqrt(2+1)", "+sqrt(2-1)", "-sqrt(2+1)", "-sqrt(2-1)"]
    assert len(golden_values(["±2", "±sqrt(2±(sqrt(5)∓1)/2)"])) == 10


@pytest.mark.parametrize("which, count", [(1, 20), (2, 38), (3, 24), (4, 42)])
def test_tables_all_pass(which, count):
    cells = reproduce(which)
    assert len(cells) == count
    assert [c for c in cells if not c.ok] == []


def test_table2_has_eight_rows():
    assert sorted({c.q for c in reproduce(2)}) == list(range(2, 17, 2))


def test_table4_rows():
    assert sorted({c.q for c in reproduce(4)}) == [3, 7, 11, 15, 19, 23]
