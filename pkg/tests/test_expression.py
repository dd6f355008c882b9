import pytest

from softqos import ConstraintSpace, Probabilistic, Weighted
from softqos.expression import ExpressionError, compile_expression, evaluate, format_expr
from softqos.lang import parse_expression


def compile_text(text, support, space):
    return compile_expression(parse_expression(text), support, space)


@pytest.fixture
def space():
    return ConstraintSpace(Weighted(), {"x": (0, 1, 2, 3), "y": (0, 1)})


def test_implicit_product_and_precedence(space):
    c = compile_text("2x + x + 5", ["x"], space)
    assert [v for _, v in c.items()] == [5, 8, 11, 14]
    assert evaluate(parse_expression("1 + 2 * 3 - 4 / 2"), {}) == 5


def test_cases_and_logic(space):
    c = compile_text("cases { x <= 1 and y == 0 : 0; not (x == 3) : 2; else : inf }", ["x", "y"], space)
    assert c(x=0, y=0).payload == 0
    assert c(x=2, y=1).payload == 2
    assert c(x=3, y=1).payload == float("inf")


def test_probabilistic_reliability_formula():
    space = ConstraintSpace(Probabilistic(), {"o": (512, 2048, 4096, 8192), "b": (1024, 2048)})
    c = compile_text("cases { o <= 1024 : 1; o > 4096 : 0; else : 1 - o / (100 * b) }", ["o", "b"], space)
    assert c(o=4096, b=1024).payload == pytest.approx(0.96, abs=1e-9)
    assert c(o=512, b=1024).payload == 1.0
    assert c(o=8192, b=2048).payload == 0.0


def test_stray_variable_rejected(space):
    with pytest.raises(ExpressionError):
        compile_text("x + y", ["x"], space)


def test_out_of_carrier_rejected(space):
    with pytest.raises(ExpressionError):
        compile_text("x - 5", ["x"], space)


def test_division_by_zero(space):
    with pytest.raises(ExpressionError):
        compile_text("1 / x", ["x"], space)


def test_incomplete_cases(space):
    with pytest.raises(ExpressionError):
        compile_text("cases { x == 0 : 1 }", ["x"], space)


@pytest.mark.parametrize(
    "text",
    ["2 * x + x + 5", "x - (y - 1)", "(x + 1) * y", "-x + 3", "cases { x < 2 : 1; else : 0 }", "not (x == 1) or y == 0"],
)
def test_print_parse_round_trip(text):
    e = parse_expression(text)
    assert parse_expression(format_expr(e)) == e
