import pytest

from helpers import PROB_GRID_ODD, algebra_law_failures, exact_instances, instance_ids
from softqos import Constraint, ConstraintError, ConstraintSpace, Probabilistic, Weighted, constant, diagonal, entails
from softqos.semiring import SpecMismatchError


@pytest.fixture
def fig1():
    space = ConstraintSpace(Weighted(), {"X": ("a", "b"), "Y": ("a", "b")})
    c1 = Constraint.from_table(space, ["X"], {"a": 1, "b": 9})
    c2 = Constraint.from_table(space, ["X", "Y"], {("a", "a"): 5, ("a", "b"): 1, ("b", "a"): 2, ("b", "b"): 2})
    c3 = Constraint.from_table(space, ["Y"], {"a": 5, "b": 5})
    return space, c1, c2, c3


def test_combine_fig1(fig1):
    _, c1, c2, c3 = fig1
    combined = c1.combine(c2).combine(c3)
    assert combined.support == ("X", "Y")
    assert [v for _, v in combined.items()] == [11, 7, 16, 16]
    assert combined(X="a", Y="b").payload == 7


def test_project_and_hide(fig1):
    _, c1, c2, c3 = fig1
    combined = c1.combine(c2).combine(c3)
    sol = combined.project({"X"})
    assert dict(sol.items()) == {("a",): 7, ("b",): 16}
    assert combined.hide("Y").key() == sol.key()
    assert combined.project(()).scalar().payload == 7


def test_cylindrify_keeps_values(fig1):
    _, c1, _, _ = fig1
    wide = c1.cylindrify(["Y"])
    assert wide.support == ("X", "Y")
    assert wide.equals(c1)


def test_divide_pointwise():
    space = ConstraintSpace(Weighted(), {"x": range(0, 5)})
    c = Constraint.from_function(space, ["x"], lambda e: 3 * e["x"] + 5)
    d = Constraint.from_function(space, ["x"], lambda e: e["x"] + 3)
    assert [v for _, v in c.divide(d).items()] == [2 * x + 2 for x in range(5)]


def test_order_relations(fig1):
    space, c1, c2, _ = fig1
    assert c1.combine(c2).leq(c1)
    assert c1.combine(c2).lt(c1)
    assert not c1.lt(c1)
    assert c1.first_violation(c1) is None
    assert entails([c1, c2], c1)
    assert not entails([c1], c1.combine(c2))


def test_diagonal_and_constant():
    space = ConstraintSpace(Weighted(), {"x": (0, 1, 2), "y": (0, 1, 2)})
    d = diagonal(space, "x", "y")
    assert d(x=1, y=1).payload == 0 and d(x=1, y=2).payload == float("inf")
    assert diagonal(space, "x", "x").support == ()
    k = constant(Weighted().value(4), space)
    assert k.support == () and k.scalar().payload == 4


def test_rename():
    space = ConstraintSpace(Weighted(), {"x": (0, 1), "y": (0, 1), "z": (0, 1, 2)})
    c = Constraint.from_function(space, ["x"], lambda e: e["x"] + 1)
    r = c.rename({"x": "y"})
    assert r.support == ("y",) and r(y=1).payload == 2
    with pytest.raises(ConstraintError):
        c.rename({"x": "z"})


def test_errors():
    space = ConstraintSpace(Weighted(), {"x": (0, 1)})
    other = ConstraintSpace(Probabilistic(), {"x": (0, 1)})
    c = Constraint.from_function(space, ["x"], lambda e: 1)
    with pytest.raises(ConstraintError):
        c.combine(Constraint.from_function(other, ["x"], lambda e: 0.5))
    with pytest.raises(ConstraintError):
        Constraint.from_table(space, ["x"], {0: 1})
    with pytest.raises(ConstraintError):
        c.project({"nope"})
    with pytest.raises(SpecMismatchError):
        Constraint.from_function(space, ["x"], lambda e: Probabilistic().value(0.5))


@pytest.mark.parametrize("spec,grid", exact_instances(), ids=instance_ids())
def test_algebra_laws(spec, grid):
    assert algebra_law_failures(spec, grid, 60, seed=11) == []


def test_algebra_laws_probabilistic_inexact_values():
    assert algebra_law_failures(Probabilistic(), PROB_GRID_ODD, 100, seed=3) == []
