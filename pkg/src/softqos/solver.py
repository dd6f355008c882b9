"""Soft constraint satisfaction problems: solutions and best level of consistency."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .constraint import Constraint, ConstraintError, ConstraintSpace, combine_all
from .semiring import SemiringValue, SpecMismatchError

__all__ = ["SCSP", "SolutionReport", "solve", "alpha_consistent", "consistent", "maximal_tuples", "eliminate"]


@dataclass(frozen=True)
class SCSP:
    space: ConstraintSpace
    constraints: tuple[Constraint, ...]
    con: tuple[str, ...]

    def __init__(self, space: ConstraintSpace, constraints: Iterable[Constraint], con: Iterable[str]):
        constraints = tuple(constraints)
        for c in constraints:
            if c.space != space:
                raise ConstraintError("SCSP constraints must share the problem space")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "constraints", constraints)
        object.__setattr__(self, "con", space.canonical(con))


@dataclass(frozen=True)
class SolutionReport:
    solution: Constraint
    blevel: SemiringValue
    best: list[dict] = field(default_factory=list)


def eliminate(space: ConstraintSpace, constraints: Sequence[Constraint], keep: set[str]) -> Constraint:
    """Sum out every variable outside ``keep``, one bucket at a time."""
    pool = list(constraints)
    order = [v for v in space.variables if v not in keep and any(v in c.support for c in pool)]
    for var in order:
        bucket = [c for c in pool if var in c.support]
        if not bucket:
            continue
        pool = [c for c in pool if var not in c.support]
        joined = combine_all(bucket, space)
        pool.append(joined.project(set(joined.support) - {var}))
    return combine_all(pool, space).project(keep)


def maximal_tuples(c: Constraint) -> list[dict]:
    """Assignments of ``c``'s support whose value no other tuple strictly beats."""
    spec = c.spec
    rows = list(c.items())
    best = []
    for tup, val in rows:
        if not any(spec.lt(val, other) for _, other in rows):
            best.append(dict(zip(c.support, tup)))
    return best


def solve(problem: SCSP) -> SolutionReport:
    """``Sol(P) = (⊗C)⇓con`` together with its blevel and best assignments."""
    # unconstrained variables of interest still get a column in the table
    solution = eliminate(problem.space, problem.constraints, set(problem.con)).cylindrify(problem.con)
    blevel = solution.project(()).scalar()
    return SolutionReport(solution, blevel, maximal_tuples(solution))


def alpha_consistent(problem: SCSP, alpha: SemiringValue) -> bool:
    if alpha.spec != problem.space.spec:
        raise SpecMismatchError("alpha from a different semiring")
    level = solve(problem).blevel
    return problem.space.spec.eq(level.payload, alpha.payload)


def consistent(problem: SCSP) -> bool:
    spec = problem.space.spec
    return spec.lt(spec.zero(), solve(problem).blevel.payload)

