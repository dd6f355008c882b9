"""The unified problem file: header, constraints and optional sections.

:class:`ProblemFile` is the parsed, syntactic form (it round-trips through
the printer); :meth:`ProblemFile.build` compiles it into a :class:`Model`
with a concrete constraint space and tabulated constraints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .constraint import Constraint, ConstraintError, ConstraintSpace
from .expression import Expr, compile_expression
from .lang.ast import Program, ProcDecl, Agent
from .refinement import Orientation, RefinementQuery
from .semiring import Semiring
from .solver import SCSP

__all__ = ["VarDecl", "ConstraintDecl", "ProblemFile", "Model", "base_name"]


def base_name(var: str) -> str:
    """Strip the primes that mark renamed formals (``y''`` -> ``y``)."""
    return var.rstrip("'")


@dataclass(frozen=True)
class VarDecl:
    name: str
    domain: tuple


@dataclass(frozen=True)
class ConstraintDecl:
    name: str
    params: tuple[str, ...]
    body: Expr


@dataclass(frozen=True)
class ProblemFile:
    semiring: Semiring
    variables: tuple[VarDecl, ...] = ()
    fresh: tuple[VarDecl, ...] = ()
    constraints: tuple[ConstraintDecl, ...] = ()
    con: tuple[str, ...] | None = None
    implement: tuple[str, ...] | None = None
    require: str | None = None
    interface: tuple[str, ...] | None = None
    orientation: Orientation | None = None
    procedures: tuple[ProcDecl, ...] = ()
    agent: Agent | None = None

    @property
    def program(self) -> Program | None:
        if self.agent is None:
            return None
        return Program(self.procedures, self.agent)

    def build(self) -> "Model":
        return Model(self)


class Model:
    """Compiled view of a problem file."""

    def __init__(self, problem: ProblemFile):
        self.problem = problem
        domains: dict[str, tuple] = {}
        for decl in problem.variables + problem.fresh:
            if decl.name in domains:
                raise ConstraintError(f"variable {decl.name!r} declared twice")
            if "'" in decl.name:
                raise ConstraintError(f"variable names may not contain primes: {decl.name!r}")
            domains[decl.name] = decl.domain
        self.space = ConstraintSpace(problem.semiring, domains)
        self.fresh_pool: tuple[str, ...] = tuple(d.name for d in problem.fresh)
        self.constraints: dict[str, Constraint] = {}
        for decl in problem.constraints:
            if decl.name in self.constraints:
                raise ConstraintError(f"constraint {decl.name!r} declared twice")
            for p in decl.params:
                if p not in self.space:
                    raise ConstraintError(f"constraint {decl.name!r} uses undeclared variable {p!r}")
            self.constraints[decl.name] = compile_expression(decl.body, decl.params, self.space)

    @property
    def spec(self) -> Semiring:
        return self.space.spec

    def constraint(self, name: str) -> Constraint:
        try:
            return self.constraints[name]
        except KeyError:
            raise ConstraintError(f"unknown constraint {name!r}") from None

    def supports(self) -> Mapping[str, tuple]:
        return {name: c.support for name, c in self.constraints.items()}

    def domain(self, var: str) -> tuple:
        return self.space.domain(base_name(var))

    def scsp(self) -> SCSP:
        if self.problem.con is None:
            raise ConstraintError("problem file has no `con` section")
        return SCSP(self.space, self.constraints.values(), self.problem.con)

    def refinement_query(self, orientation: Orientation | str | None = None) -> RefinementQuery:
        p = self.problem
        if p.implement is None or p.require is None:
            raise ConstraintError("problem file has no refinement block (implement/require)")
        orientation = orientation or p.orientation
        if orientation is None:
            raise ConstraintError("refinement orientation must be stated explicitly")
        interface = p.interface
        if interface is None:
            interface = self.space.variables
        return RefinementQuery(
            tuple(self.constraint(n) for n in p.implement),
            self.constraint(p.require),
            tuple(interface),
            Orientation(orientation),
        )
