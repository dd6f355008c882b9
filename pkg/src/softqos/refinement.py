"""Local refinement between a composed implementation and a requirement."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .constraint import Constraint, ConstraintError
from .semiring import SemiringValue
from .solver import eliminate

__all__ = [
    "Orientation",
    "RefinementQuery",
    "RefinementReport",
    "locally_refines",
    "reliability_margin",
]


class Orientation(str, Enum):
    """Which side must be below the other in the constraint order."""

    IMPL_REFINES_REQ = "impl_refines_req"  # S⇓V ⊑ R⇓V
    REQ_REFINES_IMPL = "req_refines_impl"  # R⇓V ⊑ S⇓V


@dataclass(frozen=True)
class RefinementQuery:
    implementation: tuple[Constraint, ...]
    requirement: Constraint
    interface: tuple[str, ...]
    orientation: Orientation = Orientation.IMPL_REFINES_REQ

    def __post_init__(self):
        space = self.requirement.space
        for c in self.implementation:
            if c.space != space:
                raise ConstraintError("implementation and requirement live in different spaces")
        object.__setattr__(self, "implementation", tuple(self.implementation))
        object.__setattr__(self, "interface", space.canonical(self.interface))
        object.__setattr__(self, "orientation", Orientation(self.orientation))


@dataclass(frozen=True)
class RefinementReport:
    holds: bool
    witness: dict | None
    margins: list[tuple[dict, SemiringValue, SemiringValue]] = field(default_factory=list)
    blevel: SemiringValue | None = None


def _compare(lower: Constraint, upper: Constraint, impl_first: bool) -> tuple[bool, dict | None, list]:
    space = lower.space
    spec = space.spec
    union = space.canonical(lower.support + upper.support)
    a = lower.cylindrify(union)
    b = upper.cylindrify(union)
    margins = []
    witness = None
    for tup, x, y in zip(space.tuples(union), a.table, b.table):
        eta = dict(zip(union, tup))
        impl, req = (x, y) if impl_first else (y, x)
        margins.append((eta, SemiringValue(spec, impl), SemiringValue(spec, req)))
        if witness is None and not spec.leq(x, y):
            witness = eta
    return witness is None, witness, margins


def locally_refines(query: RefinementQuery) -> RefinementReport:
    """Check ``(⊗S)⇓V ⊑ R⇓V`` (or the reverse orientation)."""
    space = query.requirement.space
    keep = set(query.interface)
    impl = eliminate(space, query.implementation, keep)
    req = query.requirement.project(keep)
    if query.orientation is Orientation.IMPL_REFINES_REQ:
        holds, witness, margins = _compare(impl, req, impl_first=True)
    else:
        holds, witness, margins = _compare(req, impl, impl_first=False)
    return RefinementReport(holds, witness, margins)


def reliability_margin(
    implementation: Sequence[Constraint],
    requirement: Constraint,
    interface: Iterable[str] | None = None,
) -> RefinementReport:
    """Quantitative check ``R ⊑ ⊗S`` plus the blevel of the composed implementation.

    Without an explicit interface the comparison runs over every variable
    either side depends on.
    """
    space = requirement.space
    if space.spec.kind not in ("probabilistic", "fuzzy"):
        raise ConstraintError("reliability margins need a probabilistic or fuzzy semiring")
    if interface is None:
        interface = set(requirement.support).union(*(c.support for c in implementation))
    query = RefinementQuery(
        tuple(implementation), requirement, tuple(interface), Orientation.REQ_REFINES_IMPL
    )
    report = locally_refines(query)
    level = eliminate(space, implementation, set()).scalar()
    return RefinementReport(report.holds, report.witness, report.margins, level)
