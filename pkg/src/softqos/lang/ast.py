"""Abstract syntax of nmsccp agents and programs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from ..semiring import SemiringValue

__all__ = [
    "Default",
    "ValueThreshold",
    "ConstraintThreshold",
    "Threshold",
    "Arrow",
    "Ref",
    "Diagonal",
    "CRef",
    "Success",
    "Tell",
    "Retract",
    "Update",
    "Ask",
    "Nask",
    "Sum",
    "Parallel",
    "Exists",
    "Call",
    "Agent",
    "ProcDecl",
    "Program",
    "substitute",
    "calls",
]


@dataclass(frozen=True)
class Default:
    """Unspecified threshold: the semiring zero below, the one above."""


@dataclass(frozen=True)
class ValueThreshold:
    value: SemiringValue


@dataclass(frozen=True)
class ConstraintThreshold:
    name: str


Threshold = Union[Default, ValueThreshold, ConstraintThreshold]


@dataclass(frozen=True)
class Arrow:
    lower: Threshold = Default()
    upper: Threshold = Default()


@dataclass(frozen=True)
class Ref:
    """A named constraint, with its support variables possibly renamed."""

    name: str
    renaming: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        pairs = tuple(sorted((a, b) for a, b in self.renaming if a != b))
        object.__setattr__(self, "renaming", pairs)

    def mapping(self) -> dict[str, str]:
        return dict(self.renaming)


@dataclass(frozen=True)
class Diagonal:
    x: str
    y: str


CRef = Union[Ref, Diagonal]


@dataclass(frozen=True)
class Success:
    pass


@dataclass(frozen=True)
class Tell:
    constraint: CRef
    arrow: Arrow
    then: "Agent"


@dataclass(frozen=True)
class Retract:
    constraint: CRef
    arrow: Arrow
    then: "Agent"


@dataclass(frozen=True)
class Update:
    variables: tuple[str, ...]
    constraint: CRef
    arrow: Arrow
    then: "Agent"


@dataclass(frozen=True)
class Ask:
    constraint: CRef
    arrow: Arrow
    then: "Agent"


@dataclass(frozen=True)
class Nask:
    constraint: CRef
    arrow: Arrow
    then: "Agent"


@dataclass(frozen=True)
class Sum:
    """Guarded choice; nested sums are flattened."""

    guards: tuple[Union[Ask, Nask], ...]

    def __post_init__(self):
        flat = []
        for g in self.guards:
            if isinstance(g, Sum):
                flat.extend(g.guards)
            elif isinstance(g, (Ask, Nask)):
                flat.append(g)
            else:
                raise TypeError(f"sum members must be ask/nask guards, got {type(g).__name__}")
        if len(flat) < 2:
            raise TypeError("a sum needs at least two guards")
        object.__setattr__(self, "guards", tuple(flat))


@dataclass(frozen=True)
class Parallel:
    left: "Agent"
    right: "Agent"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Agent"


@dataclass(frozen=True)
class Call:
    name: str
    actuals: tuple[str, ...] = ()


Agent = Union[Success, Tell, Retract, Update, Ask, Nask, Sum, Parallel, Exists, Call]

_ACTIONS = (Tell, Retract, Ask, Nask)


@dataclass(frozen=True)
class ProcDecl:
    name: str
    formals: tuple[str, ...]
    body: Agent

    def __post_init__(self):
        if len(set(self.formals)) != len(self.formals):
            raise ValueError(f"procedure {self.name} has repeated formals {self.formals}")


@dataclass(frozen=True)
class Program:
    declarations: tuple[ProcDecl, ...]
    main: Agent

    def procedure(self, name: str) -> ProcDecl:
        for d in self.declarations:
            if d.name == name:
                return d
        raise KeyError(name)


def _sub_ref(ref: CRef, mapping: Mapping[str, str], supports) -> CRef:
    if isinstance(ref, Diagonal):
        return Diagonal(mapping.get(ref.x, ref.x), mapping.get(ref.y, ref.y))
    current = ref.mapping()
    renamed_origin = set(current)
    new = {orig: mapping.get(cur, cur) for orig, cur in current.items()}
    for var, target in mapping.items():
        if var not in renamed_origin and var not in current.values():
            new[var] = target
    if supports is not None and ref.name in supports:
        support = supports[ref.name]
        new = {k: v for k, v in new.items() if k in support}
    return Ref(ref.name, tuple(new.items()))


def substitute(agent: Agent, mapping: Mapping[str, str], supports: Mapping[str, tuple] | None = None) -> Agent:
    """Simultaneously rename free variables of ``agent`` according to ``mapping``.

    ``supports`` (constraint name -> support) lets renamings on named
    constraints be pruned to variables the constraint actually mentions.
    """
    mapping = {k: v for k, v in mapping.items() if k != v}
    if not mapping:
        return agent

    def go(a: Agent) -> Agent:
        if isinstance(a, Success):
            return a
        if isinstance(a, _ACTIONS):
            return type(a)(_sub_ref(a.constraint, mapping, supports), a.arrow, go(a.then))
        if isinstance(a, Update):
            xs = tuple(mapping.get(x, x) for x in a.variables)
            return Update(xs, _sub_ref(a.constraint, mapping, supports), a.arrow, go(a.then))
        if isinstance(a, Sum):
            return Sum(tuple(go(g) for g in a.guards))
        if isinstance(a, Parallel):
            return Parallel(go(a.left), go(a.right))
        if isinstance(a, Exists):
            inner = {k: v for k, v in mapping.items() if k != a.var}
            return Exists(a.var, substitute(a.body, inner, supports))
        if isinstance(a, Call):
            return Call(a.name, tuple(mapping.get(x, x) for x in a.actuals))
        raise TypeError(f"not an agent: {a!r}")

    return go(agent)


def calls(agent: Agent):
    """Yield every :class:`Call` node inside ``agent``."""
    stack = [agent]
    while stack:
        a = stack.pop()
        if isinstance(a, Call):
            yield a
        elif isinstance(a, (Tell, Retract, Update, Ask, Nask)):
            stack.append(a.then)
        elif isinstance(a, Sum):
            stack.extend(a.guards)
        elif isinstance(a, Parallel):
            stack.extend((a.left, a.right))
        elif isinstance(a, Exists):
            stack.append(a.body)
