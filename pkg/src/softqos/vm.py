"""Small-step interpreter for nmsccp agents.

Configurations pair an agent with the store, a single soft constraint that
starts as the ``one`` constant.  :meth:`Machine.enabled` returns every
one-step successor; :meth:`Machine.run` schedules them either with a seeded
generator or by bounded breadth-first exploration.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Union

from .constraint import Constraint, ConstraintError, constant, diagonal
from .lang.ast import (
    Agent,
    Arrow,
    Ask,
    Call,
    ConstraintThreshold,
    CRef,
    Default,
    Diagonal,
    Exists,
    Nask,
    Parallel,
    ProcDecl,
    Program,
    Ref,
    Retract,
    Success,
    Sum,
    Tell,
    Threshold,
    Update,
    substitute,
)
from .lang.printer import format_ref
from .problem import Model, base_name
from .semiring import SemiringValue

__all__ = [
    "VMError",
    "IllFormedArrow",
    "Configuration",
    "Transition",
    "Seeded",
    "Exhaustive",
    "RunPolicy",
    "Outcome",
    "Step",
    "RunResult",
    "Reachability",
    "Machine",
    "check_thresholds",
    "expand_call",
]


class VMError(RuntimeError):
    pass


class IllFormedArrow(VMError):
    pass


Bound = Union[SemiringValue, Constraint]


def check_thresholds(store: Constraint, lower: Bound, upper: Bound) -> bool:
    """The check function: is the store inside the ``[lower, upper]`` interval?

    Scalar thresholds are compared with ``store⇓∅``; constraint thresholds
    with the store itself under the strict constraint order.
    """
    spec = store.spec
    lo_scalar = isinstance(lower, SemiringValue)
    hi_scalar = isinstance(upper, SemiringValue)

    if lo_scalar and hi_scalar:
        if spec.lt(upper.payload, lower.payload):
            raise IllFormedArrow(f"lower threshold {lower} is better than upper {upper}")
    elif lo_scalar:
        if spec.lt(upper.project(()).table[0], lower.payload):
            raise IllFormedArrow(f"lower threshold {lower} is better than the upper constraint's level")
    elif hi_scalar:
        if spec.lt(upper.payload, lower.project(()).table[0]):
            raise IllFormedArrow(f"lower constraint's level is better than upper threshold {upper}")
    elif upper.lt(lower):
        raise IllFormedArrow("lower constraint threshold is strictly above the upper one")

    level = store.project(()).table[0]
    if hi_scalar:
        upper_ok = not spec.lt(upper.payload, level)
    else:
        upper_ok = not upper.lt(store)
    if not upper_ok:
        return False
    if lo_scalar:
        return not spec.lt(level, lower.payload)
    return not store.lt(lower)


def expand_call(decl: ProcDecl, actuals, model: Model | None = None) -> Agent:
    """Body of ``decl`` with each formal bound to its actual via a diagonal.

    Formals are renamed to primed placeholders (``y`` -> ``y'``) that the
    enclosing ``exists`` turns into pool variables, so an actual that
    shares a formal's name is never captured.
    """
    actuals = tuple(actuals)
    if len(actuals) != len(decl.formals):
        raise VMError(f"{decl.name} expects {len(decl.formals)} arguments, got {len(actuals)}")
    if not decl.formals:
        return decl.body
    if model is not None:
        for z, y in zip(decl.formals, actuals):
            if model.domain(z) != model.domain(y):
                raise VMError(f"domain mismatch between formal {z!r} and actual {y!r}")
    placeholders = {z: z + "'" for z in decl.formals}
    supports = model.supports() if model is not None else None
    agent = substitute(decl.body, placeholders, supports)
    for z, y in reversed(tuple(zip(decl.formals, actuals))):
        agent = Tell(Diagonal(placeholders[z], y), Arrow(), agent)
    for z in reversed(decl.formals):
        agent = Exists(placeholders[z], agent)
    return agent


def _normalize(agent: Agent) -> Agent:
    if isinstance(agent, Parallel):
        left, right = _normalize(agent.left), _normalize(agent.right)
        if isinstance(left, Success):
            return right
        if isinstance(right, Success):
            return left
        if left is agent.left and right is agent.right:
            return agent
        return Parallel(left, right)
    if isinstance(agent, Exists) and isinstance(_normalize(agent.body), Success):
        return Success()
    return agent


@dataclass(frozen=True)
class Configuration:
    agent: Agent
    store: Constraint
    fresh_used: frozenset = frozenset()

    @property
    def terminal(self) -> bool:
        return isinstance(self.agent, Success)

    def key(self):
        return (self.agent, self.store.key(), self.fresh_used)


@dataclass(frozen=True)
class Transition:
    rule: str
    label: str
    via: tuple[str, ...]
    target: Configuration

    @property
    def name(self) -> str:
        return f"{self.rule} {self.label}"


@dataclass(frozen=True)
class Seeded:
    seed: int = 0


@dataclass(frozen=True)
class Exhaustive:
    depth: int = 64


@dataclass(frozen=True)
class RunPolicy:
    mode: Seeded | Exhaustive = Seeded()
    max_steps: int = 10_000

    def __post_init__(self):
        if self.max_steps <= 0:
            raise ValueError("max_steps must be positive")
        if isinstance(self.mode, Exhaustive) and self.mode.depth < 0:
            raise ValueError("depth bound must be non-negative")


class Outcome(str, Enum):
    SUCCESS = "success"
    STUCK = "stuck"
    BOUND_EXCEEDED = "bound_exceeded"


@dataclass(frozen=True)
class Step:
    index: int
    rule: str
    label: str
    via: tuple[str, ...]
    store: Constraint

    def line(self) -> str:
        level = self.store.project(()).scalar().display()
        return f"step {self.index}: {self.rule} {self.label} ; store⇓∅ = {level}"


@dataclass
class RunResult:
    outcome: Outcome
    configuration: Configuration
    trace: list[Step]
    stuck: list[Configuration] = field(default_factory=list)
    explored: int = 0

    @property
    def store(self) -> Constraint:
        return self.configuration.store


@dataclass(frozen=True)
class Reachability:
    reachable: bool
    unknown: bool = False

    def __bool__(self) -> bool:
        return self.reachable


class Machine:
    """Transition system for one compiled problem and program."""

    def __init__(self, model: Model, program: Program | None = None):
        self.model = model
        self.space = model.space
        self.spec = model.spec
        self.program = program if program is not None else model.problem.program
        self._supports = model.supports()
        self._procs = {d.name: d for d in self.program.declarations} if self.program else {}

    # resolution ---------------------------------------------------------
    def initial(self, store: Constraint | None = None, agent: Agent | None = None) -> Configuration:
        if agent is None:
            if self.program is None:
                raise VMError("no agent to run")
            agent = self.program.main
        if store is None:
            store = constant(self.spec.top, self.space)
        return Configuration(_normalize(agent), store)

    def resolve(self, ref: CRef) -> Constraint:
        if isinstance(ref, Diagonal):
            return diagonal(self.space, ref.x, ref.y)
        return self.model.constraint(ref.name).rename(ref.mapping())

    def bound(self, t: Threshold, lower: bool) -> Bound:
        if isinstance(t, Default):
            return self.spec.bottom if lower else self.spec.top
        if isinstance(t, ConstraintThreshold):
            return self.model.constraint(t.name)
        return t.value

    def check(self, store: Constraint, arrow: Arrow) -> bool:
        return check_thresholds(store, self.bound(arrow.lower, True), self.bound(arrow.upper, False))

    def expand(self, call: Call) -> Agent:
        try:
            decl = self._procs[call.name]
        except KeyError:
            raise VMError(f"call to unknown procedure {call.name!r}") from None
        return expand_call(decl, call.actuals, self.model)

    def fresh_variable(self, var: str, store: Constraint, used: frozenset) -> str:
        dom = self.model.domain(var)
        for y in self.model.fresh_pool:
            if y not in used and y not in store.support and self.space.domain(y) == dom:
                return y
        raise VMError(f"fresh variable pool exhausted (needed one for {var!r})")

    # transitions ----------------------------------------------------------
    def enabled(self, conf: Configuration) -> list[Transition]:
        out = []
        for rule, label, via, agent, store, used in self._steps(conf.agent, conf.store, conf.fresh_used):
            out.append(Transition(rule, label, via, Configuration(_normalize(agent), store, used)))
        return out

    def _steps(self, agent: Agent, store: Constraint, used: frozenset):
        if isinstance(agent, Success):
            return []
        if isinstance(agent, Tell):
            new = store.combine(self.resolve(agent.constraint))
            if self.check(new, agent.arrow):
                return [("R1", f"Tell({format_ref(agent.constraint)})", (), agent.then, new, used)]
            return []
        if isinstance(agent, Ask):
            c = self.resolve(agent.constraint)
            if store.leq(c) and self.check(store, agent.arrow):
                return [("R2", f"Ask({format_ref(agent.constraint)})", (), agent.then, store, used)]
            return []
        if isinstance(agent, Nask):
            c = self.resolve(agent.constraint)
            if not store.leq(c) and self.check(store, agent.arrow):
                return [("R6", f"Nask({format_ref(agent.constraint)})", (), agent.then, store, used)]
            return []
        if isinstance(agent, Retract):
            c = self.resolve(agent.constraint)
            if not store.leq(c):
                return []
            new = store.divide(c)
            if self.check(new, agent.arrow):
                return [("R7", f"Retract({format_ref(agent.constraint)})", (), agent.then, new, used)]
            return []
        if isinstance(agent, Update):
            new = self.update_store(store, agent.variables, self.resolve(agent.constraint))
            if self.check(new, agent.arrow):
                label = f"Update{{{', '.join(agent.variables)}}}({format_ref(agent.constraint)})"
                return [("R8", label, (), agent.then, new, used)]
            return []
        if isinstance(agent, Sum):
            steps = []
            for guard in agent.guards:
                for r, label, via, nxt, st, u in self._steps(guard, store, used):
                    steps.append((r, label, ("R5",) + via, nxt, st, u))
            return steps
        if isinstance(agent, Parallel):
            steps = []
            for r, label, via, nxt, st, u in self._steps(agent.left, store, used):
                if isinstance(nxt, Success):
                    steps.append((r, label, ("R4",) + via, agent.right, st, u))
                else:
                    steps.append((r, label, ("R3",) + via, Parallel(nxt, agent.right), st, u))
            for r, label, via, nxt, st, u in self._steps(agent.right, store, used):
                if isinstance(nxt, Success):
                    steps.append((r, label, ("R4",) + via, agent.left, st, u))
                else:
                    steps.append((r, label, ("R3",) + via, Parallel(agent.left, nxt), st, u))
            return steps
        if isinstance(agent, Exists):
            y = self.fresh_variable(agent.var, store, used)
            body = substitute(agent.body, {agent.var: y}, self._supports)
            return [
                (r, label, ("R9",) + via, nxt, st, u)
                for r, label, via, nxt, st, u in self._steps(body, store, used | {y})
            ]
        if isinstance(agent, Call):
            body = self.expand(agent)
            return [
                (r, label, ("R10",) + via, nxt, st, u)
                for r, label, via, nxt, st, u in self._steps(body, store, used)
            ]
        raise TypeError(f"not an agent: {agent!r}")

    def update_store(self, store: Constraint, variables, c: Constraint) -> Constraint:
        """``(σ⇓(V minus X)) ⊗ c``."""
        drop = set(variables)
        for x in drop:
            if x not in self.space:
                raise ConstraintError(f"unknown variable {x!r} in update")
        return store.project(v for v in self.space.variables if v not in drop).combine(c)

    # scheduling -----------------------------------------------------------
    def run(self, policy: RunPolicy = RunPolicy(), initial: Configuration | None = None) -> RunResult:
        conf = initial if initial is not None else self.initial()
        if isinstance(policy.mode, Exhaustive):
            return self._explore(conf, min(policy.mode.depth, policy.max_steps))
        return self._seeded(conf, policy.mode.seed, policy.max_steps)

    def _seeded(self, conf: Configuration, seed: int, max_steps: int) -> RunResult:
        rng = random.Random(seed)
        trace: list[Step] = []
        for k in range(1, max_steps + 1):
            if conf.terminal:
                return RunResult(Outcome.SUCCESS, conf, trace, explored=k)
            options = self.enabled(conf)
            if not options:
                return RunResult(Outcome.STUCK, conf, trace, [conf], explored=k)
            t = options[rng.randrange(len(options))]
            trace.append(Step(k, t.rule, t.label, t.via, t.target.store))
            conf = t.target
        if conf.terminal:
            return RunResult(Outcome.SUCCESS, conf, trace, explored=max_steps)
        return RunResult(Outcome.BOUND_EXCEEDED, conf, trace, explored=max_steps)

    def _explore(self, start: Configuration, depth: int) -> RunResult:
        parents: dict = {start.key(): None}
        frontier = [start]
        stuck: list[Configuration] = []
        cut: list[Configuration] = []
        explored = 0
        for level in range(depth + 1):
            nxt = []
            for conf in frontier:
                explored += 1
                if conf.terminal:
                    return RunResult(Outcome.SUCCESS, conf, self._path(parents, conf), stuck, explored)
                options = self.enabled(conf)
                if not options:
                    stuck.append(conf)
                    continue
                if level == depth:
                    cut.append(conf)
                    continue
                for t in options:
                    k = t.target.key()
                    if k not in parents:
                        parents[k] = (conf, t)
                        nxt.append(t.target)
            frontier = nxt
            if not frontier:
                break
        if cut:
            return RunResult(Outcome.BOUND_EXCEEDED, cut[0], self._path(parents, cut[0]), stuck, explored)
        final = stuck[0]
        return RunResult(Outcome.STUCK, final, self._path(parents, final), stuck, explored)

    @staticmethod
    def _path(parents: dict, conf: Configuration) -> list[Step]:
        steps = []
        entry = parents[conf.key()]
        while entry is not None:
            prev, t = entry
            steps.append(t)
            entry = parents[prev.key()]
        steps.reverse()
        return [Step(i, t.rule, t.label, t.via, t.target.store) for i, t in enumerate(steps, 1)]

    def reachable_success(self, depth: int, initial: Configuration | None = None) -> Reachability:
        if depth < 0:
            raise ValueError("depth bound must be non-negative")
        result = self._explore(initial if initial is not None else self.initial(), depth)
        if result.outcome is Outcome.SUCCESS:
            return Reachability(True)
        return Reachability(False, unknown=result.outcome is Outcome.BOUND_EXCEEDED)
