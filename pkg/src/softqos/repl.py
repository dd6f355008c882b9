"""Interactive console over a live store.

Each accepted ``tell``/``retract``/``update`` is appended to the history;
``undo`` drops the last one and replays the rest from the initial store.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .constraint import Constraint, ConstraintError, constant
from .lang.ast import Ask, Nask, Retract, Tell, Update
from .lang.lexer import ParseError
from .lang.parser import parse_agent
from .problem import Model
from .report import describe_store
from .vm import Machine, VMError

__all__ = ["ReplState", "ReplSession", "ReplError"]

_DEFAULT_ARROW = "-[_,_]->"
_ACTIONS = ("tell", "retract", "update", "ask", "nask")
_HELP = """commands:
  tell c [arrow]         add c to the store
  retract c [arrow]      remove c from the store
  update {x, ...} c [arrow]
  ask c [arrow]          test whether the store entails c
  nask c [arrow]
  blevel                 print store⇓∅
  show                   describe the store
  undo                   revert the last accepted change
  history                list accepted changes
arrows are written -[lower,upper]->; several commands may be joined with ';'"""


class ReplError(ValueError):
    pass


@dataclass
class ReplState:
    store: Constraint
    history: list[str] = field(default_factory=list)


class ReplSession:
    def __init__(self, model: Model, store: Constraint | None = None):
        self.machine = Machine(model)
        self.initial = store if store is not None else constant(model.spec.top, model.space)
        self.state = ReplState(self.initial)

    @property
    def store(self) -> Constraint:
        return self.state.store

    def blevel(self):
        return self.store.project(()).scalar()

    def execute(self, line: str) -> list[str]:
        """Run one input line (possibly several ``;``-separated commands)."""
        out = []
        for cmd in (c.strip() for c in line.split(";")):
            if cmd:
                out.append(self.command(cmd))
        return out

    def command(self, cmd: str) -> str:
        word = cmd.split(None, 1)[0]
        if word == "blevel":
            return self.blevel().display()
        if word == "show":
            return f"store = {describe_store(self.store)} ; store⇓∅ = {self.blevel().display()}"
        if word == "undo":
            return self.undo()
        if word == "history":
            return "\n".join(self.state.history) or "(empty)"
        if word == "help":
            return _HELP
        if word in _ACTIONS:
            try:
                return self.act(cmd)
            except (ParseError, ConstraintError, VMError) as exc:
                return f"error: {exc}"
        return f"error: unknown command {word!r} (try 'help')"

    def _agent(self, cmd: str):
        m = re.match(r"\s*update\s*\{([^}]*)\}\s*(.*)$", cmd)
        if m:
            head, rest = f"update{{{m.group(1)}}}", m.group(2)
        else:
            head, _, rest = cmd.strip().partition(" ")
        rest = rest.strip()
        if not rest:
            raise ParseError(f"{head} needs a constraint", 1, 1)
        idx = rest.find("-[")
        ref, arrow = (rest, _DEFAULT_ARROW) if idx < 0 else (rest[:idx].strip(), rest[idx:].strip())
        return parse_agent(f"{head}({ref}) {arrow} success", self.machine.spec)

    def act(self, cmd: str) -> str:
        agent = self._agent(cmd)
        steps = self.machine.enabled(self.machine.initial(self.store, agent))
        if steps:
            t = steps[0]
            level = t.target.store.project(()).scalar().display()
            if isinstance(agent, (Tell, Retract, Update)):
                self.state.store = t.target.store
                self.state.history.append(cmd)
                return f"{t.rule} {t.label} ; store⇓∅ = {level}"
            return f"{t.rule} {t.label}: yes ; store⇓∅ = {level}"
        return "rejected: " + self.explain(agent) + " ; store unchanged"

    def explain(self, agent) -> str:
        m = self.machine
        c = m.resolve(agent.constraint)
        if isinstance(agent, (Ask, Retract)) and not self.store.leq(c):
            return "store does not entail the constraint (σ ⋢ c)"
        if isinstance(agent, Nask) and self.store.leq(c):
            return "store entails the constraint (σ ⊑ c)"
        if isinstance(agent, Tell):
            new = self.store.combine(c)
        elif isinstance(agent, Retract):
            new = self.store.divide(c)
        elif isinstance(agent, Update):
            new = m.update_store(self.store, agent.variables, c)
        else:
            new = self.store
        lower = m.bound(agent.arrow.lower, True)
        upper = m.bound(agent.arrow.upper, False)
        level = new.project(()).scalar().display()
        return f"check failed: resulting store⇓∅ = {level} is outside {_interval(lower, upper)}"

    def replay(self, history: list[str]) -> Constraint:
        """Apply ``history`` to the initial store; every command must be accepted."""
        session = ReplSession(self.machine.model, self.initial)
        for cmd in history:
            res = session.act(cmd)
            if res.startswith("rejected"):
                raise ReplError(f"history entry {cmd!r} no longer applies")
        return session.store

    def undo(self) -> str:
        if not self.state.history:
            return "nothing to undo"
        history = self.state.history[:-1]
        self.state = ReplState(self.replay(history), history)
        return f"undone ; store⇓∅ = {self.blevel().display()}"


def _interval(lower, upper) -> str:
    def text(b):
        return b.display() if hasattr(b, "display") else "constraint"

    return f"[{text(lower)}, {text(upper)}]"
