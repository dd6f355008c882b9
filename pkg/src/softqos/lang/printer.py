"""Canonical text for agents, programs and problem files.

``parse(pretty(x)) == x`` holds for every AST the parser can produce.
"""

from __future__ import annotations

from ..expression import format_expr
from ..problem import ProblemFile, VarDecl
from .ast import (
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
    Program,
    ProcDecl,
    Ref,
    Retract,
    Success,
    Sum,
    Tell,
    Threshold,
    Update,
    ValueThreshold,
)

__all__ = ["pretty", "format_agent", "format_arrow", "format_ref", "format_problem", "format_domain"]


def format_threshold(t: Threshold) -> str:
    if isinstance(t, Default):
        return "_"
    if isinstance(t, ConstraintThreshold):
        return t.name
    return str(t.value)


def format_arrow(arrow: Arrow) -> str:
    return f"-[{format_threshold(arrow.lower)},{format_threshold(arrow.upper)}]->"


def format_ref(ref: CRef) -> str:
    if isinstance(ref, Diagonal):
        return f"diag({ref.x}, {ref.y})"
    if not ref.renaming:
        return ref.name
    return ref.name + "[" + ", ".join(f"{a}:={b}" for a, b in ref.renaming) + "]"


def _unary(a: Agent) -> str:
    text = format_agent(a)
    if isinstance(a, (Sum, Parallel)):
        return f"({text})"
    return text


def format_agent(a: Agent) -> str:
    if isinstance(a, Success):
        return "success"
    if isinstance(a, (Tell, Retract, Ask, Nask)):
        kw = type(a).__name__.lower()
        return f"{kw}({format_ref(a.constraint)}) {format_arrow(a.arrow)} {_unary(a.then)}"
    if isinstance(a, Update):
        xs = ", ".join(a.variables)
        return f"update{{{xs}}}({format_ref(a.constraint)}) {format_arrow(a.arrow)} {_unary(a.then)}"
    if isinstance(a, Sum):
        return " + ".join(format_agent(g) for g in a.guards)
    if isinstance(a, Parallel):
        right = format_agent(a.right)
        if isinstance(a.right, Parallel):
            right = f"({right})"
        return f"{format_agent(a.left)} || {right}"
    if isinstance(a, Exists):
        return f"exists {a.var}. {_unary(a.body)}"
    if isinstance(a, Call):
        return f"{a.name}({', '.join(a.actuals)})"
    raise TypeError(f"not an agent: {a!r}")


def format_proc(p: ProcDecl) -> str:
    return f"proc {p.name}({', '.join(p.formals)}) :: {format_agent(p.body)};"


def format_program(p: Program) -> str:
    lines = [format_proc(d) for d in p.declarations]
    lines.append(f"agent {format_agent(p.main)};")
    return "\n".join(lines) + "\n"


def pretty(x) -> str:
    """Pretty-print an agent, a program or a whole problem file."""
    if isinstance(x, ProblemFile):
        return format_problem(x)
    if isinstance(x, Program):
        return format_program(x)
    return format_agent(x)


def format_domain(domain: tuple) -> str:
    if (
        len(domain) > 1
        and all(isinstance(d, int) for d in domain)
        and list(domain) == list(range(domain[0], domain[0] + len(domain)))
    ):
        return f"{domain[0]}..{domain[-1]}"
    return "{" + ", ".join(str(d) for d in domain) + "}"


def _group(decls: tuple[VarDecl, ...]) -> list[tuple[list[str], tuple]]:
    groups: list[tuple[list[str], tuple]] = []
    for d in decls:
        if groups and groups[-1][1] == d.domain:
            groups[-1][0].append(d.name)
        else:
            groups.append(([d.name], d.domain))
    return groups


def format_problem(p: ProblemFile) -> str:
    lines = [f"semiring {p.semiring.literal()};"]
    for names, dom in _group(p.variables):
        lines.append(f"var {', '.join(names)} in {format_domain(dom)};")
    for names, dom in _group(p.fresh):
        lines.append(f"fresh {', '.join(names)} in {format_domain(dom)};")
    for c in p.constraints:
        lines.append(f"constraint {c.name}({', '.join(c.params)}) = {format_expr(c.body)};")
    if p.con is not None:
        lines.append("con = {" + ", ".join(p.con) + "};")
    if p.implement is not None:
        lines.append("implement {" + ", ".join(p.implement) + "};")
    if p.require is not None:
        lines.append(f"require {p.require};")
    if p.interface is not None:
        lines.append("interface {" + ", ".join(p.interface) + "};")
    if p.orientation is not None:
        lines.append(f"orientation {p.orientation.value};")
    for d in p.procedures:
        lines.append(format_proc(d))
    if p.agent is not None:
        lines.append(f"agent {format_agent(p.agent)};")
    return "\n".join(lines) + "\n"
