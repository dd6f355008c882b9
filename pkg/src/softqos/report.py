"""Human-readable and JSON renderings of solver, refinement and VM results."""

from __future__ import annotations

import math
from typing import Any

from .constraint import Constraint
from .refinement import RefinementReport
from .semiring import SemiringValue
from .solver import SolutionReport
from .vm import Outcome, RunResult

_AFFINE_TOL = 1e-9


def value_text(v: SemiringValue) -> str:
    return v.display()


def assignment_text(eta: dict) -> str:
    return " ".join(f"{k}={v}" for k, v in eta.items()) or "()"


def _coef(k: float) -> str:
    k = round(k, 9)
    return str(int(k)) if float(k).is_integer() else repr(k)


def affine_form(c: Constraint) -> str | None:
    """Render ``c`` as ``2x+y+4`` style text when it is exactly affine in integer variables."""
    if c.spec.kind not in ("weighted", "fuzzy", "probabilistic"):
        return None
    values = list(c.table)
    if any(not isinstance(v, (int, float)) or math.isinf(v) for v in values):
        return None
    if not c.support:
        return _coef(values[0])
    doms = [c.space.domain(v) for v in c.support]
    if not all(isinstance(d, int) for dom in doms for d in dom):
        return None
    base = values[0]
    coefs = []
    stride = len(values)
    for dom in doms:
        stride //= len(dom)
        if len(dom) < 2:
            coefs.append(0.0)
            continue
        coefs.append((values[stride] - base) / (dom[1] - dom[0]))
    offset = base - sum(k * dom[0] for k, dom in zip(coefs, doms))
    for tup, val in c.items():
        predicted = offset + sum(k * d for k, d in zip(coefs, tup))
        if abs(predicted - val) > _AFFINE_TOL:
            return None
    terms = []
    for var, k in zip(c.support, coefs):
        if abs(k) <= _AFFINE_TOL:
            continue
        coef = "" if abs(k - 1) <= _AFFINE_TOL else ("-" if abs(k + 1) <= _AFFINE_TOL else _coef(k))
        terms.append(f"{coef}{var}")
    text = "+".join(terms).replace("+-", "-")
    if abs(offset) > _AFFINE_TOL or not terms:
        sign = "-" if offset < 0 and terms else ("+" if terms else "")
        text += f"{sign}{_coef(abs(offset) if terms else offset)}"
    return text


def describe_store(c: Constraint) -> str:
    form = affine_form(c)
    if form is not None:
        return form
    return f"table over {{{', '.join(c.support)}}} ({len(c.table)} entries)"


def constraint_rows(c: Constraint) -> list[tuple[str, str]]:
    return [(assignment_text(eta), value_text(v)) for eta, v in c.assignments()]


def _table(rows: list[tuple[str, ...]], indent: str = "  ") -> list[str]:
    if not rows:
        return []
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return [indent + "  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]


# solve --------------------------------------------------------------------


def solution_text(report: SolutionReport) -> str:
    sol = report.solution
    lines = [f"solution over {{{', '.join(sol.support)}}}:"]
    lines += _table(constraint_rows(sol))
    lines.append(f"blevel = {value_text(report.blevel)}")
    lines.append("best: " + ("; ".join(assignment_text(b) for b in report.best) or "(none)"))
    return "\n".join(lines)


def solution_json(report: SolutionReport) -> dict[str, Any]:
    return {
        "solution": [
            {"assignment": eta, "value": value_text(v)} for eta, v in report.solution.assignments()
        ],
        "blevel": value_text(report.blevel),
        "best": report.best,
    }


# refine -------------------------------------------------------------------


def refinement_text(report: RefinementReport, orientation: str) -> str:
    lines = [f"orientation = {orientation}", f"holds = {'true' if report.holds else 'false'}"]
    if report.witness is not None:
        lines.append(f"witness: {assignment_text(report.witness)}")
    if report.blevel is not None:
        lines.append(f"implementation blevel = {value_text(report.blevel)}")
    rows = [("tuple", "implementation", "requirement")]
    rows += [(assignment_text(eta), value_text(a), value_text(b)) for eta, a, b in report.margins]
    lines += _table(rows)
    return "\n".join(lines)


def refinement_json(report: RefinementReport, orientation: str) -> dict[str, Any]:
    return {
        "orientation": orientation,
        "holds": report.holds,
        "witness": report.witness,
        "blevel": None if report.blevel is None else value_text(report.blevel),
        "margins": [
            {"assignment": eta, "implementation": value_text(a), "requirement": value_text(b)}
            for eta, a, b in report.margins
        ],
    }


# run ----------------------------------------------------------------------


def run_text(result: RunResult, trace: bool = False, exhaustive: bool = False) -> str:
    from .lang.printer import format_agent

    lines = [s.line() for s in result.trace] if trace else []
    level = value_text(result.store.project(()).scalar())
    if result.outcome is Outcome.SUCCESS:
        lines.append(f"SUCCESS store⇓∅ = {level}")
        lines.append(f"store = {describe_store(result.store)}")
    elif result.outcome is Outcome.STUCK:
        lines.append("STUCK (no interleaving succeeds)" if exhaustive else "STUCK")
        if exhaustive:
            lines.append(f"stuck configurations: {len(result.stuck)}")
        lines.append(f"agent: {format_agent(result.configuration.agent)}")
        lines.append(f"store⇓∅ = {level}")
    else:
        lines.append("BOUND_EXCEEDED")
        lines.append(f"agent: {format_agent(result.configuration.agent)}")
    return "\n".join(lines)


def run_json(result: RunResult) -> dict[str, Any]:
    from .lang.printer import format_agent

    return {
        "outcome": result.outcome.value,
        "agent": format_agent(result.configuration.agent),
        "blevel": value_text(result.store.project(()).scalar()),
        "store": describe_store(result.store),
        "stuck": len(result.stuck),
        "trace": [
            {
                "step": s.index,
                "rule": s.rule,
                "label": s.label,
                "via": list(s.via),
                "blevel": value_text(s.store.project(()).scalar()),
            }
            for s in result.trace
        ],
    }
