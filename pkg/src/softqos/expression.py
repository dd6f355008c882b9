"""Intensional constraint bodies and their compilation to tables.

Bodies are small expression trees: integer/real arithmetic over support
variables, comparisons, boolean connectives, ``cases`` and explicit
``table`` literals.  :func:`compile_expression` evaluates a body on every
support tuple and coerces each result into the space's semiring.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from typing import Any, Mapping, Sequence, Union

from .constraint import Constraint, ConstraintError, ConstraintSpace
from .semiring import SemiringError

__all__ = [
    "Num",
    "Inf",
    "Bool",
    "Name",
    "SetLit",
    "TupleExpr",
    "Neg",
    "BinOp",
    "Compare",
    "And",
    "Or",
    "Not",
    "Cases",
    "Table",
    "Expr",
    "ExpressionError",
    "evaluate",
    "compile_expression",
    "free_names",
    "format_expr",
]


class ExpressionError(ConstraintError):
    pass


@dataclass(frozen=True)
class Num:
    value: int | float


@dataclass(frozen=True)
class Inf:
    pass


@dataclass(frozen=True)
class Bool:
    value: bool


@dataclass(frozen=True)
class Name:
    id: str


@dataclass(frozen=True)
class SetLit:
    symbols: tuple[str, ...]


@dataclass(frozen=True)
class TupleExpr:
    items: tuple["Expr", ...]


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Compare:
    op: str  # one of <= < >= > == !=
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class And:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Or:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Not:
    operand: "Expr"


@dataclass(frozen=True)
class Cases:
    branches: tuple[tuple["Expr", "Expr"], ...]
    otherwise: "Expr | None" = None


@dataclass(frozen=True)
class Table:
    """Extensional body; keys follow the declared parameter order."""

    entries: tuple[tuple[tuple, "Expr"], ...]


Expr = Union[Num, Inf, Bool, Name, SetLit, TupleExpr, Neg, BinOp, Compare, And, Or, Not, Cases, Table]

_ARITH = {"+": operator.add, "-": operator.sub, "*": operator.mul, "/": operator.truediv}
_CMP = {
    "<=": operator.le,
    "<": operator.lt,
    ">=": operator.ge,
    ">": operator.gt,
    "==": operator.eq,
    "!=": operator.ne,
}


def _number(x, what):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ExpressionError(f"{what} needs a number, got {x!r}")
    return x


def evaluate(expr: Expr, env: Mapping[str, Any]) -> Any:
    """Evaluate ``expr`` under ``env``; unbound names evaluate to symbols."""
    if isinstance(expr, Num):
        return expr.value
    if isinstance(expr, Inf):
        return math.inf
    if isinstance(expr, Bool):
        return expr.value
    if isinstance(expr, Name):
        return env.get(expr.id, expr.id)
    if isinstance(expr, SetLit):
        return frozenset(expr.symbols)
    if isinstance(expr, TupleExpr):
        return tuple(evaluate(e, env) for e in expr.items)
    if isinstance(expr, Neg):
        return -_number(evaluate(expr.operand, env), "negation")
    if isinstance(expr, BinOp):
        a = _number(evaluate(expr.left, env), expr.op)
        b = _number(evaluate(expr.right, env), expr.op)
        if expr.op == "/" and b == 0:
            raise ExpressionError("division by zero")
        result = _ARITH[expr.op](a, b)
        if isinstance(result, float) and math.isnan(result):
            raise ExpressionError(f"undefined arithmetic {a!r} {expr.op} {b!r}")
        return result
    if isinstance(expr, Compare):
        a = evaluate(expr.left, env)
        b = evaluate(expr.right, env)
        if expr.op in ("==", "!="):
            return _CMP[expr.op](a, b)
        return _CMP[expr.op](_number(a, expr.op), _number(b, expr.op))
    if isinstance(expr, And):
        return _truth(evaluate(expr.left, env)) and _truth(evaluate(expr.right, env))
    if isinstance(expr, Or):
        return _truth(evaluate(expr.left, env)) or _truth(evaluate(expr.right, env))
    if isinstance(expr, Not):
        return not _truth(evaluate(expr.operand, env))
    if isinstance(expr, Cases):
        for cond, val in expr.branches:
            if _truth(evaluate(cond, env)):
                return evaluate(val, env)
        if expr.otherwise is None:
            raise ExpressionError(f"no case applies for {dict(env)}")
        return evaluate(expr.otherwise, env)
    if isinstance(expr, Table):
        raise ExpressionError("table bodies are only valid as whole constraint definitions")
    raise TypeError(f"not an expression: {expr!r}")


def _truth(x) -> bool:
    if isinstance(x, bool):
        return x
    raise ExpressionError(f"expected a boolean, got {x!r}")


def free_names(expr: Expr) -> set[str]:
    if isinstance(expr, Name):
        return {expr.id}
    if isinstance(expr, (Num, Inf, Bool, SetLit)):
        return set()
    if isinstance(expr, TupleExpr):
        return set().union(*(free_names(e) for e in expr.items))
    if isinstance(expr, (Neg, Not)):
        return free_names(expr.operand)
    if isinstance(expr, (BinOp, Compare, And, Or)):
        return free_names(expr.left) | free_names(expr.right)
    if isinstance(expr, Cases):
        names = set()
        for c, v in expr.branches:
            names |= free_names(c) | free_names(v)
        if expr.otherwise is not None:
            names |= free_names(expr.otherwise)
        return names
    if isinstance(expr, Table):
        return set().union(*(free_names(v) for _, v in expr.entries)) if expr.entries else set()
    raise TypeError(f"not an expression: {expr!r}")


def compile_expression(expr: Expr, support: Sequence[str], space: ConstraintSpace) -> Constraint:
    """Tabulate ``expr`` over ``support`` into a constraint of ``space``."""
    support = tuple(support)
    if len(set(support)) != len(support):
        raise ExpressionError(f"repeated parameter in {support}")
    for v in support:
        space.domain(v)
    stray = {n for n in free_names(expr) if n in space and n not in support}
    if stray:
        raise ExpressionError(f"variables {sorted(stray)} used but not in the support {list(support)}")
    try:
        if isinstance(expr, Table):
            entries = {}
            for key, val in expr.entries:
                if key in entries:
                    raise ExpressionError(f"duplicate table entry {key}")
                entries[key] = evaluate(val, {})
            missing = space.size(support) - len(entries)
            if missing:
                raise ExpressionError(f"table misses {missing} of {space.size(support)} entries")
            return Constraint.from_table(space, support, entries)
        return Constraint.from_function(space, support, lambda eta: evaluate(expr, eta))
    except SemiringError as err:
        raise ExpressionError(str(err)) from err


# printing ------------------------------------------------------------------

_PREC_OR, _PREC_AND, _PREC_NOT, _PREC_CMP, _PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_ATOM = range(1, 9)


def _prec(expr: Expr) -> int:
    if isinstance(expr, Or):
        return _PREC_OR
    if isinstance(expr, And):
        return _PREC_AND
    if isinstance(expr, Not):
        return _PREC_NOT
    if isinstance(expr, Compare):
        return _PREC_CMP
    if isinstance(expr, BinOp):
        return _PREC_ADD if expr.op in "+-" else _PREC_MUL
    if isinstance(expr, Neg):
        return _PREC_NEG
    return _PREC_ATOM


def format_domain_value(d) -> str:
    return str(d)


def _num(v) -> str:
    return str(v) if isinstance(v, int) else repr(v)


def format_expr(expr: Expr, min_prec: int = 0) -> str:
    text = _format(expr)
    if _prec(expr) < min_prec:
        return f"({text})"
    return text


def _format(expr: Expr) -> str:
    if isinstance(expr, Num):
        return _num(expr.value)
    if isinstance(expr, Inf):
        return "inf"
    if isinstance(expr, Bool):
        return "true" if expr.value else "false"
    if isinstance(expr, Name):
        return expr.id
    if isinstance(expr, SetLit):
        return "{" + ", ".join(expr.symbols) + "}"
    if isinstance(expr, TupleExpr):
        return "(" + ", ".join(format_expr(e) for e in expr.items) + ")"
    if isinstance(expr, Neg):
        return "-" + format_expr(expr.operand, _PREC_NEG)
    if isinstance(expr, BinOp):
        p = _prec(expr)
        return f"{format_expr(expr.left, p)} {expr.op} {format_expr(expr.right, p + 1)}"
    if isinstance(expr, Compare):
        return f"{format_expr(expr.left, _PREC_ADD)} {expr.op} {format_expr(expr.right, _PREC_ADD)}"
    if isinstance(expr, And):
        return f"{format_expr(expr.left, _PREC_AND)} and {format_expr(expr.right, _PREC_NOT)}"
    if isinstance(expr, Or):
        return f"{format_expr(expr.left, _PREC_OR)} or {format_expr(expr.right, _PREC_AND)}"
    if isinstance(expr, Not):
        return "not " + format_expr(expr.operand, _PREC_NOT)
    if isinstance(expr, Cases):
        parts = [f"{format_expr(c)} : {format_expr(v)}" for c, v in expr.branches]
        if expr.otherwise is not None:
            parts.append(f"else : {format_expr(expr.otherwise)}")
        return "cases { " + "; ".join(parts) + " }"
    if isinstance(expr, Table):
        parts = []
        for key, val in expr.entries:
            k = "(" + ", ".join(format_domain_value(d) for d in key) + ")"
            parts.append(f"{k}: {format_expr(val)}")
        return "table { " + ", ".join(parts) + " }"
    raise TypeError(f"not an expression: {expr!r}")
