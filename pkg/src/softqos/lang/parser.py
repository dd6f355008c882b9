"""Recursive-descent parser for problem files, agents and literals."""

from __future__ import annotations

from typing import Callable

from ..expression import (
    And,
    BinOp,
    Bool,
    Cases,
    Compare,
    Expr,
    Inf,
    Name,
    Neg,
    Not,
    Num,
    Or,
    SetLit,
    Table,
    TupleExpr,
    evaluate,
)
from ..problem import ConstraintDecl, ProblemFile, VarDecl
from ..refinement import Orientation
from ..semiring import (
    Classical,
    Fuzzy,
    Probabilistic,
    Product,
    Semiring,
    SemiringError,
    SemiringValue,
    SetBased,
    Weighted,
)
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
    ProcDecl,
    Program,
    Ref,
    Retract,
    Success,
    Sum,
    Tell,
    Threshold,
    Update,
    ValueThreshold,
    calls,
)
from .lexer import ParseError, Token, tokenize

__all__ = [
    "ParseError",
    "parse_problem",
    "parse_program",
    "parse_agent",
    "parse_semiring",
    "parse_value",
    "parse_expression",
    "check_arrow_scalars",
]

KEYWORDS = frozenset(
    """semiring var fresh in constraint con implement require interface orientation proc agent
    success tell retract update ask nask exists diag table cases else and or not inf true false""".split()
)
_SIMPLE_SEMIRINGS: dict[str, Callable[[], Semiring]] = {
    "weighted": Weighted,
    "fuzzy": Fuzzy,
    "probabilistic": Probabilistic,
    "classical": Classical,
}
_CMP_OPS = ("<=", "<", ">=", ">", "==", "!=")


class _Parser:
    def __init__(self, text: str, spec: Semiring | None = None):
        self.tokens = tokenize(text)
        self.i = 0
        self.spec = spec

    # token helpers -------------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def error(self, msg: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col)

    def at(self, text: str) -> bool:
        t = self.tok
        return t.text == text and t.kind in ("OP", "IDENT")

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}, found {self.tok}")
        tok = self.tok
        self.i += 1
        return tok

    def ident(self, what: str = "identifier") -> str:
        t = self.tok
        if t.kind != "IDENT" or t.text in KEYWORDS:
            raise self.error(f"expected {what}, found {t}")
        self.i += 1
        return t.text

    def idlist(self, close: str) -> tuple[str, ...]:
        names = []
        if not self.at(close):
            names.append(self.ident())
            while self.accept(","):
                names.append(self.ident())
        self.expect(close)
        return tuple(names)

    def done(self) -> None:
        if self.tok.kind != "EOF":
            raise self.error(f"unexpected {self.tok}")

    # semiring and literals ------------------------------------------------
    def semiring(self) -> Semiring:
        t = self.tok
        if t.kind == "IDENT" and t.text in _SIMPLE_SEMIRINGS:
            self.i += 1
            return _SIMPLE_SEMIRINGS[t.text]()
        if self.accept("set"):
            self.expect("{")
            syms = self.idlist("}")
            try:
                return SetBased(syms)
            except SemiringError as err:
                raise self.error(str(err), t) from None
        if self.accept("product"):
            self.expect("(")
            parts = [self.semiring()]
            while self.accept(","):
                parts.append(self.semiring())
            self.expect(")")
            try:
                return Product(parts)
            except SemiringError as err:
                raise self.error(str(err), t) from None
        raise self.error(f"expected a semiring, found {t}")

    def literal_expr(self) -> Expr:
        """Constant literal: number, inf, true/false, {syms}, (lit, ...)."""
        t = self.tok
        if t.kind == "NUM":
            self.i += 1
            return Num(_number(t.text))
        if self.accept("inf"):
            return Inf()
        if self.accept("true"):
            return Bool(True)
        if self.accept("false"):
            return Bool(False)
        if self.accept("{"):
            return SetLit(self.idlist("}"))
        if self.accept("("):
            items = [self.literal_expr()]
            while self.accept(","):
                items.append(self.literal_expr())
            self.expect(")")
            return items[0] if len(items) == 1 else TupleExpr(tuple(items))
        raise self.error(f"expected a value literal, found {t}")

    def value(self) -> SemiringValue:
        if self.spec is None:
            raise self.error("value literal used before the semiring is declared")
        t = self.tok
        raw = evaluate(self.literal_expr(), {})
        try:
            return self.spec.value(raw)
        except SemiringError as err:
            raise self.error(str(err), t) from None

    def domain(self) -> tuple:
        t = self.tok
        if t.kind == "NUM":
            lo = self._int()
            self.expect("..")
            hi = self._int()
            if hi < lo:
                raise self.error(f"empty range {lo}..{hi}", t)
            return tuple(range(lo, hi + 1))
        self.expect("{")
        values = []
        while not self.at("}"):
            if self.tok.kind == "NUM":
                values.append(self._int())
            else:
                values.append(self.ident("domain value"))
            if not self.accept(","):
                break
        self.expect("}")
        if not values:
            raise self.error("empty domain", t)
        if len(set(values)) != len(values):
            raise self.error("duplicate domain values", t)
        return tuple(values)

    def _int(self) -> int:
        t = self.tok
        if t.kind != "NUM" or not t.text.isdigit():
            raise self.error(f"expected an integer, found {t}")
        self.i += 1
        return int(t.text)

    # expressions ------------------------------------------------------------
    def body(self) -> Expr:
        if self.accept("table"):
            self.expect("{")
            entries = []
            while not self.at("}"):
                entries.append(self.table_entry())
                if not self.accept(","):
                    break
            self.expect("}")
            return Table(tuple(entries))
        return self.expr()

    def table_entry(self):
        if self.accept("("):
            key = [self.domain_value()]
            while self.accept(","):
                key.append(self.domain_value())
            self.expect(")")
        else:
            key = [self.domain_value()]
        self.expect(":")
        return tuple(key), self.expr()

    def domain_value(self):
        if self.tok.kind == "NUM":
            return self._int()
        return self.ident("domain value")

    def expr(self) -> Expr:
        left = self.conj()
        while self.accept("or"):
            left = Or(left, self.conj())
        return left

    def conj(self) -> Expr:
        left = self.neg()
        while self.accept("and"):
            left = And(left, self.neg())
        return left

    def neg(self) -> Expr:
        if self.accept("not"):
            return Not(self.neg())
        return self.comparison()

    def comparison(self) -> Expr:
        left = self.additive()
        for op in _CMP_OPS:
            if self.at(op):
                self.i += 1
                return Compare(op, left, self.additive())
        return left

    def additive(self) -> Expr:
        left = self.term()
        while self.at("+") or self.at("-"):
            op = self.tok.text
            self.i += 1
            left = BinOp(op, left, self.term())
        return left

    def term(self) -> Expr:
        left = self.unary()
        while True:
            if self.at("*") or self.at("/"):
                op = self.tok.text
                self.i += 1
                left = BinOp(op, left, self.unary())
            elif isinstance(left, Num) and self.tok.kind == "IDENT" and self.tok.text not in KEYWORDS:
                # implicit product: 2x
                left = BinOp("*", left, self.unary())
            else:
                return left

    def unary(self) -> Expr:
        if self.accept("-"):
            return Neg(self.unary())
        return self.atom()

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "NUM":
            self.i += 1
            return Num(_number(t.text))
        if self.accept("inf"):
            return Inf()
        if self.accept("true"):
            return Bool(True)
        if self.accept("false"):
            return Bool(False)
        if self.accept("cases"):
            return self.cases()
        if self.accept("{"):
            return SetLit(self.idlist("}"))
        if self.accept("("):
            items = [self.expr()]
            while self.accept(","):
                items.append(self.expr())
            self.expect(")")
            return items[0] if len(items) == 1 else TupleExpr(tuple(items))
        return Name(self.ident("expression"))

    def cases(self) -> Cases:
        self.expect("{")
        branches = []
        otherwise = None
        while not self.at("}"):
            if self.accept("else"):
                self.expect(":")
                otherwise = self.expr()
                self.accept(";")
                break
            cond = self.expr()
            self.expect(":")
            branches.append((cond, self.expr()))
            if not self.accept(";"):
                break
        self.expect("}")
        if not branches and otherwise is None:
            raise self.error("empty cases")
        return Cases(tuple(branches), otherwise)

    # agents -------------------------------------------------------------
    def agent(self) -> Agent:
        left = self.sum_level()
        while self.accept("||"):
            left = Parallel(left, self.sum_level())
        return left

    def sum_level(self) -> Agent:
        members = [(self.tok, self.unary_agent())]
        while self.accept("+"):
            members.append((self.tok, self.unary_agent()))
        if len(members) == 1:
            return members[0][1]
        for tok, member in members:
            if not isinstance(member, (Ask, Nask, Sum)):
                raise self.error("only ask/nask guards may appear in a sum", tok)
        return Sum(tuple(m for _, m in members))

    def unary_agent(self) -> Agent:
        t = self.tok
        if self.accept("success"):
            return Success()
        for kw, node in (("tell", Tell), ("retract", Retract), ("ask", Ask), ("nask", Nask)):
            if self.accept(kw):
                self.expect("(")
                ref = self.cref()
                self.expect(")")
                arrow = self.arrow()
                return node(ref, arrow, self.unary_agent())
        if self.accept("update"):
            self.expect("{")
            xs = self.idlist("}")
            if not xs:
                raise self.error("update needs at least one variable", t)
            self.expect("(")
            ref = self.cref()
            self.expect(")")
            arrow = self.arrow()
            return Update(xs, ref, arrow, self.unary_agent())
        if self.accept("exists"):
            var = self.ident("variable")
            self.expect(".")
            return Exists(var, self.unary_agent())
        if self.accept("("):
            inner = self.agent()
            self.expect(")")
            return inner
        if t.kind == "IDENT" and t.text not in KEYWORDS and self.peek().text == "(":
            name = self.ident()
            self.expect("(")
            return Call(name, self.idlist(")"))
        raise self.error(f"expected an agent, found {t}")

    def cref(self) -> CRef:
        if self.accept("diag"):
            self.expect("(")
            x = self.ident("variable")
            self.expect(",")
            y = self.ident("variable")
            self.expect(")")
            return Diagonal(x, y)
        name = self.ident("constraint name")
        pairs = []
        if self.accept("["):
            while True:
                old = self.ident("variable")
                self.expect(":=")
                pairs.append((old, self.ident("variable")))
                if not self.accept(","):
                    break
            self.expect("]")
        return Ref(name, tuple(pairs))

    def arrow(self) -> Arrow:
        t = self.expect("-[")
        lower = self.threshold()
        self.expect(",")
        upper = self.threshold()
        self.expect("]->")
        arrow = Arrow(lower, upper)
        if self.spec is not None and not check_arrow_scalars(arrow, self.spec):
            raise self.error("malformed threshold: lower bound is better than upper bound", t)
        return arrow

    def threshold(self) -> Threshold:
        if self.accept("_"):
            return Default()
        t = self.tok
        if t.kind == "IDENT" and t.text not in KEYWORDS:
            self.i += 1
            return ConstraintThreshold(t.text)
        return ValueThreshold(self.value())

    # whole files ----------------------------------------------------------
    def problem(self) -> ProblemFile:
        fields: dict = {}
        variables: list[VarDecl] = []
        fresh: list[VarDecl] = []
        constraints: list[ConstraintDecl] = []
        procs: list[ProcDecl] = []

        def once(key: str, tok: Token):
            if key in fields:
                raise self.error(f"section {key!r} appears more than once", tok)

        while self.tok.kind != "EOF":
            t = self.tok
            if self.accept("semiring"):
                once("semiring", t)
                fields["semiring"] = self.spec = self.semiring()
                self.expect(";")
            elif self.accept("var"):
                names = self.idlist_until("in")
                dom = self.domain()
                variables.extend(VarDecl(n, dom) for n in names)
                self.expect(";")
            elif self.accept("fresh"):
                names = self.fresh_names()
                dom = self.domain()
                fresh.extend(VarDecl(n, dom) for n in names)
                self.expect(";")
            elif self.accept("constraint"):
                name = self.ident("constraint name")
                self.expect("(")
                params = self.idlist(")")
                self.expect("=")
                constraints.append(ConstraintDecl(name, params, self.body()))
                self.expect(";")
            elif self.accept("con"):
                once("con", t)
                self.expect("=")
                self.expect("{")
                fields["con"] = self.idlist("}")
                self.expect(";")
            elif self.accept("implement"):
                once("implement", t)
                self.expect("{")
                fields["implement"] = self.idlist("}")
                self.expect(";")
            elif self.accept("require"):
                once("require", t)
                fields["require"] = self.ident("constraint name")
                self.expect(";")
            elif self.accept("interface"):
                once("interface", t)
                self.expect("{")
                fields["interface"] = self.idlist("}")
                self.expect(";")
            elif self.accept("orientation"):
                once("orientation", t)
                word = self.ident("orientation")
                try:
                    fields["orientation"] = Orientation(word)
                except ValueError:
                    raise self.error(
                        "orientation must be impl_refines_req or req_refines_impl", t
                    ) from None
                self.expect(";")
            elif self.accept("proc"):
                procs.append(self.proc_decl())
            elif self.accept("agent"):
                once("agent", t)
                if self.spec is None:
                    raise self.error("agent block before the semiring declaration", t)
                fields["agent"] = self.agent()
                self.accept(";")
            else:
                raise self.error(f"unexpected {t} at top level")
        if "semiring" not in fields:
            raise self.error("missing `semiring` declaration")
        problem = ProblemFile(
            variables=tuple(variables),
            fresh=tuple(fresh),
            constraints=tuple(constraints),
            procedures=tuple(procs),
            **fields,
        )
        _check_calls(problem.procedures, problem.agent)
        return problem

    def idlist_until(self, word: str) -> tuple[str, ...]:
        names = [self.ident("variable")]
        while self.accept(","):
            names.append(self.ident("variable"))
        self.expect(word)
        return tuple(names)

    def fresh_names(self) -> list[str]:
        names: list[str] = []
        while True:
            t = self.tok
            first = self.ident("variable")
            if self.accept(".."):
                last = self.ident("variable")
                names.extend(_expand_range(first, last, t, self))
            else:
                names.append(first)
            if not self.accept(","):
                break
        self.expect("in")
        return names

    def proc_decl(self) -> ProcDecl:
        t = self.tok
        name = self.ident("procedure name")
        self.expect("(")
        formals = self.idlist(")")
        self.expect("::")
        body = self.agent()
        self.expect(";")
        try:
            return ProcDecl(name, formals, body)
        except ValueError as err:
            raise self.error(str(err), t) from None


def _expand_range(first: str, last: str, tok: Token, parser: _Parser) -> list[str]:
    stem1, n1 = _split_index(first)
    stem2, n2 = _split_index(last)
    if stem1 is None or stem1 != stem2 or n2 < n1:
        raise parser.error(f"bad fresh range {first}..{last}", tok)
    return [f"{stem1}{k}" for k in range(n1, n2 + 1)]


def _split_index(name: str):
    stem = name.rstrip("0123456789")
    if stem == name or not stem:
        return None, 0
    return stem, int(name[len(stem):])


def _number(text: str):
    if text.isdigit():
        return int(text)
    return float(text)


def _check_calls(procs, main: Agent | None) -> None:
    arity = {}
    for p in procs:
        if p.name in arity:
            raise ParseError(f"procedure {p.name!r} declared twice")
        arity[p.name] = len(p.formals)
    bodies = [p.body for p in procs] + ([main] if main is not None else [])
    for body in bodies:
        for call in calls(body):
            if call.name not in arity:
                raise ParseError(f"call to undeclared procedure {call.name!r}")
            if arity[call.name] != len(call.actuals):
                raise ParseError(
                    f"procedure {call.name!r} expects {arity[call.name]} arguments, got {len(call.actuals)}"
                )


def check_arrow_scalars(arrow: Arrow, spec: Semiring) -> bool:
    """Scalar side condition: the lower threshold is not better than the upper."""
    if isinstance(arrow.lower, ConstraintThreshold) or isinstance(arrow.upper, ConstraintThreshold):
        return True
    lo = spec.zero() if isinstance(arrow.lower, Default) else arrow.lower.value.payload
    hi = spec.one() if isinstance(arrow.upper, Default) else arrow.upper.value.payload
    return not spec.lt(hi, lo)


# public entry points ------------------------------------------------------


def parse_problem(text: str) -> ProblemFile:
    """Parse a complete problem file."""
    return _Parser(text).problem()


def parse_program(text: str, spec: Semiring | None = None) -> Program:
    """Parse ``proc`` declarations followed by ``agent A``.

    A bare agent (without the ``agent`` keyword) is accepted too.
    """
    p = _Parser(text, spec or Weighted())
    procs = []
    while p.accept("proc"):
        procs.append(p.proc_decl())
    p.accept("agent")
    main = p.agent()
    p.accept(";")
    p.done()
    _check_calls(procs, main)
    return Program(tuple(procs), main)


def parse_agent(text: str, spec: Semiring | None = None) -> Agent:
    p = _Parser(text, spec or Weighted())
    agent = p.agent()
    p.done()
    return agent


def parse_semiring(text: str) -> Semiring:
    p = _Parser(text)
    s = p.semiring()
    p.done()
    return s


def parse_value(text: str, spec: Semiring) -> SemiringValue:
    p = _Parser(text, spec)
    v = p.value()
    p.done()
    return v


def parse_expression(text: str) -> Expr:
    p = _Parser(text)
    e = p.body()
    p.done()
    return e
