"""Tokenizer shared by problem files, agent text and value literals."""

from __future__ import annotations

import re
from dataclasses import dataclass

__all__ = ["Token", "ParseError", "tokenize"]


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message = message
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line else ""
        super().__init__(f"{where}{message}")


@dataclass(frozen=True)
class Token:
    kind: str  # NUM, IDENT, OP, EOF
    text: str
    line: int
    col: int

    def __str__(self):
        return "end of input" if self.kind == "EOF" else repr(self.text)


_OPS = [
    "-[", "]->", "||", "::", ":=", "..", "<=", ">=", "==", "!=",
    "<", ">", "(", ")", "{", "}", "[", "]", ",", ";", ":", ".", "+", "-", "*", "/", "=", "_",
]

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\n]+|#[^\n]*)"
    r"|(?P<NUM>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)"
    r"|(?P<IDENT>[A-Za-z_][A-Za-z0-9_]*'*)"
    r"|(?P<OP>" + "|".join(re.escape(op) for op in _OPS) + ")"
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        chunk = m.group()
        if kind != "ws":
            if kind == "IDENT" and chunk == "_":
                kind = "OP"
            tokens.append(Token(kind, chunk, line, pos - line_start + 1))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens
