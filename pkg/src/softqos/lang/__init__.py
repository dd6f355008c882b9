"""Concrete syntax of the nmsccp language and the problem-file format."""

from .ast import *  # noqa: F401,F403
from .lexer import ParseError
from .parser import parse_agent, parse_expression, parse_problem, parse_program, parse_semiring, parse_value
from .printer import format_agent, format_problem, pretty

__all__ = [
    "ParseError",
    "parse_agent",
    "parse_expression",
    "parse_problem",
    "parse_program",
    "parse_semiring",
    "parse_value",
    "format_agent",
    "format_problem",
    "pretty",
]
