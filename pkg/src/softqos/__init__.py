"""Semiring-based soft constraints and the nmsccp negotiation language."""

from .constraint import Constraint, ConstraintError, ConstraintSpace, combine_all, constant, diagonal, entails
from .semiring import (
    Classical,
    Fuzzy,
    Probabilistic,
    Product,
    Semiring,
    SemiringValue,
    SetBased,
    Weighted,
    equal,
    leq,
    lt,
    one,
    plus,
    residual,
    times,
    zero,
)
from .solver import SCSP, SolutionReport, alpha_consistent, consistent, solve

__version__ = "0.1.0"
