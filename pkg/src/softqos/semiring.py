"""Absorptive semirings used as preference structures.

Every concrete instance works on *raw payloads* (floats, bools, frozensets,
tuples); :class:`SemiringValue` tags a payload with the instance that owns it
so that cross-instance operations can be rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Any, Iterable, Sequence

__all__ = [
    "Semiring",
    "Weighted",
    "Fuzzy",
    "Probabilistic",
    "Classical",
    "SetBased",
    "Product",
    "SemiringValue",
    "SemiringError",
    "SpecMismatchError",
    "plus",
    "times",
    "leq",
    "lt",
    "equal",
    "residual",
    "zero",
    "one",
    "format_payload",
]

INF = math.inf
PROB_TOL = 1e-9


class SemiringError(ValueError):
    """Raised for invalid semiring payloads or parameters."""


class SpecMismatchError(SemiringError):
    """Raised when values from two different semirings are mixed."""


class Semiring:
    """Base class of the absorptive semiring instances.

    Subclasses implement the raw operations on payloads.  ``plus`` is the
    lub of the induced order and ``times`` combines preferences.
    """

    kind: str = ""

    # raw operations ----------------------------------------------------
    def zero(self) -> Any:
        raise NotImplementedError

    def one(self) -> Any:
        raise NotImplementedError

    def plus(self, a, b):
        raise NotImplementedError

    def times(self, a, b):
        raise NotImplementedError

    def residual(self, a, b):
        """Largest ``x`` (in the semiring order) with ``b * x <= a``."""
        raise NotImplementedError

    def leq(self, a, b) -> bool:
        return self.eq(self.plus(a, b), b)

    def eq(self, a, b) -> bool:
        return a == b

    def lt(self, a, b) -> bool:
        return self.leq(a, b) and not self.eq(a, b)

    def coerce(self, payload) -> Any:
        """Validate ``payload`` and return its canonical representation."""
        raise NotImplementedError

    def format(self, payload, display: bool = False) -> str:
        raise NotImplementedError

    def is_total(self) -> bool:
        return True

    # folds -------------------------------------------------------------
    def sum(self, payloads: Iterable) -> Any:
        return reduce(self.plus, payloads, self.zero())

    def prod(self, payloads: Iterable) -> Any:
        return reduce(self.times, payloads, self.one())

    # tagged values -----------------------------------------------------
    def value(self, payload) -> "SemiringValue":
        return SemiringValue(self, self.coerce(payload))

    @property
    def bottom(self) -> "SemiringValue":
        return SemiringValue(self, self.zero())

    @property
    def top(self) -> "SemiringValue":
        return SemiringValue(self, self.one())

    def literal(self) -> str:
        return self.kind

    def __repr__(self) -> str:
        return f"<semiring {self.literal()}>"

    def __str__(self) -> str:
        return self.literal()

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash((type(self).__name__, self._key()))

    def _key(self) -> tuple:
        return ()


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _format_real(x: float) -> str:
    if x == INF:
        return "inf"
    if float(x).is_integer():
        return str(int(x))
    return repr(float(x))


class Weighted(Semiring):
    """``<R+ u {inf}, min, +, inf, 0>``: costs, lower is better."""

    kind = "weighted"

    def zero(self):
        return INF

    def one(self):
        return 0

    def plus(self, a, b):
        return a if a <= b else b

    def times(self, a, b):
        return a + b

    def residual(self, a, b):
        if b == INF:
            return 0
        if a == INF:
            return INF
        return a - b if a > b else 0

    def leq(self, a, b):
        return a >= b

    def coerce(self, payload):
        if not _is_number(payload) or math.isnan(payload) or payload < 0:
            raise SemiringError(f"weighted value must be a non-negative real or inf, got {payload!r}")
        if isinstance(payload, float) and payload != INF and payload.is_integer():
            return int(payload)
        return payload

    def format(self, payload, display=False):
        return _format_real(payload)


class _UnitInterval(Semiring):
    def zero(self):
        return 0.0

    def one(self):
        return 1.0

    def plus(self, a, b):
        return a if a >= b else b

    def coerce(self, payload):
        if not _is_number(payload) or math.isnan(payload):
            raise SemiringError(f"{self.kind} value must be a real in [0,1], got {payload!r}")
        if payload < 0.0 or payload > 1.0:
            raise SemiringError(f"{self.kind} value {payload!r} outside [0,1]")
        return float(payload)

    def format(self, payload, display=False):
        return _format_real(payload)


class Fuzzy(_UnitInterval):
    """``<[0,1], max, min, 0, 1>``."""

    kind = "fuzzy"

    def times(self, a, b):
        return a if a <= b else b

    def residual(self, a, b):
        return 1.0 if b <= a else a

    def leq(self, a, b):
        return a <= b


class Probabilistic(_UnitInterval):
    """``<[0,1], max, *, 0, 1>`` with equality up to ``1e-9``."""

    kind = "probabilistic"

    def times(self, a, b):
        return a * b

    def residual(self, a, b):
        if b <= a or b == 0.0:
            return 1.0
        return min(1.0, max(0.0, a / b))

    def eq(self, a, b):
        return abs(a - b) <= PROB_TOL

    def leq(self, a, b):
        return a <= b + PROB_TOL

    def format(self, payload, display=False):
        if display:
            return f"{payload:.6f}"
        return _format_real(payload)


class Classical(Semiring):
    """``<{false,true}, or, and, false, true>``."""

    kind = "classical"

    def zero(self):
        return False

    def one(self):
        return True

    def plus(self, a, b):
        return a or b

    def times(self, a, b):
        return a and b

    def residual(self, a, b):
        return (not b) or a

    def leq(self, a, b):
        return (not a) or b

    def coerce(self, payload):
        if isinstance(payload, bool):
            return payload
        if _is_number(payload) and payload in (0, 1):
            return bool(payload)
        raise SemiringError(f"classical value must be true/false, got {payload!r}")

    def format(self, payload, display=False):
        return "true" if payload else "false"


class SetBased(Semiring):
    """``<P(U), union, intersection, {}, U>`` over a finite symbol universe."""

    kind = "setbased"

    def __init__(self, universe: Iterable[str]):
        universe = list(universe)
        if not universe:
            raise SemiringError("set-based universe must be non-empty")
        if len(set(universe)) != len(universe):
            raise SemiringError(f"duplicate symbols in universe {universe}")
        self.universe = tuple(sorted(universe))
        self._full = frozenset(self.universe)

    def _key(self):
        return self.universe

    def zero(self):
        return frozenset()

    def one(self):
        return self._full

    def plus(self, a, b):
        return a | b

    def times(self, a, b):
        return a & b

    def residual(self, a, b):
        return a | (self._full - b)

    def leq(self, a, b):
        return a <= b

    def coerce(self, payload):
        if isinstance(payload, str) or not isinstance(payload, Iterable):
            raise SemiringError(f"set-based value must be a set of symbols, got {payload!r}")
        result = frozenset(payload)
        extra = result - self._full
        if extra:
            raise SemiringError(f"symbols {sorted(extra)} not in universe {set(self.universe)}")
        return result

    def format(self, payload, display=False):
        return "{" + ",".join(sorted(payload)) + "}"

    def is_total(self):
        return len(self.universe) == 1

    def literal(self):
        return "set{" + ",".join(self.universe) + "}"


class Product(Semiring):
    """Cartesian product of semirings, ordered componentwise."""

    kind = "product"

    def __init__(self, components: Sequence[Semiring]):
        components = tuple(components)
        if len(components) < 2:
            raise SemiringError("a product semiring needs at least two components")
        self.components = components

    def _key(self):
        return self.components

    def _zip(self, a, b):
        return zip(self.components, a, b)

    def zero(self):
        return tuple(s.zero() for s in self.components)

    def one(self):
        return tuple(s.one() for s in self.components)

    def plus(self, a, b):
        return tuple(s.plus(x, y) for s, x, y in self._zip(a, b))

    def times(self, a, b):
        return tuple(s.times(x, y) for s, x, y in self._zip(a, b))

    def residual(self, a, b):
        return tuple(s.residual(x, y) for s, x, y in self._zip(a, b))

    def leq(self, a, b):
        return all(s.leq(x, y) for s, x, y in self._zip(a, b))

    def eq(self, a, b):
        return all(s.eq(x, y) for s, x, y in self._zip(a, b))

    def coerce(self, payload):
        if not isinstance(payload, (tuple, list)) or len(payload) != len(self.components):
            raise SemiringError(
                f"product value must be a {len(self.components)}-tuple, got {payload!r}"
            )
        return tuple(s.coerce(p) for s, p in zip(self.components, payload))

    def format(self, payload, display=False):
        return "(" + ", ".join(s.format(p, display) for s, p in zip(self.components, payload)) + ")"

    def is_total(self):
        return False

    def literal(self):
        return "product(" + ", ".join(s.literal() for s in self.components) + ")"


@dataclass(frozen=True)
class SemiringValue:
    """A payload tagged with the semiring it belongs to.

    Dataclass equality is exact; use :func:`equal` for the semiring's own
    equality (which is tolerant for probabilistic values).
    """

    spec: Semiring
    payload: Any

    def __str__(self) -> str:
        return self.spec.format(self.payload)

    def display(self) -> str:
        return self.spec.format(self.payload, display=True)


def _shared(a: SemiringValue, b: SemiringValue) -> Semiring:
    if a.spec != b.spec:
        raise SpecMismatchError(f"cannot mix {a.spec.literal()} and {b.spec.literal()} values")
    return a.spec


def plus(a: SemiringValue, b: SemiringValue) -> SemiringValue:
    s = _shared(a, b)
    return SemiringValue(s, s.plus(a.payload, b.payload))


def times(a: SemiringValue, b: SemiringValue) -> SemiringValue:
    s = _shared(a, b)
    return SemiringValue(s, s.times(a.payload, b.payload))


def residual(a: SemiringValue, b: SemiringValue) -> SemiringValue:
    """``a / b``: the best ``x`` such that ``times(b, x) <= a``."""
    s = _shared(a, b)
    return SemiringValue(s, s.residual(a.payload, b.payload))


def leq(a: SemiringValue, b: SemiringValue) -> bool:
    """``a <=_S b``, i.e. ``b`` is at least as good as ``a``."""
    s = _shared(a, b)
    return s.leq(a.payload, b.payload)


def lt(a: SemiringValue, b: SemiringValue) -> bool:
    s = _shared(a, b)
    return s.lt(a.payload, b.payload)


def equal(a: SemiringValue, b: SemiringValue) -> bool:
    s = _shared(a, b)
    return s.eq(a.payload, b.payload)


def zero(spec: Semiring) -> SemiringValue:
    return spec.bottom


def one(spec: Semiring) -> SemiringValue:
    return spec.top


def format_payload(spec: Semiring, payload, display: bool = False) -> str:
    return spec.format(payload, display)
