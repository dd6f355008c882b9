"""Soft constraints stored as dense tables over finite domains.

A :class:`Constraint` holds one payload per tuple of its support, in
``itertools.product`` order of the support domains.  The support is always
kept in the variable order of its :class:`ConstraintSpace`, so two
constraints with the same support set share a table layout.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, Iterable, Iterator, Mapping, Sequence

from .semiring import Semiring, SemiringValue, SpecMismatchError

__all__ = [
    "ConstraintSpace",
    "Constraint",
    "ConstraintError",
    "combine_all",
    "entails",
    "diagonal",
    "constant",
]

DomainValue = Any  # int or str symbol


class ConstraintError(ValueError):
    pass


class ConstraintSpace:
    """Semiring, ordered variables and their finite domains."""

    def __init__(self, spec: Semiring, domains: Mapping[str, Sequence[DomainValue]]):
        self.spec = spec
        self.variables: tuple[str, ...] = tuple(domains)
        self._domains: dict[str, tuple] = {}
        self._index: dict[str, dict] = {}
        for var, dom in domains.items():
            dom = tuple(dom)
            if not dom:
                raise ConstraintError(f"domain of {var!r} is empty")
            if len(set(dom)) != len(dom):
                raise ConstraintError(f"domain of {var!r} has duplicate values")
            self._domains[var] = dom
            self._index[var] = {d: i for i, d in enumerate(dom)}
        self._order = {v: i for i, v in enumerate(self.variables)}
        self._hash = hash((spec, tuple(self._domains.items())))

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, ConstraintSpace)
            and self.spec == other.spec
            and self.variables == other.variables
            and self._domains == other._domains
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"ConstraintSpace({self.spec.literal()}, {list(self.variables)})"

    def __contains__(self, var: str) -> bool:
        return var in self._domains

    def domain(self, var: str) -> tuple:
        try:
            return self._domains[var]
        except KeyError:
            raise ConstraintError(f"unknown variable {var!r}") from None

    def position(self, var: str, value: DomainValue) -> int:
        try:
            return self._index[var][value]
        except KeyError:
            if var not in self._index:
                raise ConstraintError(f"unknown variable {var!r}") from None
            raise ConstraintError(f"value {value!r} not in domain of {var!r}") from None

    def canonical(self, variables: Iterable[str]) -> tuple[str, ...]:
        vs = set(variables)
        for v in vs:
            if v not in self._domains:
                raise ConstraintError(f"unknown variable {v!r}")
        return tuple(sorted(vs, key=self._order.__getitem__))

    def tuples(self, support: Sequence[str]) -> Iterator[tuple]:
        return itertools.product(*(self._domains[v] for v in support))

    def size(self, support: Sequence[str]) -> int:
        n = 1
        for v in support:
            n *= len(self._domains[v])
        return n


@lru_cache(maxsize=4096)
def _embedding(space: ConstraintSpace, sub: tuple, sup: tuple) -> tuple[int, ...]:
    """For every tuple index of ``sup``, the index of its restriction to ``sub``."""
    sizes = [len(space.domain(v)) for v in sup]
    strides = {}
    stride = 1
    for v in reversed(sub):
        strides[v] = stride
        stride *= len(space.domain(v))
    weights = [strides.get(v, 0) for v in sup]
    out = []
    for idx in itertools.product(*(range(n) for n in sizes)):
        out.append(sum(i * w for i, w in zip(idx, weights)))
    return tuple(out)


@dataclass(frozen=True, eq=False)
class Constraint:
    """A soft constraint: a support and one payload per support tuple."""

    space: ConstraintSpace
    support: tuple[str, ...]
    table: tuple

    def __post_init__(self):
        if self.support != self.space.canonical(self.support):
            raise ConstraintError(f"support {self.support} not in canonical space order")
        if len(self.table) != self.space.size(self.support):
            raise ConstraintError("table size does not match support domains")

    # construction ------------------------------------------------------
    @classmethod
    def from_function(
        cls,
        space: ConstraintSpace,
        support: Iterable[str],
        fn: Callable[[dict], Any],
    ) -> "Constraint":
        """Tabulate ``fn(assignment)`` (a raw or tagged value) over the support."""
        support = space.canonical(support)
        spec = space.spec
        table = []
        for tup in space.tuples(support):
            v = fn(dict(zip(support, tup)))
            if isinstance(v, SemiringValue):
                if v.spec != spec:
                    raise SpecMismatchError(f"value of {v.spec.literal()} in {spec.literal()} space")
                v = v.payload
            else:
                v = spec.coerce(v)
            table.append(v)
        return cls(space, support, tuple(table))

    @classmethod
    def from_table(
        cls,
        space: ConstraintSpace,
        support: Sequence[str],
        entries: Mapping[tuple, Any],
        default: Any = None,
    ) -> "Constraint":
        """Build from ``{tuple_in_given_support_order: value}``."""
        support = tuple(support)
        if len(set(support)) != len(support):
            raise ConstraintError(f"repeated variable in support {support}")
        normalized = {}
        for key, val in entries.items():
            key = key if isinstance(key, tuple) else (key,)
            if len(key) != len(support):
                raise ConstraintError(f"table key {key} does not match support {support}")
            for var, d in zip(support, key):
                space.position(var, d)
            normalized[key] = val

        def lookup(eta):
            key = tuple(eta[v] for v in support)
            if key in normalized:
                return normalized[key]
            if default is None:
                raise ConstraintError(f"table has no entry for {key}")
            return default

        return cls.from_function(space, support, lookup)

    # access ------------------------------------------------------------
    @property
    def spec(self) -> Semiring:
        return self.space.spec

    def _index_of(self, eta: Mapping[str, DomainValue]) -> int:
        idx = 0
        for v in self.support:
            if v not in eta:
                raise ConstraintError(f"assignment does not bind support variable {v!r}")
            idx = idx * len(self.space.domain(v)) + self.space.position(v, eta[v])
        return idx

    def eval(self, eta: Mapping[str, DomainValue]) -> SemiringValue:
        return SemiringValue(self.spec, self.raw(eta))

    def raw(self, eta: Mapping[str, DomainValue]) -> Any:
        return self.table[self._index_of(eta)]

    def __call__(self, **eta) -> SemiringValue:
        return self.eval(eta)

    def items(self) -> Iterator[tuple[tuple, Any]]:
        return zip(self.space.tuples(self.support), self.table)

    def assignments(self) -> Iterator[tuple[dict, SemiringValue]]:
        for tup, val in self.items():
            yield dict(zip(self.support, tup)), SemiringValue(self.spec, val)

    def scalar(self) -> SemiringValue:
        if self.support:
            raise ConstraintError(f"constraint has non-empty support {self.support}")
        return SemiringValue(self.spec, self.table[0])

    # algebra -----------------------------------------------------------
    def _check(self, other: "Constraint") -> None:
        if self.space != other.space:
            raise ConstraintError("constraints live in different spaces")

    def _pointwise(self, other: "Constraint", op) -> "Constraint":
        self._check(other)
        if self.support == other.support:
            return Constraint(self.space, self.support, tuple(map(op, self.table, other.table)))
        union = self.space.canonical(self.support + other.support)
        left = _embedding(self.space, self.support, union)
        right = _embedding(self.space, other.support, union)
        t1, t2 = self.table, other.table
        return Constraint(self.space, union, tuple(op(t1[i], t2[j]) for i, j in zip(left, right)))

    def cylindrify(self, support: Iterable[str]) -> "Constraint":
        """Same function, tabulated over a larger support."""
        union = self.space.canonical(tuple(support) + self.support)
        if union == self.support:
            return self
        idx = _embedding(self.space, self.support, union)
        return Constraint(self.space, union, tuple(self.table[i] for i in idx))

    def combine(self, other: "Constraint") -> "Constraint":
        return self._pointwise(other, self.spec.times)

    def divide(self, other: "Constraint") -> "Constraint":
        return self._pointwise(other, self.spec.residual)

    def project(self, keep: Iterable[str]) -> "Constraint":
        """Eliminate every support variable not in ``keep`` by summing it out."""
        keep = set(keep)
        for v in keep:
            if v not in self.space:
                raise ConstraintError(f"unknown variable {v!r}")
        kept = tuple(v for v in self.support if v in keep)
        if kept == self.support:
            return self
        spec = self.spec
        buckets = [spec.zero()] * self.space.size(kept)
        plus = spec.plus
        for pos, val in zip(_embedding(self.space, kept, self.support), self.table):
            buckets[pos] = plus(buckets[pos], val)
        return Constraint(self.space, kept, tuple(buckets))

    def hide(self, var: str) -> "Constraint":
        if var not in self.space:
            raise ConstraintError(f"unknown variable {var!r}")
        return self.project(v for v in self.space.variables if v != var)

    def rename(self, mapping: Mapping[str, str]) -> "Constraint":
        """Rename support variables; source and target domains must agree."""
        mapping = {k: v for k, v in mapping.items() if k in self.support and k != v}
        if not mapping:
            return self
        new_names = [mapping.get(v, v) for v in self.support]
        if len(set(new_names)) != len(new_names):
            raise ConstraintError(f"renaming {mapping} merges support variables")
        for old, new in mapping.items():
            if self.space.domain(old) != self.space.domain(new):
                raise ConstraintError(f"cannot rename {old!r} to {new!r}: domains differ")
        old_of = dict(zip(new_names, self.support))
        return Constraint.from_function(
            self.space,
            new_names,
            lambda eta: self.table[self._index_of({old_of[n]: d for n, d in eta.items()})],
        )

    # order -------------------------------------------------------------
    def _pairs(self, other: "Constraint"):
        self._check(other)
        union = self.space.canonical(self.support + other.support)
        a = self.cylindrify(union).table
        b = other.cylindrify(union).table
        return union, a, b

    def leq(self, other: "Constraint") -> bool:
        """``self ⊑ other``: pointwise ``<=_S`` on the union support."""
        _, a, b = self._pairs(other)
        leq = self.spec.leq
        return all(leq(x, y) for x, y in zip(a, b))

    def equals(self, other: "Constraint") -> bool:
        """Same function (pointwise semiring equality) after cylindrification."""
        _, a, b = self._pairs(other)
        eq = self.spec.eq
        return all(eq(x, y) for x, y in zip(a, b))

    def lt(self, other: "Constraint") -> bool:
        _, a, b = self._pairs(other)
        spec = self.spec
        return all(spec.leq(x, y) for x, y in zip(a, b)) and not all(
            spec.eq(x, y) for x, y in zip(a, b)
        )

    def first_violation(self, other: "Constraint") -> dict | None:
        """First tuple (in table order) where ``self <=_S other`` fails."""
        union, a, b = self._pairs(other)
        leq = self.spec.leq
        for tup, x, y in zip(self.space.tuples(union), a, b):
            if not leq(x, y):
                return dict(zip(union, tup))
        return None

    def __eq__(self, other):
        """Identical space, identical support, pointwise-equal tables."""
        if not isinstance(other, Constraint):
            return NotImplemented
        if self.space != other.space or self.support != other.support:
            return False
        eq = self.spec.eq
        return all(eq(x, y) for x, y in zip(self.table, other.table))

    def __hash__(self):
        return hash((self.space, self.support))

    def key(self) -> tuple:
        """Exact hashable identity, for visited sets."""
        return (self.support, self.table)

    def __repr__(self):
        if not self.support:
            return f"Constraint(const {self.spec.format(self.table[0])})"
        return f"Constraint(support={list(self.support)}, size={len(self.table)})"


def constant(value: SemiringValue | Any, space: ConstraintSpace) -> Constraint:
    if isinstance(value, SemiringValue):
        if value.spec != space.spec:
            raise SpecMismatchError("constant value from a different semiring")
        payload = value.payload
    else:
        payload = space.spec.coerce(value)
    return Constraint(space, (), (payload,))


def diagonal(space: ConstraintSpace, x: str, y: str) -> Constraint:
    """Equality constraint: ``one`` where ``x == y``, ``zero`` elsewhere."""
    if space.domain(x) != space.domain(y):
        raise ConstraintError(f"diagonal needs equal domains for {x!r} and {y!r}")
    spec = space.spec
    if x == y:
        return constant(spec.top, space)
    return Constraint.from_function(
        space, (x, y), lambda eta: spec.one() if eta[x] == eta[y] else spec.zero()
    )


def combine_all(constraints: Iterable[Constraint], space: ConstraintSpace) -> Constraint:
    result = constant(space.spec.top, space)
    for c in constraints:
        result = result.combine(c)
    return result


def entails(constraints: Iterable[Constraint], c: Constraint) -> bool:
    """``C ⊢ c`` iff the combination of ``C`` is below ``c``."""
    return combine_all(constraints, c.space).leq(c)
