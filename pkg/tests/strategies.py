"""Hypothesis strategies for nmsccp agents and programs."""

from hypothesis import strategies as st

from softqos import Weighted
from softqos.lang.ast import (
    Arrow,
    Ask,
    Call,
    ConstraintThreshold,
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
    Update,
    ValueThreshold,
)

SPEC = Weighted()
VARS = ["x", "y", "z", "s1"]
CONSTRAINTS = ["c1", "c2", "sp1", "Memory"]
PROCS = ["P", "Q"]

variables = st.sampled_from(VARS)
costs = st.one_of(st.integers(0, 20), st.just(float("inf")), st.sampled_from([0.5, 2.25]))

scalar = costs.map(lambda v: ValueThreshold(SPEC.value(v)))
threshold = st.one_of(st.just(Default()), scalar, st.sampled_from(CONSTRAINTS).map(ConstraintThreshold))


def _well_formed(arrow):
    lo, hi = arrow.lower, arrow.upper
    if isinstance(lo, ValueThreshold) and isinstance(hi, ValueThreshold):
        return not SPEC.lt(hi.value.payload, lo.value.payload)
    return True


arrows = st.builds(Arrow, threshold, threshold).filter(_well_formed)
renamings = st.lists(st.tuples(variables, variables), max_size=2, unique_by=lambda p: p[0]).map(tuple)
crefs = st.one_of(
    st.builds(Ref, st.sampled_from(CONSTRAINTS), renamings),
    st.builds(Diagonal, variables, variables),
)
calls = st.builds(Call, st.sampled_from(PROCS), st.lists(variables, max_size=2).map(tuple))


def _extend(children):
    guard = st.one_of(*(st.builds(k, crefs, arrows, children) for k in (Ask, Nask)))
    return st.one_of(
        *(st.builds(k, crefs, arrows, children) for k in (Tell, Retract, Ask, Nask)),
        st.builds(Update, st.lists(variables, min_size=1, max_size=2, unique=True).map(tuple), crefs, arrows, children),
        st.lists(guard, min_size=2, max_size=3).map(lambda gs: Sum(tuple(gs))),
        st.builds(Parallel, children, children),
        st.builds(Exists, variables, children),
    )


agents = st.recursive(st.one_of(st.just(Success()), calls), _extend, max_leaves=8)

procs = st.builds(
    ProcDecl,
    st.sampled_from(PROCS),
    st.lists(variables, max_size=2, unique=True).map(tuple),
    agents,
)
programs = st.builds(
    Program,
    st.lists(procs, max_size=2, unique_by=lambda p: p.name).map(tuple),
    agents,
)
