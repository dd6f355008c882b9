"""Samplers and brute-force oracles shared by the test modules.

The oracles never call the library's residual, projection or solver code;
they enumerate carriers and assignments directly.
"""

from __future__ import annotations

import itertools
import random

from softqos import Classical, Constraint, ConstraintSpace, Fuzzy, Probabilistic, Product, SetBased, Weighted

INF = float("inf")

WEIGHTED_GRID = [x / 2 for x in range(0, 21)] + [INF]
FUZZY_GRID = [x / 10 for x in range(11)]
# dyadic values keep products exact in binary floating point
PROB_GRID = [0.0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0]
PROB_GRID_ODD = [0.0, 0.1, 0.2, 0.3, 0.45, 0.6, 0.7, 0.9, 0.96, 1.0]
UNIVERSE = ("p", "q", "r")
SET_GRID = [frozenset(s) for n in range(4) for s in itertools.combinations(UNIVERSE, n)]


def instances():
    """Every semiring instance the suites iterate over, with a finite value grid."""
    w, f, p, c, s = Weighted(), Fuzzy(), Probabilistic(), Classical(), SetBased(UNIVERSE)
    small_w = [0, 1, 2, 3, INF]
    small_f = [0.0, 0.5, 1.0]
    return [
        (w, WEIGHTED_GRID),
        (f, FUZZY_GRID),
        (p, sorted(set(PROB_GRID + PROB_GRID_ODD))),
        (c, [False, True]),
        (s, SET_GRID),
        (Product([w, f]), [(a, b) for a in small_w for b in small_f]),
        (Product([c, s]), [(a, b) for a in (False, True) for b in SET_GRID]),
    ]


def instance_ids():
    return [spec.literal() for spec, _ in instances()]


def exact_instances():
    """Instances whose sampled values combine without rounding."""
    out = []
    for spec, grid in instances():
        if spec.kind == "probabilistic":
            grid = PROB_GRID
        if spec.kind == "weighted":
            grid = [0, 1, 2, 3, 5, 8, INF]
        out.append((spec, grid))
    return out


# --- residual oracles ------------------------------------------------------


def _carrier(spec, grid):
    if spec.kind in ("classical", "setbased", "product", "fuzzy"):
        return grid
    return None


def oracle_residual(spec, grid, a, b):
    """Maximum ``x`` with ``b * x <= a``, found without the closed forms.

    Finite carriers (and the fuzzy grid, which is closed under residuation)
    are enumerated. Weighted costs are searched over a lattice fine enough
    to hold every exact answer; probabilities by bisection.
    """
    finite = _carrier(spec, grid)
    if finite is not None:
        ok = [x for x in finite if spec.leq(spec.times(b, x), a)]
        tops = [x for x in ok if all(spec.leq(y, x) for y in ok)]
        assert len(tops) == 1, f"no unique maximum among {ok}"
        return tops[0]
    if spec.kind == "weighted":
        lattice = [x / 2 for x in range(0, 81)] + [INF]
        # in the weighted order "larger" means cheaper, so take the cheapest cost
        return min(x for x in lattice if b + x >= a)
    lo, hi = 0.0, 1.0
    if spec.leq(spec.times(b, hi), a):
        return hi
    for _ in range(200):
        mid = (lo + hi) / 2
        if spec.times(b, mid) <= a:
            lo = mid
        else:
            hi = mid
    return lo


# --- random constraints and problems ----------------------------------------


def random_space(spec, rng: random.Random, n_vars=3, max_dom=3) -> ConstraintSpace:
    names = ["u", "v", "w", "z"][:n_vars]
    return ConstraintSpace(spec, {v: tuple(range(rng.randint(1, max_dom))) for v in names})


def random_constraint(space, grid, rng: random.Random, support=None) -> Constraint:
    if support is None:
        support = [v for v in space.variables if rng.random() < 0.6]
    return Constraint.from_function(space, support, lambda eta: rng.choice(grid))


def brute_force_solve(space, constraints, con):
    """Enumerate every complete assignment; returns (solution dict, blevel, best list)."""
    spec = space.spec
    variables = space.variables
    con = [v for v in variables if v in set(con)]
    sol = {}
    for tup in itertools.product(*(space.domain(v) for v in variables)):
        eta = dict(zip(variables, tup))
        val = spec.one()
        for c in constraints:
            val = spec.times(val, c.raw(eta))
        key = tuple(eta[v] for v in con)
        sol[key] = spec.plus(sol[key], val) if key in sol else val
    blevel = spec.zero()
    for v in sol.values():
        blevel = spec.plus(blevel, v)
    best = [dict(zip(con, k)) for k, v in sol.items() if not any(spec.lt(v, w) for w in sol.values())]
    return sol, blevel, best


# --- constraint algebra laws ----------------------------------------------------


def algebra_law_failures(spec, grid, n, seed=0):
    """Check the constraint-algebra laws on ``n`` random triples; return failure labels."""
    from softqos import constant

    rng = random.Random(seed)
    failures = []
    for i in range(n):
        space = random_space(spec, rng)
        c1, c2, c3 = (random_constraint(space, grid, rng) for _ in range(3))
        one, zero = constant(spec.top, space), constant(spec.bottom, space)
        vars_ = list(space.variables)
        a = set(rng.sample(vars_, rng.randint(0, len(vars_))))
        b = set(rng.sample(vars_, rng.randint(0, len(vars_))))
        checks = {
            "assoc": c1.combine(c2).combine(c3).equals(c1.combine(c2.combine(c3))),
            "comm": c1.combine(c2).equals(c2.combine(c1)),
            "unit": c1.combine(one).equals(c1),
            "absorb": c1.combine(zero).equals(zero),
            "proj-compose": c1.project(a).project(b).equals(c1.project(a & b)),
            "proj-improve": c1.leq(c1.project(a)),
            "combine-below": c1.combine(c2).leq(c1) and c1.combine(c2).leq(c2),
            "divide-bound": c2.combine(c1.divide(c2)).leq(c1),
        }
        if c1.leq(c2):
            checks["divide-exact"] = c2.combine(c1.divide(c2)).equals(c1)
        failures += [f"{spec.literal()}#{i}:{k}" for k, ok in checks.items() if not ok]
    return failures


def solver_mismatches(spec, grid, n, seed=0):
    """Compare ``solve`` with full enumeration on ``n`` random SCSPs."""
    from softqos import SCSP, solve

    rng = random.Random(seed)
    bad = []
    for i in range(n):
        space = random_space(spec, rng, n_vars=rng.randint(1, 4), max_dom=4)
        cs = [random_constraint(space, grid, rng) for _ in range(rng.randint(0, 5))]
        con = [v for v in space.variables if rng.random() < 0.5]
        report = solve(SCSP(space, cs, con))
        sol, blevel, best = brute_force_solve(space, cs, con)
        table_ok = all(spec.eq(report.solution.raw(dict(zip(report.solution.support, k))), v) for k, v in sol.items())
        if not table_ok or not spec.eq(report.blevel.payload, blevel) or report.best != best:
            bad.append(i)
    return bad
