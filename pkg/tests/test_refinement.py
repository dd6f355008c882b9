import pytest

from softqos import Classical, Constraint, ConstraintSpace, Fuzzy, Probabilistic
from softqos.refinement import Orientation, RefinementQuery, locally_refines, reliability_margin


@pytest.fixture
def crisp():
    space = ConstraintSpace(Classical(), {v: range(8) for v in ("incomp", "outcomp", "bwbyte", "redbyte")})

    def leq(a, b):
        return Constraint.from_function(space, [a, b], lambda e: e[a] <= e[b])

    memory = leq("incomp", "outcomp")
    parts = [leq("bwbyte", "outcomp"), leq("redbyte", "bwbyte"), leq("incomp", "redbyte")]
    loose = Constraint.from_function(space, ["redbyte", "bwbyte"], lambda e: True)
    return memory, parts, loose


def brute_refines(impl, req, interface):
    """Enumerate every full assignment instead of projecting."""
    import itertools

    space = req.space
    spec = space.spec
    best = {}
    for tup in itertools.product(*(space.domain(v) for v in space.variables)):
        eta = dict(zip(space.variables, tup))
        val = spec.prod(c.raw(eta) for c in impl)
        key = tuple(eta[v] for v in interface)
        best[key] = spec.plus(best.get(key, spec.zero()), val)
    return all(spec.leq(v, req.raw(dict(zip(interface, k)))) for k, v in best.items())


def test_imp1_refines_memory(crisp):
    memory, parts, _ = crisp
    q = RefinementQuery(tuple(parts), memory, ("incomp", "outcomp"), Orientation.IMPL_REFINES_REQ)
    report = locally_refines(q)
    assert report.holds and report.witness is None
    assert brute_refines(parts, memory, ("incomp", "outcomp"))


def test_imp2_fails_with_witness(crisp):
    memory, parts, loose = crisp
    impl = (parts[0], loose, parts[2])
    q = RefinementQuery(impl, memory, ("incomp", "outcomp"), Orientation.IMPL_REFINES_REQ)
    report = locally_refines(q)
    assert not report.holds
    w = report.witness
    assert w["incomp"] > w["outcomp"]
    assert not brute_refines(impl, memory, ("incomp", "outcomp"))


def test_self_refinement_holds():
    space = ConstraintSpace(Fuzzy(), {"x": range(3), "y": range(3)})
    c = Constraint.from_function(space, ["x", "y"], lambda e: 1.0 if e["x"] == e["y"] else 0.5)
    for o in Orientation:
        assert locally_refines(RefinementQuery((c,), c, ("x", "y"), o)).holds


def reliability_space():
    space = ConstraintSpace(Probabilistic(), {"outcomp": (512, 1024, 2048, 4096), "bwbyte": (1024, 2048, 4096)})

    def c1(e):
        o, b = e["outcomp"], e["bwbyte"]
        if o <= 1024:
            return 1.0
        if o > 4096:
            return 0.0
        return 1 - o / (100 * b)

    return space, Constraint.from_function(space, ["outcomp", "bwbyte"], c1)


def test_reliability_requirement_entailed():
    space, c1 = reliability_space()
    one = Constraint.from_function(space, [], lambda e: 1.0)
    req = Constraint.from_function(space, [], lambda e: 0.9)
    report = reliability_margin((c1, one, one), req)
    assert report.holds
    assert report.blevel.payload == 1.0
    margins = {tuple(eta.values()): a.payload for eta, a, _ in report.margins}
    assert margins[(4096, 1024)] == pytest.approx(0.96, abs=1e-9)


def test_reliability_requirement_of_one_fails():
    space, c1 = reliability_space()
    req = Constraint.from_function(space, [], lambda e: 1.0)
    report = reliability_margin((c1,), req)
    assert not report.holds
    assert report.witness is not None
    assert c1.eval(report.witness).payload < 1.0


def test_reliability_rejects_crisp(crisp):
    memory, parts, _ = crisp
    with pytest.raises(ValueError):
        reliability_margin(tuple(parts), memory)
