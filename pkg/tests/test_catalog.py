import itertools
import json
import random
from fractions import Fraction as F

import pytest

from cuntz.catalog import (PRESETS, RshStage, build, compact_elements, dimension_drop,
                           enumerate_step_functions, graph_algebra, graph_iso_check,
                           mapping_torus, member, nccw1, resolve, rsh_chain,
                           two_dim_dimension_drop)
from cuntz.errors import InvalidSpec, ParseError
from cuntz.lsc import Lsc, constant, is_compact_step, random_step, way_below_step
from cuntz.pullback import Pullback, PullbackElement, pb_canonical_approximants
from cuntz.scalars import NBAR, Compact, Soft, product
from cuntz.spaces import Space

I = Space.interval()
QUARTERS = (F(1, 4), F(1, 2), F(3, 4))


def consts(fs):
    return sorted(str(f) for f in fs)


class TestDimensionDrop:
    def test_membership(self):
        d = dimension_drop(2, 3)
        assert member(d, d.parse_candidate("const 1")) == (True, "member")
        ok, reason = member(d, d.parse_candidate("const 1/2"))
        assert not ok and reason == "f(1)=1/2 ∉ (1/3)N̄"

    def test_endpoint_domains(self):
        d = dimension_drop(2, 3)
        assert member(d, d.parse_candidate("[0,1/2]=1/2, (1/2,1]=2/3")) == (True, "member")
        assert member(d, d.parse_candidate("[0,1/2]=1/3, (1/2,1]=2/3")) == (
            False, "f(0)=1/3 ∉ (1/2)N̄")
        g = d.parse_candidate("[0,1/2)=1/2, [1/2,1]=1/3")
        assert member(d, g)[0]

    def test_supernatural_needs_infinite(self):
        d = resolve("zdd-2inf-3inf")
        assert member(d, d.parse_candidate("const 1/2"))[0] is False

    def test_compacts_bound_two(self):
        assert consts(compact_elements(dimension_drop(2, 3), 2)) == ["const 0", "const 1",
                                                                     "const 2"]

    def test_supernatural_compacts_exclude_soft(self):
        found = compact_elements(resolve("zdd-2inf-3inf"), 1)
        assert consts(found) == ["const 0", "const 1"]
        assert not any(isinstance(v, Soft) for f in found for v in f.layout.all_values())


class TestOtherAlgebras:
    def test_mapping_torus(self):
        t = mapping_torus(product(NBAR, 2), ((0, 1), (1, 0)))
        ok, reason = member(t, t.parse_candidate("const (1,2)"))
        assert not ok and reason == "f(1)=(1,2) ≠ φ(f(0))=(2,1)"
        assert member(t, t.parse_candidate("const (2,2)"))[0]

    def test_mapping_torus_needs_permutation(self):
        with pytest.raises(InvalidSpec):
            mapping_torus(product(NBAR, 2), ((1, 1), (0, 1)))

    def test_nccw_shape(self):
        with pytest.raises(InvalidSpec):
            nccw1(1, 1, ((1,),))

    def test_graph_algebra_is_endpoint_pullback(self):
        g = graph_algebra(Space.loop(), NBAR)
        assert isinstance(g.semigroup, Pullback)
        f = g.parse_candidate("v: 1; edge e: (0,1)=2")
        x = g.element(f)
        assert g.from_element(x) == f

    def test_discrete_graph_is_identity(self):
        d = graph_algebra(Space.discrete(["a", "b"]), NBAR)
        assert isinstance(d.semigroup, Lsc)
        assert graph_iso_check(Space.discrete(["a", "b"]), NBAR, trials=20).ok

    def test_two_dimensional_point_constraints(self):
        d = two_dim_dimension_drop({"x0": 2, "x1": 3})
        assert member(d, d.parse_candidate("x0: 1/2; x1: 1/3"))[0]
        ok, reason = member(d, d.parse_candidate("x0: 1/3; x1: 1/3"))
        assert not ok and "x0" in reason
        assert d.semigroup is None


class TestRsh:
    def test_identity_stage_collapses(self):
        M = product(NBAR, 2)
        r = rsh_chain(I, [RshStage(I, "all", ((1, 0), (0, 1)))], M)
        S = r.semigroup
        rng = random.Random(0)
        base = Lsc(I, M)
        for _ in range(50):
            f, g = random_step(I, M, rng), random_step(I, M, rng)
            x, y = S.check(PullbackElement(f, f)), S.check(PullbackElement(g, g))
            assert S.leq(x, y) == base.leq(f, g)
            assert S.componentwise_way_below(x, y) == way_below_step(f, g)

    def test_point_gluing(self):
        spec = {"kind": "rsh", "M": "nbar", "base_space": {"kind": "discrete", "points": ["p"]},
                "stages": [{"space": "interval", "Y": ["0", "1"], "A": [[1], [2]], "from": ["p"]}]}
        S = build(spec).semigroup
        ok = PullbackElement(constant(Space.discrete(["p"]), NBAR, 1),
                             resolve("lsc-interval-nbar").parse("[0,1/2]=1, (1/2,1]=2"))
        assert S.check(ok) == ok


class TestCompacts:
    def test_interval_bound_three(self):
        found = compact_elements(resolve("lsc-interval-nbar"), 3, breakpoints=QUARTERS)
        assert consts(found) == ["const 0", "const 1", "const 2", "const 3"]

    def test_scalar(self):
        assert compact_elements(resolve("nbar"), 3) == [0, 1, 2, 3]
        assert compact_elements(resolve("c2"), 1) == [v for v in resolve("c2").semigroup.grid(1)
                                                      if isinstance(v, Compact)]

    def test_enumeration_is_exhaustive_and_canonical(self):
        fs = list(enumerate_step_functions(I, NBAR, [0, 1], (F(1, 2),)))
        assert len(fs) == len(set(fs))
        # each of the 5 cells takes 0 or 1, subject to lower semicontinuity at the 3 points
        brute = set()
        for v0, a, m, b, v1 in itertools.product([0, 1], repeat=5):
            if v0 <= a and m <= min(a, b) and v1 <= b:
                brute.add((v0, a, m, b, v1))
        assert len(fs) == len(brute)
        assert sum(is_compact_step(f) for f in fs) == 2


class TestGraphIso:
    @pytest.mark.parametrize("space", [Space.loop(), Space.theta(), Space.cycle(3)],
                             ids=["loop", "theta", "cycle3"])
    def test_no_violations(self, space):
        r = graph_iso_check(space, NBAR, trials=40, seed=1)
        assert r.ok, r.violations[:3]
        assert r.checks > 0

    def test_two_vertex_multi_edge(self):
        g = Space.graph(["a", "b"], [("e1", "a", "b"), ("e2", "a", "b")])
        assert graph_iso_check(g, product(NBAR, 2), trials=40).ok


class TestSpecs:
    @pytest.mark.parametrize("name", list(PRESETS))
    def test_presets_build(self, name):
        d = resolve(name)
        assert d.name

    def test_inline_json(self):
        d = resolve('{"kind": "nccw1", "r": 1, "s": 1, "A": [[1], [1]]}')
        assert d.format(d.parse("2 | const 2")) == "2 | const 2"

    def test_file(self, tmp_path):
        p = tmp_path / "spec.json"
        p.write_text(json.dumps({"kind": "dimension_drop", "p": 2, "q": 3}))
        assert resolve(str(p)).name == "Z_{2,3}"

    def test_parse_error_has_line(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{\n  "kind": "scalar",\n  "M": \n}\n')
        with pytest.raises(ParseError) as info:
            resolve(str(p))
        assert str(info.value) == f"{p}:4: Expecting value"

    @pytest.mark.parametrize("spec", [{}, {"kind": "nope"}, {"kind": "nccw1", "r": 1}])
    def test_invalid(self, spec):
        with pytest.raises(InvalidSpec):
            build(spec)

    def test_unknown_file(self):
        with pytest.raises(InvalidSpec):
            resolve("/nonexistent/spec.json")


@pytest.mark.parametrize("name", ["zdd23", "nccw-11", "loop-graph-nbar", "torus-swap"])
def test_approximants_are_members(name):
    d = resolve(name)
    S = d.semigroup
    rng = random.Random(5)
    for _ in range(10):
        x = S.sample(rng)
        for t in itertools.islice(pb_canonical_approximants(S, x), 4):
            cand = d.from_element(t) if d.from_element else t
            assert member(d, cand)[0]
