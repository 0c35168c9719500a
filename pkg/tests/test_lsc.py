import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cuntz.errors import GlueOrderViolation, NotLowerSemicontinuous, NotPresentable, ParseError
from cuntz.lsc import (Lsc, PiecewiseCharPresentation, add_step, char_action, chi_approx,
                       chi_search, constant, directed_join, eval_at, format_step, from_presentation,
                       glue, is_compact_step, leq_step, meet_step, parse_step, precompose,
                       probe_sup_equals, random_step, restrict, to_presentation, way_below_step)
from cuntz.scalars import INF, NBAR
from cuntz.spaces import CellMap, CellSet, Piece, Space, compose
from cuntz.suites import _random_closed, chi_oracle

from strategies import NBAR2, SPACES

I = Space.interval()
FINITE = [0, 1, 2, 3, 4, 5, INF]


def step(text, M=NBAR, space=I):
    return parse_step(text, space, M)


def const(v, M=NBAR, space=I):
    return constant(space, M, v)


DIP = step("[0,1/2)=2, {1/2}=1, (1/2,1]=2")
HALF = CellSet.from_parts(I, segments=[("e", F(1, 2), F(1, 2), True, True)])
MIRROR = CellMap(I, I, ("1", "0"), ((Piece(F(0), F(1), "e", F(1), F(0)),),))


class TestConstruction:
    def test_open_superlevel_accepted(self):
        f = step("[0,1/2]=1, (1/2,1]=2")
        assert eval_at(f, F(1, 2)) == 1

    def test_closed_superlevel_rejected(self):
        with pytest.raises((NotLowerSemicontinuous, ParseError)):
            step("[0,1/2)=1, [1/2,1]=2")

    def test_point_dip_accepted(self):
        assert format_step(DIP) == "[0,1/2)=2, {1/2}=1, (1/2,1]=2"

    def test_evaluation(self):
        assert eval_at(DIP, F(1, 2)) == 1
        assert eval_at(DIP, F(1, 4)) == 2
        assert all(eval_at(const(3), t) == 3 for t in (F(0), F(1, 3), F(1)))

    def test_canonical_form_merges_cells(self):
        f = step("[0,1/3]=2, (1/3,2/3)=2, [2/3,1]=2")
        assert format_step(f) == "const 2"
        assert f == const(2)


class TestOrderAndSum:
    def test_order(self):
        assert leq_step(const(1), const(2))
        assert leq_step(DIP, const(2))
        assert not leq_step(const(2), DIP)

    def test_sum(self):
        assert format_step(add_step(DIP, const(1))) == "[0,1/2)=3, {1/2}=2, (1/2,1]=3"
        assert add_step(DIP, const(0)) == DIP

    def test_sum_on_common_refinement(self):
        a = step("[0,1/2)=1, [1/2,1]=0")
        b = step("[0,1/4]=0, (1/4,1]=1")
        # cellwise on the refinement {1/4, 1/2}
        s = add_step(a, b)
        assert format_step(s) == "[0,1/4]=1, (1/4,1/2)=2, [1/2,1]=1"
        for t in (F(0), F(1, 8), F(1, 4), F(3, 8), F(1, 2), F(3, 4), F(1)):
            assert eval_at(s, t) == eval_at(a, t) + eval_at(b, t)


class TestWayBelow:
    def test_bounded_below_infinity(self):
        assert way_below_step(step("[0,1/2]=1, (1/2,1]=2"), const(INF))

    def test_point_obstruction(self):
        f = step("[0,1/2]=0, (1/2,1]=1")
        assert not way_below_step(f, f)
        assert not chi_oracle(f, f)

    def test_compact_constant(self):
        assert way_below_step(const(1), const(1))
        assert chi_oracle(const(1), const(1))

    def test_infinity_not_compact(self):
        assert not way_below_step(const(INF), const(INF))


class TestRestrictGlue:
    def test_restrict_to_point(self):
        r = restrict(DIP, HALF)
        assert r.space.kind == "discrete"
        assert format_step(r) == "const 1"

    def test_restrict_to_whole(self):
        assert restrict(DIP, CellSet.whole(I)) == DIP

    def test_restrict_to_quarter(self):
        Y = CellSet.from_parts(I, segments=[("e", 0, F(1, 4), True, True)])
        assert format_step(restrict(DIP, Y)) == "const 2"

    def test_glue_point(self):
        sub = restrict(DIP, HALF).space
        assert glue(const(2), const(1, space=sub), HALF) == DIP

    def test_glue_identity(self):
        assert glue(DIP, restrict(DIP, HALF), HALF) == DIP

    def test_glue_half(self):
        Y = CellSet.from_parts(I, segments=[("e", 0, F(1, 2), True, True)])
        sub = restrict(const(0), Y).space
        g = glue(const(INF), const(0, space=sub), Y)
        assert format_step(g) == "[0,1/2]=0, (1/2,1]=∞" or format_step(g) == "[0,1/2]=0, (1/2,1]=inf"
        for t, v in ((F(0), 0), (F(1, 2), 0), (F(3, 4), INF), (F(1), INF)):
            assert eval_at(g, t) == v

    def test_glue_needs_order(self):
        sub = restrict(DIP, HALF).space
        with pytest.raises(GlueOrderViolation):
            glue(DIP, const(3, space=sub), HALF)


class TestCharAction:
    def test_open_interval(self):
        U = CellSet.from_parts(I, segments=[("e", F(1, 3), 1, False, False)])
        g = char_action(const(1), U)
        assert [eval_at(g, t) for t in (F(0), F(1, 3), F(1, 2), F(1))] == [0, 0, 1, 0]

    def test_whole_and_empty(self):
        assert char_action(DIP, CellSet.whole(I)) == DIP
        assert char_action(DIP, CellSet.empty(I)) == const(0)


class TestApproximation:
    def test_dip_first_approximant(self):
        assert format_step(chi_approx(DIP, 1)) == "[0,3/8)=2, [3/8,5/8]=1, (5/8,1]=2"

    def test_dip_approximants_way_below(self):
        gs = [chi_approx(DIP, k) for k in range(1, 6)]
        assert all(way_below_step(g, DIP) for g in gs)
        assert all(way_below_step(a, b) for a, b in zip(gs, gs[1:]))
        assert all(eval_at(g, F(1, 2)) == 1 for g in gs)

    def test_infinity_approximants_are_constants(self):
        assert [chi_approx(const(INF), k) for k in (1, 2, 3)] == [const(1), const(2), const(3)]
        assert all(way_below_step(const(k), const(INF)) for k in range(1, 5))

    def test_compact_constant_approximates_itself(self):
        assert all(chi_approx(const(4), k) == const(4) for k in (1, 2, 3))

    def test_directed_join(self):
        U1 = CellSet.from_parts(I, segments=[("e", 0, F(2, 3), True, False)])
        U2 = CellSet.from_parts(I, segments=[("e", F(1, 3), 1, False, True)])
        g1, g2 = char_action(const(1), U1), char_action(const(1), U2)
        h = directed_join(g1, g2, const(2))
        assert leq_step(g1, h) and leq_step(g2, h) and way_below_step(h, const(2))

    def test_directed_join_of_zeros(self):
        h = directed_join(const(0), const(0), const(2))
        assert way_below_step(h, const(2))


class TestPresentations:
    def test_single_open(self):
        U = CellSet.from_parts(I, segments=[("e", F(1, 4), F(3, 4), False, False)])
        P = PiecewiseCharPresentation(I, NBAR, (U,), ((frozenset({0}), 3),))
        assert from_presentation(P) == char_action(const(3), U)

    def test_two_opens(self):
        U1 = CellSet.from_parts(I, segments=[("e", 0, F(2, 3), True, False)])
        U2 = CellSet.from_parts(I, segments=[("e", F(1, 3), 1, False, True)])
        P = PiecewiseCharPresentation(I, NBAR, (U1, U2), (
            (frozenset({0}), 1), (frozenset({1}), 3), (frozenset({0, 1}), 4)))
        assert format_step(from_presentation(P)) == "[0,1/3]=1, (1/3,2/3)=4, [2/3,1]=3"

    def test_empty(self):
        P = PiecewiseCharPresentation(I, NBAR, (), ())
        assert from_presentation(P) == const(0)

    def test_round_trip(self):
        f = step("[0,1/4]=1, (1/4,1]=2")
        assert from_presentation(to_presentation(f)) == f

    def test_point_dip_has_no_presentation(self):
        with pytest.raises(NotPresentable):
            to_presentation(DIP)


class TestPrecompose:
    def test_identity(self):
        assert precompose(DIP, CellMap.identity(I)) == DIP

    def test_mirror(self):
        f = step("[0,1/4]=1, (1/4,1]=2")
        assert format_step(precompose(f, MIRROR)) == "[0,3/4)=2, [3/4,1]=1"
        assert precompose(DIP, MIRROR) == DIP

    def test_doubling_of_the_loop(self):
        loop = Space.loop()
        # the loop wraps twice around itself; values are read back at rational probes
        m = CellMap(loop, loop, ("v",), ((Piece(F(0), F(1, 2), "e", F(0), F(1)),
                                          Piece(F(1, 2), F(1), "e", F(0), F(1))),))
        f = parse_step("v: 1; edge e: (0,1/3]=1, (1/3,1)=2", loop, NBAR)
        g = precompose(f, m)
        for s in (F(1, 12), F(1, 6), F(1, 3), F(1, 2), F(7, 12), F(5, 6)):
            assert eval_at(g, ("e", s)) == eval_at(f, m(("e", s)))

    def test_functorial(self):
        f = step("[0,1/4]=1, (1/4,1]=2")
        assert precompose(f, compose(MIRROR, MIRROR)) == precompose(precompose(f, MIRROR), MIRROR)


class TestParseFormat:
    def test_graph_round_trip(self):
        f = parse_step("u: 0; v: 0; edge e1: (0,1/2)=2, [1/2,1)=0; edge e2: (0,1)=1; edge e3: (0,1)=0",
                       Space.theta(), NBAR)
        assert parse_step(format_step(f), Space.theta(), NBAR) == f

    def test_bad_text(self):
        with pytest.raises(ParseError):
            step("[0,1/2=1")


# ---------------------------------------------------------------- properties


@st.composite
def triples(draw, space="interval", M=NBAR):
    rng = draw(st.randoms(use_true_random=False))
    sp = SPACES[space]
    return tuple(random_step(sp, M, rng, 3, FINITE if M == NBAR else None) for _ in range(3))


SPACE_NAMES = ["interval", "loop", "theta"]


@pytest.mark.parametrize("space", SPACE_NAMES)
@given(data=st.data())
def test_order_is_partial(space, data):
    a, b, c = data.draw(triples(space))
    assert leq_step(a, a)
    if leq_step(a, b) and leq_step(b, a):
        assert a == b
    if leq_step(a, b) and leq_step(b, c):
        assert leq_step(a, c)


@pytest.mark.parametrize("space", SPACE_NAMES)
@given(data=st.data())
def test_way_below_is_auxiliary(space, data):
    a, b, c = data.draw(triples(space))
    if way_below_step(a, b):
        assert leq_step(a, b)
    assert way_below_step(const(0, space=a.space), a)
    lo = meet_step(a, b)
    if way_below_step(b, c):
        assert way_below_step(lo, c)


@given(triples(M=NBAR2))
def test_way_below_matches_chi_oracle(t):
    g, f, _ = t
    g = meet_step(g, chi_approx(f, 2))
    assert way_below_step(g, f) == chi_oracle(g, f)


@pytest.mark.parametrize("space", SPACE_NAMES)
@given(data=st.data())
def test_way_below_additive(space, data):
    g1, f1, _ = data.draw(triples(space))
    g2, f2, _ = data.draw(triples(space))
    g1, g2 = chi_approx(f1, 2), meet_step(g2, chi_approx(f2, 1))
    assume_wb = way_below_step(g1, f1) and way_below_step(g2, f2)
    if assume_wb:
        assert way_below_step(add_step(g1, g2), add_step(f1, f2))


@pytest.mark.parametrize("space", SPACE_NAMES)
@given(data=st.data(), seed=st.integers(0, 10 ** 6))
def test_way_below_restricts(space, data, seed):
    _, f, _ = data.draw(triples(space))
    g = chi_approx(f, 1)
    assert way_below_step(g, f)
    Y = _random_closed(f.space, random.Random(seed))
    assert way_below_step(restrict(g, Y), restrict(f, Y))


@given(triples(M=NBAR2))
def test_cancellation(t):
    a, b, c = t
    b = meet_step(b, chi_approx(c, 1))
    if way_below_step(add_step(a, b), add_step(a, c)):
        assert way_below_step(b, c)


@pytest.mark.parametrize("space", SPACE_NAMES)
@given(data=st.data())
def test_compact_iff_finite_constant(space, data):
    f, _, _ = data.draw(triples(space))
    vals = set(f.layout.all_values())
    assert is_compact_step(f) == (len(vals) == 1 and INF not in vals)


@pytest.mark.parametrize("space", SPACE_NAMES)
@given(data=st.data())
def test_approximants_rapidly_increase_to_f(space, data):
    f, _, _ = data.draw(triples(space))
    gs = [chi_approx(f, k) for k in range(1, 7)]
    assert all(way_below_step(a, b) for a, b in zip(gs, gs[1:]))
    assert all(way_below_step(g, f) for g in gs)
    assert probe_sup_equals(gs, f)


@pytest.mark.parametrize("space", SPACE_NAMES)
@given(data=st.data(), seed=st.integers(0, 10 ** 6))
def test_glue_restrict_coherence(space, data, seed):
    f, h, _ = data.draw(triples(space))
    Y = _random_closed(f.space, random.Random(seed))
    g = meet_step(restrict(h, Y), restrict(f, Y))
    assert restrict(glue(f, g, Y), Y) == g


@given(triples())
def test_sum_is_cellwise(t):
    a, b, _ = t
    s = add_step(a, b)
    for k in range(17):
        p = F(k, 16)
        assert eval_at(s, p) == NBAR.add(eval_at(a, p), eval_at(b, p))


@pytest.mark.parametrize("space", SPACE_NAMES)
@given(data=st.data())
def test_format_round_trip(space, data):
    f, _, _ = data.draw(triples(space, NBAR2))
    assert parse_step(format_step(f), f.space, f.M) == f


def test_chi_search_agrees_with_decision_on_examples():
    f = step("[0,1/2]=0, (1/2,1]=1")
    assert chi_search(const(0), f) and way_below_step(const(0), f)
    assert chi_search(chi_approx(DIP, 2), DIP)


def test_lsc_semigroup_parses_and_samples():
    S = Lsc(I, NBAR)
    rng = random.Random(0)
    x = S.sample(rng)
    assert S.parse(S.format(x)) == x
    assert S.leq(S.zero(), x)
