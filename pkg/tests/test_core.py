import itertools
from fractions import Fraction as F

import pytest

from cuntz.core import (DEFAULT_DEPTH, FALSE, TRUE, FormalSup, LimitPresentation, ThreeValued,
                        add, canonical_approximants, check_cu_axioms, leq, limit_leq,
                        limit_way_below, sup_increasing, three, unknown, way_below)
from cuntz.errors import NotIncreasing, StageMismatch
from cuntz.limits import uhf_stage_system
from cuntz.lsc import Lsc, constant
from cuntz.scalars import INF, NBAR, Compact, Soft
from cuntz.spaces import Space

from strategies import C6, NBAR2

DOUBLING = uhf_stage_system("2^inf")


class TestThreeValued:
    def test_known_answers(self):
        assert bool(TRUE) and not bool(FALSE)
        assert str(TRUE) == "true" and str(FALSE) == "false"

    def test_unknown_refuses_to_collapse(self):
        u = unknown(7)
        assert not u.known
        assert str(u) == "unknown@7"
        with pytest.raises(ValueError):
            bool(u)

    def test_three(self):
        assert three(True) is TRUE
        assert three(unknown(3)) == ThreeValued(None, 3)

    def test_default_depth(self):
        assert DEFAULT_DEPTH == 16


class TestSups:
    def test_nbar(self):
        assert sup_increasing(NBAR, lambda k: k) is INF
        assert sup_increasing(NBAR, lambda k: 4) == 4

    def test_constant_functions_to_infinity(self):
        S = Lsc(Space.interval(), NBAR)
        s = sup_increasing(S, lambda k: constant(S.space, NBAR, k))
        assert s == constant(S.space, NBAR, INF)

    def test_not_increasing(self):
        with pytest.raises(NotIncreasing):
            sup_increasing(NBAR, lambda k: 100 - k)

    def test_unrecognised_sup_is_formal(self):
        s = sup_increasing(C6, lambda k: Soft(F(1) - F(1, k + 1)))
        assert isinstance(s, FormalSup)
        assert leq(C6, Soft(F(1, 2)), s).value is True
        # every term sits below Compact(1) but no finite search can certify the sup
        assert leq(C6, s, Compact(F(1))).value is None
        assert leq(C6, s, Soft(F(1, 2))).value is False

    def test_formal_sup_answers(self):
        s = FormalSup(NBAR, lambda k: k, 10)
        assert way_below(NBAR, 3, s).value is True
        assert leq(NBAR, s, 20).value is None
        assert leq(NBAR, s, 5).value is False
        t = add(NBAR, s, 1)
        assert t.term(3) == 4


class TestApproximants:
    def test_compact_is_stable(self):
        assert list(itertools.islice(canonical_approximants(NBAR, 5), 3)) == [5, 5, 5]

    def test_infinity(self):
        assert list(itertools.islice(canonical_approximants(NBAR, INF), 4)) == [1, 2, 3, 4]

    def test_rapidly_increasing_in_nbar2(self):
        xs = list(itertools.islice(canonical_approximants(NBAR2, (INF, 3)), 6))
        assert all(NBAR2.way_below(a, b) for a, b in zip(xs, xs[1:]))
        assert all(NBAR2.way_below(a, (INF, 3)) for a in xs)


class TestLimitOrder:
    def test_examples(self):
        assert limit_leq(DOUBLING, 1, 0, 2, 1) == TRUE
        assert limit_leq(DOUBLING, 3, 0, 2, 1) == FALSE
        assert limit_leq(DOUBLING, 5, 2, 5, 2) == TRUE

    def test_failure_by_definition_at_every_stage(self):
        # 3 * 2^(k-1) > 2 * 2^(k-1) at every common stage k
        for k in range(1, 12):
            assert DOUBLING.connect(3, 0, k) > DOUBLING.connect(2, 1, k)

    def test_compatible_with_connecting_maps(self):
        for x, i, j in itertools.product([0, 1, 5, INF], range(3), range(3)):
            if i <= j:
                assert limit_leq(DOUBLING, x, i, DOUBLING.connect(x, i, j), j) == TRUE

    def test_without_order_embeddings(self):
        L = LimitPresentation(lambda k: NBAR, lambda k: (lambda x: INF if x is INF else 2 * x))
        assert limit_leq(L, 1, 0, 2, 1, depth=4) == TRUE
        ans = limit_leq(L, 3, 0, 2, 1, depth=4)
        assert ans.value is not True

    def test_way_below(self):
        assert limit_way_below(DOUBLING, 1, 0, 2, 1) == TRUE
        assert limit_way_below(DOUBLING, INF, 0, INF, 0).value is not True

    def test_bad_stage(self):
        with pytest.raises(StageMismatch):
            limit_leq(DOUBLING, 1, -1, 1, 0)
        with pytest.raises(StageMismatch):
            DOUBLING.connect(1, 3, 1)


class TestAxiomHarness:
    def test_nbar(self):
        r = check_cu_axioms(NBAR, trials=200, seed=0)
        assert r.ok, r.violations[:3]
        assert sum(r.checks.values()) > 0
        assert "0 violations" in r.summary()

    def test_c6(self):
        assert check_cu_axioms(C6, trials=200, seed=1).ok

    def test_step_tier(self):
        assert check_cu_axioms(Lsc(Space.interval(), NBAR), trials=200, seed=2).ok

    def test_deterministic(self):
        a = check_cu_axioms(NBAR2, trials=50, seed=9)
        b = check_cu_axioms(NBAR2, trials=50, seed=9)
        assert a.checks == b.checks

    def test_detects_a_broken_semigroup(self):
        class Broken(type(NBAR)):
            def way_below(self, a, b):
                return self.leq(a, b)

        r = check_cu_axioms(Broken(), trials=100, seed=0)
        assert not r.ok

    def test_nbar_laws_exhaustively_on_small_grid(self):
        grid = list(range(7)) + [INF]
        for a, b, c in itertools.product(grid, repeat=3):
            if NBAR.leq(a, b) and NBAR.way_below(b, c):
                assert NBAR.way_below(a, c)
            if NBAR.way_below(a, b):
                assert NBAR.leq(a, b)
                assert NBAR.way_below(NBAR.add(a, c if NBAR.way_below(c, c) else 0),
                                      NBAR.add(b, c if NBAR.way_below(c, c) else 0))
