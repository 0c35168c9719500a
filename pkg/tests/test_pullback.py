import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cuntz.catalog import dimension_drop, nccw1
from cuntz.core import check_cu_axioms
from cuntz.errors import ConstraintViolated, DescriptorMismatch
from cuntz.lsc import constant, make_step
from cuntz.pullback import (Pullback, make_pair, matches_sup, pb_add,
                            pb_canonical_approximants, pb_leq, pb_sup, pb_way_below)
from cuntz.scalars import INF, NBAR
from cuntz.spaces import Space

from fractions import Fraction as F

I = Space.interval()
NCCW = nccw1(1, 1, ((1,), (1,)))
ZDD = dimension_drop(2, 3)
P = NCCW.semigroup


def pair(b, f):
    return make_pair(P, b, constant(I, NBAR, f) if not hasattr(f, "layout") else f)


class TestConstruction:
    def test_constraint_holds(self):
        x = pair(2, 2)
        assert x.left == 2

    def test_constraint_fails(self):
        f = make_step(I, NBAR, [("e", F(0), F(1, 2), True, True, 2), ("e", F(1, 2), F(1), False, True, 3)])
        with pytest.raises(ConstraintViolated):
            make_pair(P, 2, f)

    def test_zero(self):
        assert P.check(P.zero()) == P.zero()

    def test_mismatched_morphisms(self):
        with pytest.raises(DescriptorMismatch):
            Pullback(P.left, P.right, P.base, P.pi, P.phi)


class TestOrder:
    def test_examples(self):
        assert pb_leq(P, pair(2, 2), pair(3, 3))
        assert not pb_leq(P, pair(3, 3), pair(2, 2))
        x = pair(5, 5)
        assert pb_leq(P, x, x)

    def test_rejects_foreign(self):
        with pytest.raises(DescriptorMismatch):
            pb_leq(P, pair(1, 1), 1)


class TestApproximants:
    def test_compact_in_dimension_drop(self):
        x = ZDD.parse("const 1")
        xs = list(itertools.islice(pb_canonical_approximants(ZDD.semigroup, x), 4))
        assert all(t == x for t in xs)

    def test_infinity(self):
        xs = list(itertools.islice(pb_canonical_approximants(P, pair(INF, INF)), 4))
        assert xs == [pair(n, n) for n in (1, 2, 3, 4)]
        # the constraint is satisfied exactly by each approximant
        assert all(P.check(t) == t for t in xs)

    def test_zero(self):
        xs = list(itertools.islice(pb_canonical_approximants(P, P.zero()), 3))
        assert xs == [P.zero()] * 3


class TestWayBelow:
    def test_examples(self):
        assert pb_way_below(P, pair(2, 2), pair(INF, INF)).value is True
        assert pb_way_below(P, pair(INF, INF), pair(INF, INF)).value is False
        assert pb_way_below(P, pair(1, 1), pair(1, 1)).value is True

    def test_componentwise_never_contradicted(self):
        rng = random.Random(3)
        for _ in range(200):
            x, y = P.sample(rng), P.sample(rng)
            if P.componentwise_way_below(x, y):
                assert pb_way_below(P, x, y).value is True


class TestAlgebra:
    def test_sum(self):
        assert pb_add(P, pair(1, 1), pair(1, 1)) == pair(2, 2)
        x = pair(3, 3)
        assert pb_add(P, x, P.zero()) == x

    def test_sup(self):
        assert pb_sup(P, lambda n: pair(n, n)) == pair(INF, INF)

    def test_parse_format(self):
        x = NCCW.parse("2 | const 2")
        assert NCCW.format(x) == "2 | const 2"
        assert NCCW.parse(NCCW.format(x)) == x


@pytest.mark.parametrize("desc", [NCCW, ZDD], ids=["nccw", "zdd23"])
@given(seed=st.integers(0, 10 ** 6))
def test_constraint_preserved(desc, seed):
    S = desc.semigroup
    rng = random.Random(seed)
    x, y = S.sample(rng), S.sample(rng)
    assert S.check(S.add(x, y)) == S.add(x, y)
    for t in itertools.islice(pb_canonical_approximants(S, x), 3):
        assert S.check(t) == t


@pytest.mark.parametrize("desc", [NCCW, ZDD], ids=["nccw", "zdd23"])
@given(seed=st.integers(0, 10 ** 6))
def test_approximants_rapid_with_sup(desc, seed):
    S = desc.semigroup
    x = S.sample(random.Random(seed))
    xs = list(itertools.islice(pb_canonical_approximants(S, x), 10))
    assert all(pb_way_below(S, a, b).value is True for a, b in zip(xs, xs[1:]))
    assert matches_sup(S, xs, x)


@pytest.mark.parametrize("desc", [NCCW, ZDD], ids=["nccw", "zdd23"])
def test_axioms(desc):
    assert check_cu_axioms(desc.semigroup, trials=100, seed=0).ok
