import random
from fractions import Fraction as F

import pytest

from cuntz.core import limit_leq
from cuntz.limits import (batch_limit_tables, lsc_limit_leq, seq_leq, seq_way_below,
                          sequence_arrays, step_stage_system, step_term, uhf_sequence,
                          uhf_stage_system, uhf_table_agreement, uhf_value_grid)
from cuntz.lsc import constant, leq_step, parse_step, random_step
from cuntz.scalars import INF, Compact, Soft, Supernatural, Uhf
from cuntz.spaces import Space

P6 = Supernatural.of("2^inf*3^inf")
SMALL = uhf_value_grid(max_numerator=6, den_exponents=((2, 2), (3, 1)))


def test_stage_sequences_increase_to_value():
    L = uhf_stage_system(P6)
    for a in (Compact(F(5, 6)), Soft(F(2, 3)), INF):
        s = uhf_sequence(P6, a)
        for k in range(6):
            assert limit_leq(L, s.term(k), k, s.term(k + 1), k + 1).value
        if a is not INF:
            assert s.sup == (a.q if isinstance(a, Compact) else a.r)


def test_batch_tables_match_pairwise_sequences():
    L = uhf_stage_system(P6)
    depth = 4
    S = sequence_arrays(P6, SMALL, depth)
    leq, leq_known, wb, wb_known = batch_limit_tables(S)
    assert leq_known.all() and wb_known.all()
    for i, a in enumerate(SMALL):
        A = uhf_sequence(P6, a)
        for j, b in enumerate(SMALL):
            B = uhf_sequence(P6, b)
            assert bool(leq[i, j]) is seq_leq(L, A, B, depth).value
            assert bool(wb[i, j]) is seq_way_below(L, A, B, depth).value


def test_table_agreement_small_grid():
    rep = uhf_table_agreement(values=SMALL, depth=4)
    assert rep.ok, rep.summary()
    assert rep.pairs == len(SMALL) ** 2


def test_grid_contents():
    g = uhf_value_grid(max_numerator=2, den_exponents=((2, 1),))
    assert g == [Compact(F(0)), Compact(F(1, 2)), Compact(F(1)), Compact(F(2)),
                 Soft(F(1, 2)), Soft(F(1)), Soft(F(2)), INF]


def test_depth_must_resolve_denominators():
    with pytest.raises(ValueError):
        sequence_arrays(P6, [Compact(F(1, 64))], 2)


class TestStepFunctionsInTheLimit:
    C2 = Uhf(Supernatural.of("2^inf"))
    L = step_stage_system()
    I = Space.interval()

    def parse(self, text):
        return parse_step(text, self.I, self.C2)

    def test_examples(self):
        f = self.parse("[0,1/2]=1/2, (1/2,1]=1")
        g = self.parse("const 1")
        assert lsc_limit_leq(self.L, f, g).value is True
        assert lsc_limit_leq(self.L, g, f).value is False

    def test_soft_below_compact(self):
        f = constant(self.I, self.C2, Soft(F(1, 2)))
        g = constant(self.I, self.C2, Compact(F(1, 2)))
        assert lsc_limit_leq(self.L, f, g).value is True
        assert lsc_limit_leq(self.L, g, f).value is False

    def test_terms_are_lower_semicontinuous(self):
        rng = random.Random(0)
        for _ in range(50):
            f = random_step(self.I, self.C2, rng)
            for k in range(5):
                step_term(f, k)

    def test_random_pairs_agree(self):
        rng = random.Random(1)
        for _ in range(60):
            f, g = random_step(self.I, self.C2, rng), random_step(self.I, self.C2, rng)
            assert lsc_limit_leq(self.L, f, g, depth=12).value is leq_step(f, g)
