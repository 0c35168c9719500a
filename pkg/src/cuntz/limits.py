"""Sequential limits of extended-natural stages and the order they induce.

C_p arises as the limit of N̄ → N̄ → ... with multiplication by n_{k+1}/n_k.  Every element
of the limit is the supremum of an increasing sequence of stage elements; this module
decides order and way-below between such sequences from stage comparisons, with false
answers certified by the normalised-value invariant.  It serves as an oracle that does not
consult the compact/soft case analysis used by ``uhf_leq``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor
from typing import Callable

import numpy as np

from .core import FALSE, TRUE, LimitPresentation, ThreeValued, limit_leq, unknown
from .morphisms import MatrixMap, PointwiseMatrix
from .lsc import Lsc, StepFunction, from_layout
from .scalars import INF, NBAR, Compact, Soft, Supernatural, uhf_leq, uhf_way_below
from .spaces import Space


def uhf_stage_system(p) -> LimitPresentation:
    """Stages N̄ with x at stage k standing for x / n_k."""
    p = Supernatural.of(p)

    def step(k):
        r = p.stage(k + 1) // p.stage(k)
        return lambda x: INF if x is INF else x * r

    def invariant(k, x):
        return INF if x is INF else Fraction(x, p.stage(k))

    return LimitPresentation(lambda k: NBAR, step, invariant, True, f"limit for C_{p}")


@dataclass(frozen=True)
class StageSequence:
    """An increasing sequence k ↦ term(k) ∈ stage k, with the supremum of its normalised
    values and whether some term attains it."""

    term: Callable[[int], int]
    sup: object
    attained: bool
    label: str = ""


def uhf_sequence(p, a) -> StageSequence:
    """The standard stage sequence with supremum a ∈ C_p."""
    p = Supernatural.of(p)
    if a is INF:
        return StageSequence(lambda k: p.stage(k) ** 2, INF, False, "inf")
    if isinstance(a, Compact):
        q = a.q
        return StageSequence(lambda k: floor(q * p.stage(k)), q, True, f"{q}")
    if isinstance(a, Soft):
        r = a.r
        return StageSequence(lambda k: ceil(r * p.stage(k)) - 1, r, False, f"soft {r}")
    raise TypeError(f"{a!r} is not a C_p value")


def _leq_certificate(A: StageSequence, B: StageSequence) -> bool:
    """Some term of A exceeds every term of B (by normalised value)."""
    if A.sup is INF:
        return B.sup is not INF
    if B.sup is INF:
        return False
    return A.sup > B.sup or (A.sup == B.sup and A.attained and not B.attained)


def _wb_certificate(A: StageSequence, B: StageSequence) -> bool:
    """No term of B dominates all of A."""
    if A.sup is INF:
        return True
    if B.sup is INF:
        return False
    return A.sup > B.sup or (A.sup == B.sup and not B.attained)


def seq_leq(L: LimitPresentation, A: StageSequence, B: StageSequence, depth: int = 8) -> ThreeValued:
    """sup A <= sup B: every a_k is eventually below some b_m (stage order after
    connecting); false needs a certificate."""
    found = all(any(limit_leq(L, A.term(k), k, B.term(m), m, depth).value for m in range(depth + 1))
                for k in range(depth + 1))
    if _leq_certificate(A, B):
        return FALSE
    return TRUE if found else unknown(depth)


def seq_way_below(L: LimitPresentation, A: StageSequence, B: StageSequence,
                  depth: int = 8) -> ThreeValued:
    """sup A << sup B: one b_m dominates every a_k and the supremum of A."""
    inv = L.invariant
    for m in range(depth + 1):
        bm = B.term(m)
        if A.sup is not INF and A.sup <= inv(m, bm) and all(
                limit_leq(L, A.term(k), k, bm, m, depth).value for k in range(depth + 1)):
            return TRUE
    if _wb_certificate(A, B):
        return FALSE
    return unknown(depth)


# ---------------------------------------------------------------- batch oracle

_BIG = np.int64(2) ** 62


@dataclass
class SequenceArrays:
    top: np.ndarray        # term at the last stage, in stage units
    sup: np.ndarray        # supremum in stage units, _BIG for infinity
    attained: np.ndarray


def sequence_arrays(p, values, depth: int) -> SequenceArrays:
    p = Supernatural.of(p)
    n = p.stage(depth)
    if n ** 2 >= _BIG:
        raise OverflowError("depth too large for 64-bit stage arithmetic")
    top, sup, att = [], [], []
    for a in values:
        s = uhf_sequence(p, a)
        top.append(s.term(depth))
        if s.sup is INF:
            sup.append(_BIG)
        else:
            v = s.sup * n
            if v.denominator != 1:
                raise ValueError(f"depth {depth} does not resolve {a!r}")
            sup.append(int(v))
        att.append(s.attained)
    return SequenceArrays(np.array(top, dtype=np.int64), np.array(sup, dtype=np.int64),
                          np.array(att, dtype=bool))


def batch_limit_tables(S: SequenceArrays) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Pairwise (leq, leq_known, wb, wb_known) over all values.

    Terms increase with the stage, so "every a_k below some b_m" with k, m up to the depth
    reduces to comparing last-stage terms."""
    ta, tb = S.top[:, None], S.top[None, :]
    sa, sb = S.sup[:, None], S.sup[None, :]
    aa, ab = S.attained[:, None], S.attained[None, :]
    a_inf, b_inf = sa == _BIG, sb == _BIG
    found_leq = ta <= tb
    cert_leq = np.where(a_inf, ~b_inf, ~b_inf & ((sa > sb) | ((sa == sb) & aa & ~ab)))
    leq = found_leq & ~cert_leq
    leq_known = found_leq | cert_leq
    found_wb = ~a_inf & (sa <= tb)
    cert_wb = a_inf | (~b_inf & ((sa > sb) | ((sa == sb) & ~ab)))
    wb = found_wb & ~cert_wb
    wb_known = found_wb | cert_wb
    return leq, leq_known, wb, wb_known


def uhf_value_grid(max_numerator: int = 64, den_exponents=((2, 6), (3, 6))) -> list:
    """Compact and soft values n/d with d dividing the given prime powers and n <= bound,
    plus infinity."""
    dens = [1]
    for prime, e in den_exponents:
        dens = [d * prime ** i for d in dens for i in range(e + 1)]
    qs = sorted({Fraction(n, d) for d in dens for n in range(max_numerator + 1)})
    return [Compact(q) for q in qs] + [Soft(q) for q in qs if q > 0] + [INF]


@dataclass
class TableReport:
    values: int
    pairs: int
    leq_disagreements: list = field(default_factory=list)
    wb_disagreements: list = field(default_factory=list)
    unknown: int = 0
    seconds: float = 0.0

    @property
    def ok(self):
        return not (self.leq_disagreements or self.wb_disagreements or self.unknown)

    def summary(self):
        return (f"{self.values} values, {self.pairs} pairs, {len(self.leq_disagreements)} leq and "
                f"{len(self.wb_disagreements)} way-below disagreements, {self.unknown} unknown, "
                f"{self.seconds:.1f}s")


def uhf_table_agreement(p="2^inf*3^inf", values=None, depth: int = 8) -> TableReport:
    """Compare uhf_leq / uhf_way_below with the limit oracle on every ordered pair."""
    t0 = time.perf_counter()
    p = Supernatural.of(p)
    values = uhf_value_grid() if values is None else list(values)
    S = sequence_arrays(p, values, depth)
    leq, leq_known, wb, wb_known = batch_limit_tables(S)
    rep = TableReport(len(values), len(values) ** 2)
    rep.unknown = int((~leq_known).sum() + (~wb_known).sum())
    for i, a in enumerate(values):
        row_l, row_w = leq[i].tolist(), wb[i].tolist()
        for j, b in enumerate(values):
            if uhf_leq(p, a, b) != row_l[j]:
                rep.leq_disagreements.append((a, b))
            if uhf_way_below(p, a, b) != row_w[j]:
                rep.wb_disagreements.append((a, b))
    rep.seconds = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------- step functions into the limit


def _dyadic_term(a, k: int) -> int:
    """Stage-k term of the standard sequence for a ∈ C_{2^∞}; infinity is the image of the
    stage element ∞, which keeps the term map monotone at every stage."""
    n = 2 ** k
    if a is INF:
        return INF
    if isinstance(a, Compact):
        return floor(a.q * n)
    return ceil(a.r * n) - 1


def _value_sup(a):
    if a is INF:
        return INF, False
    if isinstance(a, Compact):
        return a.q, True
    return a.r, False


def step_stage_system(space: Space | None = None) -> LimitPresentation:
    """Lsc(X, N̄) with pointwise doubling as connecting maps (order embeddings)."""
    space = space or Space.interval()
    S = Lsc(space, NBAR)
    double = PointwiseMatrix(MatrixMap(((2,),), NBAR, NBAR), space)
    return LimitPresentation(lambda k: S, lambda k: double.apply, None, True,
                             f"limit of {S.describe()} under doubling")


def step_term(f: StepFunction, k: int) -> StepFunction:
    """Stage-k term of the sequence representing a C_{2^∞}-valued step function."""
    return from_layout(NBAR, f.layout.map(lambda a: _dyadic_term(a, k)))


def lsc_limit_leq(L: LimitPresentation, f: StepFunction, g: StepFunction,
                  depth: int = 12) -> ThreeValued:
    """Order of the limit elements represented by f and g, from stagewise comparisons.

    True when every term of f up to the depth sits below the last term of g; false when
    additionally some cell value of a term of f exceeds the supremum of g at that cell."""
    top = g.layout
    gD = step_term(g, depth)
    bad = None
    for k in range(depth + 1):
        fk = step_term(f, k)
        if not limit_leq(L, fk, k, gD, depth, depth).value:
            bad = (k, fk)
            break
    if bad is None:
        return TRUE
    k, fk = bad
    from .spaces import common_breaks

    br = common_breaks(fk.layout, top)
    F, G = fk.layout.refine(br), top.refine(br)
    for a, b in zip(F.all_values(), G.all_values()):
        sup, attained = _value_sup(b)
        if sup is INF:
            continue
        if a is INF:
            return FALSE
        v = Fraction(a, 2 ** k)
        if v > sup or (v == sup and not attained):
            return FALSE
    return unknown(depth)
