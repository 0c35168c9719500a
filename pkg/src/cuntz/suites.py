"""Seeded verification suites, one per acceptance property, runnable from the CLI."""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .catalog import compact_elements, enumerate_step_functions, graph_iso_check, resolve
from .core import check_cu_axioms
from .errors import PreconditionViolated
from .limits import lsc_limit_leq, step_stage_system, uhf_table_agreement
from .lsc import (StepFunction, add_step, chi_approx, constant, directed_join, is_compact_step, leq_step,
                  meet_step, random_step, restrict, way_below_step)
from .pullback import matches_sup, pb_canonical_approximants, pb_way_below
from .scalars import INF, NBAR, DirectSum, Supernatural, Uhf, product
from .spaces import CellSet, Layout, Space


@dataclass
class SuiteResult:
    name: str
    ok: bool
    detail: str
    seconds: float = 0.0
    counterexamples: list = field(default_factory=list)

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}: {self.detail} ({self.seconds:.1f}s)"


def _timed(name: str, fn: Callable[[], tuple[bool, str, list]]) -> SuiteResult:
    t0 = time.perf_counter()
    ok, detail, bad = fn()
    return SuiteResult(name, ok, detail, time.perf_counter() - t0, bad[:10])


FINITE_VALUES = [0, 1, 2, 3, 4, 5, INF]


def _value_pool(M, rng, values):
    if isinstance(M, DirectSum):
        return [tuple(rng.choice(values) for _ in M.components) for _ in range(6)]
    return list(values)


def _mixed_pair(space, M, rng, values, max_breaks=4):
    """A pair (g, f) drawn from a mix that makes both answers of g << f common.  Values stay
    in ``values`` and each edge keeps at most ``max_breaks`` breakpoints."""
    while True:
        g, f = _draw_pair(space, M, rng, values, max_breaks)
        if _breaks_ok(g, max_breaks) and _breaks_ok(f, max_breaks):
            return g, f


def _draw_pair(space, M, rng, values, max_breaks):
    mode = rng.randrange(4)
    if mode < 2:
        f = random_step(space, M, rng, max_breaks, _value_pool(M, rng, values))
        g = random_step(space, M, rng, max_breaks, _value_pool(M, rng, values))
        if mode == 1:
            g = meet_step(g, f)
        return g, f
    # approximants add two breakpoints around each breakpoint and one at each end
    f = random_step(space, M, rng, max(0, (max_breaks - 2) // 2), _value_pool(M, rng, values))
    g = chi_approx(f, rng.randint(1, 4))
    if mode == 3:
        c = rng.choice(_value_pool(M, rng, [v for v in values if v is not INF][:3]))
        g = meet_step(add_step(g, constant(space, M, c)), f)
    return g, f


def _breaks_ok(f: StepFunction, limit: int) -> bool:
    return all(len(br) <= limit for br in f.layout.breaks)


# ---------------------------------------------------------------- suites


def axioms_suite(seed: int = 0, trials: int = 500) -> SuiteResult:
    names = ["nbar", "nbar3", "c2", "c6", "lsc-interval-nbar", "lsc-loop-nbar2", "zdd23"]

    def run():
        parts, bad = [], []
        for n in names:
            rep = check_cu_axioms(resolve(n).semigroup, trials=trials, seed=seed)
            parts.append(f"{n}={len(rep.violations)}")
            bad.extend(rep.violations)
        return not bad, f"{trials} trials each, violations " + " ".join(parts), bad

    return _timed("cu-axioms", run)


def chi_oracle(g: StepFunction, f: StepFunction, depth: int = 6) -> bool:
    """g lies below some member of the finite family built from canonical approximants of f
    and their directed joins."""
    family = [chi_approx(f, k) for k in range(1, depth + 1)]
    family += [directed_join(a, b, f) for a, b in zip(family, family[1:])]
    return any(leq_step(g, h) for h in family)


def chi_oracle_suite(seed: int = 0, pairs: int = 1000) -> SuiteResult:
    def run():
        rng = random.Random(seed)
        I = Space.interval()
        bad, agree, positives = [], 0, 0
        for i in range(pairs):
            M = NBAR if i % 2 == 0 else product(NBAR, 2)
            g, f = _mixed_pair(I, M, rng, FINITE_VALUES)
            if not (_breaks_ok(g, 4) and _breaks_ok(f, 4)):
                bad.append((str(g), str(f), "generator exceeded 4 breakpoints"))
                continue
            direct = way_below_step(g, f)
            try:
                oracle = chi_oracle(g, f)
            except PreconditionViolated as exc:
                bad.append((str(g), str(f), f"oracle precondition: {exc}"))
                continue
            positives += direct
            if direct == oracle:
                agree += 1
            else:
                bad.append((str(g), str(f), direct, oracle))
        return (agree == pairs,
                f"{agree}/{pairs} pairs agree ({positives} way-below, {pairs - positives} not)", bad)

    return _timed("chi-oracle", run)


def _random_closed(space: Space, rng: random.Random) -> CellSet:
    kind = rng.randrange(3)
    if kind == 0 or not space.edges:
        return CellSet.from_parts(space, vertices=[rng.choice(space.vertices)])
    edge = rng.choice(space.edges)[0]
    a = Fraction(rng.randint(0, 8), 8)
    b = Fraction(rng.randint(0, 8), 8)
    lo, hi = min(a, b), max(a, b)
    Y = CellSet.from_parts(space, segments=[(edge, lo, hi, True, True)])
    if kind == 2:
        Y = Y.union(CellSet.from_parts(space, vertices=[rng.choice(space.vertices)]))
    return Y


def wb_additivity_suite(seed: int = 0, instances: int = 1000, max_attempts: int = 20000) -> SuiteResult:
    def run():
        rng = random.Random(seed)
        spaces = [Space.interval(), Space.loop(), Space.theta()]
        bad = []
        add_premise = res_premise = attempts = 0
        while (add_premise < instances or res_premise < instances) and attempts < max_attempts:
            sp = spaces[attempts % 3]
            M = NBAR if attempts % 2 == 0 else product(NBAR, 2)
            attempts += 1
            g1, f1 = _mixed_pair(sp, M, rng, FINITE_VALUES, 6)
            g2, f2 = _mixed_pair(sp, M, rng, FINITE_VALUES, 6)
            wb1 = way_below_step(g1, f1)
            if wb1 and way_below_step(g2, f2):
                add_premise += 1
                if not way_below_step(add_step(g1, g2), add_step(f1, f2)):
                    bad.append(("additivity", str(g1), str(f1), str(g2), str(f2)))
            if wb1:
                res_premise += 1
                Y = _random_closed(sp, rng)
                if not way_below_step(restrict(g1, Y), restrict(f1, Y)):
                    bad.append(("restriction", str(g1), str(f1), str(Y)))
        return (not bad and add_premise >= instances and res_premise >= instances,
                f"additivity {add_premise} instances, restriction {res_premise} instances "
                f"({attempts} draws), {len(bad)} counterexamples", bad)

    return _timed("wb-additivity-restriction", run)


_CORNER_VALUES = [0, 1, 2, INF]
_QUARTERS = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))


def _below(values, rank, a, b):
    return values[:min(rank[a], rank[b]) + 1]


def compactness_suite(seed: int = 0) -> SuiteResult:
    """Exhaustive: on [0,1] through the canonical constructor, on the 2-edge cycle through
    full-grid layouts (every function with breakpoints among the quarters appears once)."""
    def run():
        bad = []
        n_int = n_comp = 0
        for f in enumerate_step_functions(Space.interval(), NBAR, _CORNER_VALUES, _QUARTERS):
            got = is_compact_step(f)
            vals = f.layout.all_values()
            expect = len(set(vals)) == 1 and vals[0] is not INF
            n_int += 1
            n_comp += got
            if got != expect:
                bad.append(str(f))
        vals = _CORNER_VALUES
        rank = {v: i for i, v in enumerate(vals)}
        pats = []
        for o in itertools.product(vals, repeat=4):
            for p in itertools.product(*[_below(vals, rank, o[i], o[i + 1]) for i in range(3)]):
                pats.append((o[0], p[0], o[1], p[1], o[2], p[2], o[3]))
        G = Space.cycle(2)
        brs = (_QUARTERS, _QUARTERS)
        n_graph = g_comp = 0
        for pa in pats:
            for pb in pats:
                for v0 in _below(vals, rank, pa[0], pb[6]):
                    for v1 in _below(vals, rank, pa[6], pb[0]):
                        f = StepFunction(NBAR, Layout(G, (v0, v1), brs, (pa, pb)))
                        got = is_compact_step(f)
                        n_graph += 1
                        if got:
                            g_comp += 1
                            allv = {v0, v1, *pa, *pb}
                            if len(allv) != 1 or INF in allv:
                                bad.append(str(f))
                        elif v0 == v1 and v0 is not INF and set(pa) == set(pb) == {v0}:
                            bad.append(str(f))
        return (not bad,
                f"[0,1]: {n_int} functions, {n_comp} compact; 2-edge cycle: {n_graph} functions, "
                f"{g_comp} compact; {len(bad)} mismatches", bad)

    return _timed("compactness", run)


def cancellation_suite(seed: int = 0, triples: int = 1000, max_attempts: int = 20000) -> SuiteResult:
    def run():
        rng = random.Random(seed)
        I = Space.interval()
        M = product(NBAR, 2)
        finite = [0, 1, 2, 3]
        bad, premise, attempts = [], 0, 0
        while premise < triples and attempts < max_attempts:
            attempts += 1
            pool = [(x, y) for x in finite for y in finite]
            a = (constant(I, M, rng.choice(pool)) if rng.random() < 0.5
                 else random_step(I, M, rng, 3, pool))
            b, c = _mixed_pair(I, M, rng, FINITE_VALUES, 3)
            if not way_below_step(add_step(a, b), add_step(a, c)):
                continue
            premise += 1
            if not way_below_step(b, c):
                bad.append((str(a), str(b), str(c)))
        return (premise >= triples and not bad,
                f"{premise} triples with a+b << a+c ({attempts} drawn), {len(bad)} counterexamples",
                bad)

    return _timed("cancellation", run)


def uhf_table_suite(seed: int = 0) -> SuiteResult:
    def run():
        rep = uhf_table_agreement()
        return (rep.ok and rep.seconds < 60, rep.summary(),
                rep.leq_disagreements + rep.wb_disagreements)

    return _timed("uhf-order-table", run)


def graph_iso_suite(seed: int = 0, samples: int = 200) -> SuiteResult:
    def run():
        parts, bad = [], []
        for sp in (Space.loop(), Space.theta(), Space.cycle(3)):
            for M in (NBAR, product(NBAR, 2)):
                rep = graph_iso_check(sp, M, trials=samples, seed=seed)
                parts.append(f"{sp.describe()}/{M.describe()}: {len(rep.violations)}")
                bad.extend(rep.violations)
        return not bad, f"{samples} samples each; violations " + "; ".join(parts), bad

    return _timed("graph-decomposition", run)


def pullback_approximants_suite(seed: int = 0, samples: int = 200, window: int = 10) -> SuiteResult:
    def run():
        bad, parts = [], []
        for name in ("zdd23", "nccw-11"):
            P = resolve(name).semigroup
            rng = random.Random(f"{seed}:{name}")
            fails = 0
            for _ in range(samples):
                x = P.sample(rng)
                terms = list(itertools.islice(pb_canonical_approximants(P, x), window))
                rapid = all(pb_way_below(P, s, t).value is True for s, t in zip(terms, terms[1:]))
                sup_ok = matches_sup(P, terms, x)
                if not (rapid and sup_ok):
                    fails += 1
                    bad.append((name, P.format(x), rapid, sup_ok))
            parts.append(f"{name}: {fails} failures")
        return not bad, f"{samples} elements each; " + ", ".join(parts), bad

    return _timed("pullback-approximants", run)


def continuity_suite(seed: int = 0, pairs: int = 500, depth: int = 12) -> SuiteResult:
    def run():
        rng = random.Random(seed)
        I = Space.interval()
        C2 = Uhf(Supernatural.of("2^inf"))
        L = step_stage_system(I)
        vals = C2.grid(3, stages=3)
        bad, trues = [], 0
        for i in range(pairs):
            f = random_step(I, C2, rng, 3, vals)
            h = random_step(I, C2, rng, 3, vals)
            g = (h, add_step(f, h), meet_step(f, h))[i % 3]
            direct = leq_step(f, g)
            limit = lsc_limit_leq(L, f, g, depth)
            trues += direct
            if limit.value is not direct:
                bad.append((str(f), str(g), direct, str(limit)))
        return (not bad, f"{pairs} pairs ({trues} below), {len(bad)} disagreements or unknowns",
                bad)

    return _timed("limit-continuity", run)


def zpq_compacts_suite(seed: int = 0, bound: int = 4) -> SuiteResult:
    def run():
        desc = resolve("zdd23")
        found = compact_elements(desc, bound)
        shown = sorted(str(f) for f in found)
        expected = sorted(f"const {k}" for k in range(bound + 1))
        return shown == expected, "compacts " + ", ".join(shown), [] if shown == expected else shown

    return _timed("zpq-compacts", run)


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "axioms": axioms_suite,
    "chi-oracle": chi_oracle_suite,
    "wb-additivity": wb_additivity_suite,
    "compactness": compactness_suite,
    "cancellation": cancellation_suite,
    "uhf-table": uhf_table_suite,
    "graph-iso": graph_iso_suite,
    "pullback-approximants": pullback_approximants_suite,
    "continuity": continuity_suite,
    "zpq-compacts": zpq_compacts_suite,
}
