"""Abstract ordered-semigroup contract, three-valued answers, suprema and the axiom harness."""
from __future__ import annotations

import abc
import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator

from .errors import ElementNotInSemigroup, NotIncreasing, StageMismatch

DEFAULT_DEPTH = 16


@dataclass(frozen=True)
class ThreeValued:
    """True, False, or unknown after a bounded search of the given depth."""

    value: bool | None
    depth: int | None = None

    @property
    def known(self) -> bool:
        return self.value is not None

    def __bool__(self) -> bool:
        if self.value is None:
            raise ValueError(f"answer is unknown at depth {self.depth}")
        return self.value

    def __str__(self) -> str:
        if self.value is None:
            return f"unknown@{self.depth}"
        return "true" if self.value else "false"


TRUE = ThreeValued(True)
FALSE = ThreeValued(False)


def unknown(depth: int) -> ThreeValued:
    return ThreeValued(None, depth)


def three(flag) -> ThreeValued:
    if isinstance(flag, ThreeValued):
        return flag
    return TRUE if flag else FALSE


class CuSemigroup(abc.ABC):
    """A concrete ordered abelian monoid closed under increasing suprema.

    Elements are immutable canonical values; ``check`` normalizes user input and
    raises ``ElementNotInSemigroup`` for anything that does not belong.
    """

    kind: str = "abstract"

    @abc.abstractmethod
    def zero(self): ...

    @abc.abstractmethod
    def check(self, x): ...

    @abc.abstractmethod
    def leq(self, a, b) -> bool: ...

    @abc.abstractmethod
    def add(self, a, b): ...

    @abc.abstractmethod
    def way_below(self, a, b) -> bool: ...

    @abc.abstractmethod
    def approximant(self, a, k: int):
        """The k-th term (k >= 1) of the canonical rapidly increasing sequence for ``a``."""

    @abc.abstractmethod
    def sample(self, rng: random.Random): ...

    def contains(self, x) -> bool:
        try:
            self.check(x)
        except ElementNotInSemigroup:
            return False
        return True

    def equal(self, a, b) -> bool:
        return self.leq(a, b) and self.leq(b, a)

    def is_compact(self, a) -> bool:
        return self.way_below(a, a)

    def way_below3(self, a, b, depth: int = DEFAULT_DEPTH) -> "ThreeValued":
        """Way-below as a three-valued answer; tiers with bounded searches override this."""
        return three(self.way_below(a, b))

    def recognize_sup(self, terms: list):
        """Return the supremum of a finite increasing window if it can be read off, else None."""
        return None

    def format(self, x) -> str:
        return repr(x)

    def parse(self, text: str):
        raise NotImplementedError(f"{self.kind} has no text syntax")

    def describe(self) -> str:
        return self.kind


@dataclass(frozen=True, eq=False)
class FormalSup:
    """The supremum of a rapidly increasing sequence that has no finite normal form."""

    semigroup: CuSemigroup
    term: Callable[[int], Any]
    verified_depth: int
    rapid: bool = True
    label: str = "sup"

    def terms(self, depth: int) -> list:
        return [self.term(k) for k in range(1, depth + 1)]

    def __repr__(self) -> str:
        return f"FormalSup({self.label}, verified_depth={self.verified_depth})"


class _Memo:
    """Index access (from 1) into a sequence given as a callable or an iterable."""

    def __init__(self, seq):
        if callable(seq):
            self._fn = seq
            self._it = None
        else:
            self._fn = None
            self._it = iter(seq)
        self._cache: list = []

    def __call__(self, k: int):
        if self._fn is not None:
            return self._fn(k)
        while len(self._cache) < k:
            try:
                self._cache.append(next(self._it))
            except StopIteration:
                # a finite sequence is extended by its last term
                if not self._cache:
                    raise ValueError("empty sequence") from None
                self._cache.append(self._cache[-1])
        return self._cache[k - 1]


def _concrete(S: CuSemigroup, x):
    return x if isinstance(x, FormalSup) else S.check(x)


def leq(S: CuSemigroup, a, b, depth: int = DEFAULT_DEPTH) -> ThreeValued:
    a, b = _concrete(S, a), _concrete(S, b)
    fa, fb = isinstance(a, FormalSup), isinstance(b, FormalSup)
    if not fa and not fb:
        return three(S.leq(a, b))
    if fa and fb and a is b:
        return TRUE
    if fa and not fb:
        for k in range(1, depth + 1):
            if not S.leq(a.term(k), b):
                return FALSE
        return unknown(depth)
    if fb and not fa:
        for k in range(1, depth + 1):
            if S.leq(a, b.term(k)):
                return TRUE
        return unknown(depth)
    return unknown(depth)


def way_below(S: CuSemigroup, a, b, depth: int = DEFAULT_DEPTH) -> ThreeValued:
    a, b = _concrete(S, a), _concrete(S, b)
    fa, fb = isinstance(a, FormalSup), isinstance(b, FormalSup)
    if not fa and not fb:
        return S.way_below3(a, b, depth)
    if leq(S, a, b, depth).value is False:
        return FALSE
    if fb and not fa and b.rapid:
        # a <= b_m and b_m << b_{m+1} <= b
        for m in range(1, min(depth, b.verified_depth) + 1):
            if S.leq(a, b.term(m)):
                return TRUE
    return unknown(depth)


def add(S: CuSemigroup, a, b):
    a, b = _concrete(S, a), _concrete(S, b)
    if not isinstance(a, FormalSup) and not isinstance(b, FormalSup):
        return S.add(a, b)
    ta = a.term if isinstance(a, FormalSup) else (lambda k: a)
    tb = b.term if isinstance(b, FormalSup) else (lambda k: b)
    depths = [x.verified_depth for x in (a, b) if isinstance(x, FormalSup)]
    rapid = all(x.rapid for x in (a, b) if isinstance(x, FormalSup))
    return FormalSup(S, lambda k: S.add(ta(k), tb(k)), min(depths), rapid, "sum")


def sup_increasing(S: CuSemigroup, seq, depth: int = DEFAULT_DEPTH):
    """Supremum of an increasing sequence, probed on its first ``depth`` terms."""
    term = _Memo(seq)
    terms = [S.check(term(k)) for k in range(1, depth + 1)]
    for k in range(len(terms) - 1):
        if not S.leq(terms[k], terms[k + 1]):
            raise NotIncreasing(k + 1, terms[k], terms[k + 1])
    found = S.recognize_sup(terms)
    if found is not None:
        return found
    rapid = all(S.way_below(terms[k], terms[k + 1]) for k in range(len(terms) - 1))
    return FormalSup(S, term, depth, rapid)


def canonical_approximants(S: CuSemigroup, a) -> Iterator:
    if isinstance(a, FormalSup):
        return (a.term(k) for k in itertools.count(1))
    a = S.check(a)
    return (S.approximant(a, k) for k in itertools.count(1))


# ---------------------------------------------------------------- axiom harness


@dataclass(frozen=True)
class Violation:
    law: str
    trial: int
    witness: tuple

    def __str__(self) -> str:
        return f"{self.law} (trial {self.trial}): {self.witness!r}"


@dataclass
class AxiomReport:
    semigroup: str
    trials: int
    seed: int
    depth: int
    violations: list[Violation] = field(default_factory=list)
    checks: Counter = field(default_factory=Counter)

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        return (f"{self.semigroup}: {self.trials} trials, seed {self.seed}, "
                f"{sum(self.checks.values())} checks, {len(self.violations)} violations")


def _sample_below(S, a, rng):
    sampler = getattr(S, "sample_below", None)
    if sampler is not None:
        return sampler(a, rng)
    return S.sample(rng)


def check_cu_axioms(S: CuSemigroup, sampler: Callable[[random.Random], Any] | None = None,
                    trials: int = 200, seed: int = 0, depth: int = DEFAULT_DEPTH,
                    approx_depth: int = 6) -> AxiomReport:
    """Randomized law checks; every failure is recorded with its witnesses."""
    sample = sampler or S.sample
    report = AxiomReport(S.describe(), trials, seed, depth)

    def law(name, ok, trial, *witness):
        report.checks[name] += 1
        if not ok:
            report.violations.append(Violation(name, trial, witness))

    for trial in range(trials):
        rng = random.Random(f"{seed}:{trial}")
        a, b, c, d = (S.check(sample(rng)) for _ in range(4))
        z = S.zero()
        lab, lba, lbc = S.leq(a, b), S.leq(b, a), S.leq(b, c)
        law("order.reflexive", S.leq(a, a), trial, a)
        law("order.antisymmetric", not (lab and lba) or a == b, trial, a, b)
        law("order.transitive", not (lab and lbc) or S.leq(a, c), trial, a, b, c)
        law("zero.least", S.leq(z, a), trial, a)
        ab = S.add(a, b)
        law("add.commutative", ab == S.add(b, a), trial, a, b)
        law("add.associative", S.add(ab, c) == S.add(a, S.add(b, c)), trial, a, b, c)
        law("add.identity", S.add(a, z) == a, trial, a)
        law("add.monotone", not lab or S.leq(S.add(a, c), S.add(b, c)), trial, a, b, c)
        law("wb.zero", S.way_below(z, a), trial, a)

        # way-below pairs built from approximants so the implications are not vacuous
        j = rng.randint(1, approx_depth)
        a1, c1 = S.approximant(a, j), S.approximant(c, j)
        law("wb.approximant", S.way_below(a1, a), trial, a, j)
        for x, y in ((a1, a), (a, b), (b, a)):
            if S.way_below(x, y):
                law("wb.implies_leq", S.leq(x, y), trial, x, y)
                lo, hi = _sample_below(S, x, rng), S.add(y, d)
                if S.leq(lo, x):
                    law("wb.auxiliary", S.way_below(lo, hi), trial, lo, x, y, hi)
        if S.way_below(a1, a) and S.way_below(c1, c):
            law("wb.additive", S.way_below(S.add(a1, c1), S.add(a, c)), trial, a1, a, c1, c)
        if S.way_below(a, b) and S.way_below(c, d):
            law("wb.additive", S.way_below(S.add(a, c), S.add(b, d)), trial, a, b, c, d)

        terms = [S.approximant(a, k) for k in range(1, approx_depth + 1)]
        law("approx.below", all(S.leq(t, a) for t in terms), trial, a)
        law("approx.rapid", all(S.way_below(terms[k], terms[k + 1])
                                for k in range(len(terms) - 1)), trial, a)
        # sup of the approximants is a: anything way below a is caught by a later term
        for x in (_sample_below(S, a, rng), _sample_below(S, a, rng)):
            if S.way_below(x, a):
                law("approx.sup", any(S.leq(x, S.approximant(a, k)) for k in range(1, depth + 1)),
                    trial, x, a)
        s = sup_increasing(S, lambda k: S.approximant(a, k), depth)
        if not isinstance(s, FormalSup):
            law("sup.recognized", s == a, trial, a, s)
        s = sup_increasing(S, lambda k: S.add(S.approximant(a, k), S.approximant(b, k)), depth)
        if not isinstance(s, FormalSup):
            law("sup.additive", s == ab, trial, a, b, s)
        else:
            law("sup.additive", all(S.leq(t, ab) for t in s.terms(approx_depth)), trial, a, b)
    return report


# ---------------------------------------------------------------- inductive limits


@dataclass(frozen=True)
class LimitPresentation:
    """A sequential inductive system of semigroups.

    ``step(i)`` maps stage i into stage i+1.  ``invariant(i, x)`` is an optional
    monotone, map-compatible functional used to certify failures of the order.
    With ``order_embeddings`` set, all connecting maps reflect the order.
    """

    stage: Callable[[int], CuSemigroup]
    step: Callable[[int], Callable[[Any], Any]]
    invariant: Callable[[int, Any], Any] | None = None
    order_embeddings: bool = False
    name: str = "limit"

    def connect(self, x, i: int, j: int):
        if j < i:
            raise StageMismatch(f"cannot map stage {i} to earlier stage {j}")
        for k in range(i, j):
            x = self.step(k)(x)
        return x

    def element(self, x, i: int):
        if not isinstance(i, int) or i < 0:
            raise StageMismatch(f"bad stage index {i!r}")
        try:
            return self.stage(i).check(x)
        except ElementNotInSemigroup as exc:
            raise StageMismatch(f"{x!r} is not an element of stage {i}: {exc}") from exc


def _inv_exceeds(L: LimitPresentation, x, i, y, j) -> bool:
    if L.invariant is None:
        return False
    from .scalars import INF

    u, v = L.invariant(i, x), L.invariant(j, y)
    if v is INF:
        return False
    return u is INF or u > v


def limit_leq(L: LimitPresentation, x, i: int, y, j: int, depth: int = DEFAULT_DEPTH) -> ThreeValued:
    """Decide gamma_i(x) <= gamma_j(y) in the limit from stagewise data."""
    x, y = L.element(x, i), L.element(y, j)
    k0 = max(i, j)
    top = max(k0, depth)
    xs, ys = L.connect(x, i, k0), L.connect(y, j, k0)
    for k in range(k0, top + 1):
        if L.stage(k).leq(xs, ys):
            return TRUE
        if L.order_embeddings:
            return FALSE
        if k < top:
            xs, ys = L.step(k)(xs), L.step(k)(ys)
    if _inv_exceeds(L, x, i, y, j):
        return FALSE
    # every probed x' << x must become way below the image of y at some stage
    Si = L.stage(i)
    for m in range(1, depth + 1):
        xp = Si.approximant(x, m)
        xs, ys = L.connect(xp, i, k0), L.connect(y, j, k0)
        for k in range(k0, top + 1):
            if L.stage(k).way_below(xs, ys):
                break
            if k < top:
                xs, ys = L.step(k)(xs), L.step(k)(ys)
        else:
            return unknown(depth)
    return TRUE


def limit_way_below(L: LimitPresentation, x, i: int, y, j: int, depth: int = DEFAULT_DEPTH) -> ThreeValued:
    """Sufficient stagewise test for gamma_i(x) << gamma_j(y); False only when <= fails."""
    x, y = L.element(x, i), L.element(y, j)
    k0 = max(i, j)
    xs, ys = L.connect(x, i, k0), L.connect(y, j, k0)
    for k in range(k0, max(k0, depth) + 1):
        if L.stage(k).way_below(xs, ys):
            return TRUE
        xs, ys = L.step(k)(xs), L.step(k)(ys)
    if limit_leq(L, x, i, y, j, depth).value is False:
        return FALSE
    return unknown(depth)


def sample_pairs(items: Iterable, rng: random.Random, n: int) -> list[tuple]:
    pool = list(items)
    return [(rng.choice(pool), rng.choice(pool)) for _ in range(n)]
