"""Pullback semigroups {(b, a) : phi(b) = pi(a)} with componentwise structure."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator

from .core import (DEFAULT_DEPTH, FALSE, TRUE, CuSemigroup, FormalSup, ThreeValued,
                   sup_increasing, unknown)
from .errors import (CannotMatchBase, ConstraintViolated, CuError, DescriptorMismatch,
                     ElementNotInSemigroup, ParseError)
from .lsc import Lsc, StepFunction, chi_approx, force_values, probe_sup_equals
from .morphisms import CuMorphism, Evaluation, Identity, Restriction


@dataclass(frozen=True)
class PullbackElement:
    left: object
    right: object

    def __repr__(self):
        return f"PullbackElement({self.left!r}, {self.right!r})"


@dataclass(frozen=True)
class Pullback(CuSemigroup):
    """left ⊕_base right along phi: left -> base and pi: right -> base."""

    left: CuSemigroup
    right: CuSemigroup
    base: CuSemigroup
    phi: CuMorphism
    pi: CuMorphism
    pi_surjective: bool = True
    name: str = "pullback"
    kind = "pullback"

    def __post_init__(self):
        if self.phi.source != self.left or self.phi.target != self.base:
            raise DescriptorMismatch("phi must map the left semigroup to the base")
        if self.pi.source != self.right or self.pi.target != self.base:
            raise DescriptorMismatch("pi must map the right semigroup to the base")

    def describe(self):
        return self.name

    def zero(self):
        return PullbackElement(self.left.zero(), self.right.zero())

    def check(self, x):
        if not isinstance(x, PullbackElement):
            raise ElementNotInSemigroup(f"{x!r} is not a pullback pair")
        b, a = self.left.check(x.left), self.right.check(x.right)
        cb, ca = self.phi.apply(b), self.pi.apply(a)
        if not self.base.equal(cb, ca):
            raise ConstraintViolated(
                f"constraint fails: phi(left) = {_fmt(self.base, cb)} but pi(right) = "
                f"{_fmt(self.base, ca)}", cb, ca)
        return PullbackElement(b, a)

    def leq(self, x, y):
        return self.left.leq(x.left, y.left) and self.right.leq(x.right, y.right)

    def add(self, x, y):
        return PullbackElement(self.left.add(x.left, y.left), self.right.add(x.right, y.right))

    def componentwise_way_below(self, x, y) -> bool:
        return self.left.way_below(x.left, y.left) and self.right.way_below(x.right, y.right)

    def way_below3(self, x, y, depth=DEFAULT_DEPTH):
        return pb_way_below(self, x, y, depth)

    def way_below(self, x, y):
        ans = pb_way_below(self, x, y)
        if ans.value is None:
            raise CuError(f"way-below undecided in {self.name} at depth {ans.depth}")
        return ans.value

    def approximant(self, x, k):
        return _approximant(self, x, k)

    def sample(self, rng: random.Random):
        b = self.left.sample(rng)
        return PullbackElement(b, match_right(self, self.right.sample(rng), self.phi.apply(b)))

    def sample_below(self, x, rng):
        return self.approximant(x, rng.randint(1, 3))

    def recognize_sup(self, terms):
        sl = self.left.recognize_sup([t.left for t in terms])
        sr = self.right.recognize_sup([t.right for t in terms])
        if sl is None or sr is None:
            return None
        try:
            return self.check(PullbackElement(sl, sr))
        except ElementNotInSemigroup:
            return None

    def format(self, x):
        return f"{self.left.format(x.left)} | {self.right.format(x.right)}"

    def parse(self, text):
        head, bar, tail = text.rpartition("|")
        if not bar:
            raise ParseError(f"expected 'left | right', got {text!r}")
        try:
            return self.check(PullbackElement(self.left.parse(head), self.right.parse(tail)))
        except ElementNotInSemigroup as exc:
            raise ParseError(str(exc)) from exc


def _fmt(S, x):
    try:
        return S.format(x)
    except Exception:
        return repr(x)


def make_pair(P: Pullback, b, a) -> PullbackElement:
    return P.check(PullbackElement(b, a))


def _same(P: Pullback, *xs):
    for x in xs:
        if not isinstance(x, PullbackElement):
            raise DescriptorMismatch(f"{x!r} is not an element of {P.name}")
        try:
            P.left.check(x.left)
            P.right.check(x.right)
        except ElementNotInSemigroup as exc:
            raise DescriptorMismatch(str(exc)) from exc


def pb_leq(P: Pullback, x, y) -> bool:
    _same(P, x, y)
    return P.leq(x, y)


def pb_add(P: Pullback, x, y) -> PullbackElement:
    _same(P, x, y)
    return P.check(P.add(x, y))


def pb_sup(P: Pullback, seq, depth: int = DEFAULT_DEPTH):
    return sup_increasing(P, seq, depth)


# ---------------------------------------------------------------- matching the base


def _point_values(pi: CuMorphism, c) -> dict | None:
    """Prescribed values at points of the right-hand space, when pi evaluates at points."""
    if isinstance(pi, Evaluation):
        return pi.split(c)
    if isinstance(pi, Restriction):
        sub, incl = pi.sub
        if sub.edges:
            return None
        return {img: c(v) for v, img in zip(sub.vertices, incl.vertex_images)}
    return None


def match_right(P: Pullback, a, c):
    """An element of the right semigroup with pi-image c, obtained by forcing the
    constrained point values of a."""
    if isinstance(P.pi, Identity):
        return c
    vals = _point_values(P.pi, c)
    if vals is None or not isinstance(a, StepFunction):
        raise CannotMatchBase(f"cannot prescribe base values through {P.pi.describe()}", c)
    return force_values(a, vals)


def _has_canonical_approximants(P: Pullback, x) -> bool:
    if isinstance(P.left, Pullback) and not _has_canonical_approximants(P.left, x.left):
        return False
    if isinstance(P.pi, Identity):
        return True
    return (P.pi_surjective and isinstance(x.right, StepFunction)
            and _point_values(P.pi, P.pi.apply(x.right)) is not None)


def _approximant(P: Pullback, x, n: int) -> PullbackElement:
    b_n = P.left.approximant(x.left, n)
    c_n = P.phi.apply(b_n)
    if isinstance(P.pi, Identity):
        z_n = c_n
    else:
        if not P.pi_surjective:
            raise CannotMatchBase("pi is not surjective", c_n)
        vals = _point_values(P.pi, c_n)
        if vals is None or not isinstance(x.right, StepFunction):
            raise CannotMatchBase(f"no canonical right approximant through {P.pi.describe()}", c_n)
        # base values on the constrained points, canonical approximation elsewhere
        z_n = chi_approx(x.right, n, overrides=vals)
    if not P.base.equal(P.pi.apply(z_n), c_n):
        raise CannotMatchBase(f"right approximant misses the base value at depth {n}", c_n)
    return PullbackElement(b_n, z_n)


def pb_canonical_approximants(P: Pullback, x) -> Iterator[PullbackElement]:
    x = P.check(x)
    return (_approximant(P, x, n) for n in itertools.count(1))


def pb_way_below(P: Pullback, x, y, depth: int = DEFAULT_DEPTH) -> ThreeValued:
    _same(P, x, y)
    if not P.leq(x, y):
        return FALSE
    if P.componentwise_way_below(x, y):
        return TRUE
    if not _has_canonical_approximants(P, y):
        return unknown(depth)
    # canonical approximants of y are componentwise way below y, so x <= y_n for some n
    # would already make x componentwise way below y
    return FALSE


def matches_sup(S: CuSemigroup, terms: list, x) -> bool:
    """Whether the increasing window ``terms`` has supremum x, read off per component
    and, for step functions, at probe points."""
    if isinstance(S, Pullback):
        return (matches_sup(S.left, [t.left for t in terms], x.left)
                and matches_sup(S.right, [t.right for t in terms], x.right))
    if isinstance(S, Lsc):
        return probe_sup_equals(terms, x)
    s = sup_increasing(S, terms, len(terms))
    return not isinstance(s, FormalSup) and s == x
