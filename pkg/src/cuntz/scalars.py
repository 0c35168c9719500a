"""Scalar semigroups: extended naturals, scaled copies, direct sums and UHF semigroups."""
from __future__ import annotations

import functools
import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction

from .core import CuSemigroup
from .errors import (ElementNotInSemigroup, InvalidForSupernatural, KindMismatch,
                     NotASubsemigroup, ParseError)


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())

    def __hash__(self) -> int:
        return hash("cuntz.INF")


INF = _Infinity()


def _as_fraction(x) -> Fraction:
    if type(x) is Fraction:
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"not an exact rational: {x!r}")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not re.fullmatch(r"\d+(/\d+)?", text):
        raise ParseError(f"expected a non-negative rational 'k' or 'k/n', got {text!r}")
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _split_top(text: str) -> list[str]:
    parts, level, cur = [], 0, []
    for ch in text:
        if ch in "([":
            level += 1
        elif ch in ")]":
            level -= 1
        if ch == "," and level == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


class ScalarSemigroup(CuSemigroup):
    """Chains and finite products of chains: finite joins and meets exist."""

    def join(self, values):
        acc = self.zero()
        for v in values:
            acc = self.join2(acc, v)
        return acc

    def meet(self, values):
        values = list(values)
        if not values:
            raise ValueError("meet of no values")
        return functools.reduce(self.meet2, values)

    def join2(self, a, b):
        return b if self.leq(a, b) else a

    def meet2(self, a, b):
        return a if self.leq(a, b) else b

    def interpolate_way_below(self, a, b):
        """Some c with a << c << b, given a << b."""
        raise NotImplementedError

    def scale(self, x, n: int):
        """n-fold sum of x (0 times anything is zero)."""
        acc = self.zero()
        for _ in range(n):
            acc = self.add(acc, x)
        return acc

    def coerce(self, x, source: "ScalarSemigroup"):
        """Image of ``x`` from a subsemigroup ``source`` under the inclusion."""
        return self.check(x)

    def sample_below(self, a, rng: random.Random):
        return self.meet2(self.sample(rng), a)

    def grid(self, bound: int) -> list:
        """A finite list of elements used by exhaustive searches."""
        raise NotImplementedError


# ---------------------------------------------------------------- extended naturals


class ExtNat(ScalarSemigroup):
    """The extended natural numbers {0, 1, 2, ..., inf}."""

    kind = "nbar"

    def __eq__(self, other):
        return type(other) is ExtNat

    def __hash__(self):
        return hash("nbar")

    def __repr__(self):
        return "ExtNat()"

    def describe(self):
        return "N̄"

    def zero(self):
        return 0

    def check(self, x):
        if x is INF:
            return INF
        if isinstance(x, Fraction) and x.denominator == 1:
            x = int(x)
        if isinstance(x, int) and not isinstance(x, bool) and x >= 0:
            return x
        raise ElementNotInSemigroup(f"{x!r} is not an extended natural number")

    def leq(self, a, b):
        return b is INF or (a is not INF and a <= b)

    def add(self, a, b):
        return INF if a is INF or b is INF else a + b

    def way_below(self, a, b):
        return a is not INF and self.leq(a, b)

    def is_compact(self, a):
        return a is not INF

    def approximant(self, a, k):
        return k if a is INF else a

    def interpolate_way_below(self, a, b):
        return a

    def scale(self, x, n):
        if n == 0:
            return 0
        return INF if x is INF else n * x

    def recognize_sup(self, terms):
        half = terms[len(terms) // 2:]
        if all(t == terms[-1] for t in half):
            return terms[-1]
        return INF

    def sample(self, rng):
        return INF if rng.random() < 0.2 else rng.randint(0, 6)

    def grid(self, bound):
        return list(range(bound + 1)) + [INF]

    def format(self, x):
        return "inf" if x is INF else str(x)

    def parse(self, text):
        text = text.strip()
        if text in ("inf", "∞"):
            return INF
        q = parse_rational(text)
        if q.denominator != 1:
            raise ParseError(f"{text!r} is not an extended natural number")
        return int(q)


@dataclass(frozen=True, eq=True)
class Scaled(ScalarSemigroup):
    """(1/n)N̄: rationals with denominator dividing n, plus inf."""

    n: int
    kind = "scaled"

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"scale must be a positive integer, got {self.n!r}")

    def describe(self):
        return "N̄" if self.n == 1 else f"(1/{self.n})N̄"

    def zero(self):
        return Fraction(0)

    def check(self, x):
        if x is INF:
            return INF
        try:
            q = _as_fraction(x)
        except (TypeError, ValueError):
            raise ElementNotInSemigroup(f"{x!r} is not a rational") from None
        if q < 0 or self.n % q.denominator:
            raise ElementNotInSemigroup(f"{format_rational(q)} is not in {self.describe()}")
        return q

    def leq(self, a, b):
        return b is INF or (a is not INF and a <= b)

    def add(self, a, b):
        return INF if a is INF or b is INF else a + b

    def way_below(self, a, b):
        return a is not INF and self.leq(a, b)

    def is_compact(self, a):
        return a is not INF

    def approximant(self, a, k):
        return Fraction(k) if a is INF else a

    def interpolate_way_below(self, a, b):
        return a

    def scale(self, x, n):
        if n == 0:
            return Fraction(0)
        return INF if x is INF else n * x

    def coerce(self, x, source):
        if x is INF:
            return INF
        return self.check(Fraction(x))

    def recognize_sup(self, terms):
        half = terms[len(terms) // 2:]
        if all(t == terms[-1] for t in half):
            return terms[-1]
        return INF

    def sample(self, rng):
        if rng.random() < 0.2:
            return INF
        return Fraction(rng.randint(0, 3 * self.n), self.n)

    def grid(self, bound):
        return [Fraction(k, self.n) for k in range(bound * self.n + 1)] + [INF]

    def format(self, x):
        return "inf" if x is INF else format_rational(x)

    def parse(self, text):
        text = text.strip()
        if text in ("inf", "∞"):
            return INF
        return self.check(parse_rational(text))


# ---------------------------------------------------------------- supernatural numbers


_PRIME_CACHE: dict[int, bool] = {}


def _is_prime(n: int) -> bool:
    if n not in _PRIME_CACHE:
        _PRIME_CACHE[n] = n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))
    return _PRIME_CACHE[n]


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class Supernatural:
    """A formal product of prime powers with exponents in {1, 2, ..., inf}."""

    exponents: tuple[tuple[int, object], ...]

    def __post_init__(self):
        seen = set()
        for p, e in self.exponents:
            if not _is_prime(p):
                raise ValueError(f"{p} is not prime")
            if p in seen:
                raise ValueError(f"prime {p} repeated")
            seen.add(p)
            if not (e is INF or (isinstance(e, int) and e >= 1)):
                raise ValueError(f"bad exponent {e!r} for prime {p}")
        object.__setattr__(self, "exponents", tuple(sorted(self.exponents, key=lambda pe: pe[0])))

    @classmethod
    def of(cls, spec) -> "Supernatural":
        if isinstance(spec, Supernatural):
            return spec
        if isinstance(spec, int):
            if spec < 1:
                raise ValueError("supernatural numbers are positive")
            return cls(tuple(factorize(spec).items()))
        if isinstance(spec, dict):
            return cls(tuple((int(p), e) for p, e in spec.items()))
        if isinstance(spec, str):
            return parse_supernatural(spec)
        raise TypeError(f"cannot build a supernatural number from {spec!r}")

    @property
    def as_dict(self) -> dict:
        return dict(self.exponents)

    @property
    def infinite_type(self) -> bool:
        return any(e is INF for _, e in self.exponents)

    def divides(self, n: int) -> bool:
        """Whether the positive integer n divides this supernatural number."""
        return _divides(self, n)

    def _divides(self, n: int) -> bool:
        exps = self.as_dict
        for p, e in factorize(n).items():
            have = exps.get(p, 0)
            if have is not INF and e > have:
                return False
        return True

    def divides_super(self, other: "Supernatural") -> bool:
        """Whether self divides other."""
        theirs = other.as_dict
        for p, e in self.exponents:
            have = theirs.get(p, 0)
            if have is INF:
                continue
            if e is INF or e > have:
                return False
        return True

    def times(self, other: "Supernatural") -> "Supernatural":
        exps = self.as_dict
        for p, e in other.exponents:
            if p in exps:
                a = exps[p]
                exps[p] = INF if a is INF or e is INF else a + e
            else:
                exps[p] = e
        return Supernatural(tuple(exps.items()))

    def coprime(self, other: "Supernatural") -> bool:
        return not (set(self.as_dict) & set(other.as_dict))

    def stage(self, k: int) -> int:
        """n_k: the k-th term of the divisor chain n_0 = 1 | n_1 | ... exhausting the divisors."""
        n = 1
        for p, e in self.exponents:
            n *= p ** (k if e is INF else min(k, e))
        return n

    def __str__(self) -> str:
        if not self.exponents:
            return "1"
        return "*".join(f"{p}^inf" if e is INF else (str(p) if e == 1 else f"{p}^{e}")
                        for p, e in self.exponents)


@functools.lru_cache(maxsize=4096)
def _divides(p: Supernatural, n: int) -> bool:
    return p._divides(n)


def parse_supernatural(text: str) -> Supernatural:
    text = text.strip().replace(" ", "").replace("∞", "inf")
    if not text:
        raise ParseError("empty supernatural number")
    exps: dict[int, object] = {}
    for factor in text.split("*"):
        m = re.fullmatch(r"(\d+)(?:\^(inf|\d+))?", factor)
        if not m:
            raise ParseError(f"bad supernatural factor {factor!r}")
        base = int(m.group(1))
        if base < 1:
            raise ParseError("factors must be positive")
        e = m.group(2)
        power = INF if e == "inf" else int(e or 1)
        for p, k in factorize(base).items():
            mult = INF if power is INF else k * power
            if mult == 0:
                continue
            old = exps.get(p, 0)
            exps[p] = INF if old is INF or mult is INF else old + mult
    return Supernatural(tuple(exps.items()))


# ---------------------------------------------------------------- UHF semigroups


@dataclass(frozen=True, order=False)
class Compact:
    q: Fraction

    def __post_init__(self):
        object.__setattr__(self, "q", _as_fraction(self.q))
        if self.q < 0:
            raise ElementNotInSemigroup("compact values are non-negative")

    def __repr__(self):
        return f"Compact({format_rational(self.q)})"


@dataclass(frozen=True, order=False)
class Soft:
    r: Fraction

    def __post_init__(self):
        object.__setattr__(self, "r", _as_fraction(self.r))
        if self.r <= 0:
            raise ElementNotInSemigroup("soft values are strictly positive")

    def __repr__(self):
        return f"Soft({format_rational(self.r)})"


def _uhf_valid(p: Supernatural, a):
    if a is INF or isinstance(a, Soft):
        return a
    if isinstance(a, Compact):
        if not p.divides(a.q.denominator):
            raise InvalidForSupernatural(f"denominator {a.q.denominator} does not divide {p}")
        return a
    raise ElementNotInSemigroup(f"{a!r} is not a UHF value")


def uhf_leq(p: Supernatural, a, b) -> bool:
    a, b = _uhf_valid(p, a), _uhf_valid(p, b)
    if b is INF:
        return True
    if a is INF:
        return False
    x = a.q if isinstance(a, Compact) else a.r
    y = b.q if isinstance(b, Compact) else b.r
    if isinstance(a, Compact) and isinstance(b, Soft):
        return x < y
    return x <= y


def uhf_way_below(p: Supernatural, a, b) -> bool:
    a, b = _uhf_valid(p, a), _uhf_valid(p, b)
    if a is INF:
        return False
    if b is INF:
        return True
    x = a.q if isinstance(a, Compact) else a.r
    if isinstance(b, Compact):
        return uhf_leq(p, a, b)
    return x < b.r


def uhf_membership(sub: Supernatural, ambient: Supernatural, a) -> bool:
    if not sub.divides_super(ambient):
        raise NotASubsemigroup(f"{sub} does not divide {ambient}")
    a = _uhf_valid(ambient, a)
    if isinstance(a, Compact):
        return sub.divides(a.q.denominator)
    return True


def _uhf_num(a) -> Fraction:
    return a.q if isinstance(a, Compact) else a.r


@dataclass(frozen=True)
class Uhf(ScalarSemigroup):
    """C_p: compact rationals with denominator dividing p, soft positive rationals, inf."""

    p: Supernatural
    kind = "uhf"

    def __post_init__(self):
        object.__setattr__(self, "p", Supernatural.of(self.p))
        if not self.p.infinite_type:
            raise InvalidForSupernatural(
                f"{self.p} has no infinite exponent; the limit is a matrix algebra, use Scaled")

    def describe(self):
        return f"C_{self.p}"

    def zero(self):
        return Compact(0)

    def check(self, x):
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            x = Compact(x)
        try:
            return _uhf_valid(self.p, x)
        except InvalidForSupernatural as exc:
            raise ElementNotInSemigroup(str(exc)) from exc

    def leq(self, a, b):
        return uhf_leq(self.p, a, b)

    def way_below(self, a, b):
        return uhf_way_below(self.p, a, b)

    def is_compact(self, a):
        return isinstance(a, Compact)

    def add(self, a, b):
        if a is INF or b is INF:
            return INF
        s = _uhf_num(a) + _uhf_num(b)
        if isinstance(a, Compact) and isinstance(b, Compact):
            return Compact(s)
        return Soft(s)

    def scale(self, x, n):
        if n == 0:
            return Compact(0)
        if x is INF:
            return INF
        return Compact(n * x.q) if isinstance(x, Compact) else Soft(n * x.r)

    def approximant(self, a, k):
        if a is INF:
            return Compact(k)
        if isinstance(a, Soft):
            return Soft(a.r * (1 - Fraction(1, 2 ** k)))
        return a

    def interpolate_way_below(self, a, b):
        if isinstance(a, Compact):
            return a
        if isinstance(b, Compact):
            return b
        if isinstance(b, Soft):
            return Soft((a.r + b.r) / 2)
        return Compact(math.floor(a.r) + 1)

    def coerce(self, x, source):
        if isinstance(source, Uhf) and not source.p.divides_super(self.p):
            raise NotASubsemigroup(f"C_{source.p} is not contained in C_{self.p}")
        return self.check(x)

    def recognize_sup(self, terms):
        last = terms[-1]
        half = terms[len(terms) // 2:]
        if all(t == last for t in half):
            return last
        if all(isinstance(t, Compact) for t in half):
            qs = [t.q for t in half]
            if all(q2 - q1 >= 1 for q1, q2 in zip(qs, qs[1:])):
                return INF
        return None

    def sample(self, rng):
        u = rng.random()
        if u < 0.15:
            return INF
        den = self.p.stage(rng.randint(0, 2))
        q = Fraction(rng.randint(0 if u < 0.6 else 1, 3 * den), den)
        return Compact(q) if u < 0.6 else Soft(q)

    def grid(self, bound, stages: int = 1):
        den = self.p.stage(stages)
        qs = [Fraction(k, den) for k in range(bound * den + 1)]
        return [Compact(q) for q in qs] + [Soft(q) for q in qs if q > 0] + [INF]

    def format(self, x):
        if x is INF:
            return "inf"
        if isinstance(x, Soft):
            return f"soft {format_rational(x.r)}"
        return format_rational(x.q)

    def parse(self, text):
        text = text.strip()
        if text in ("inf", "∞"):
            return INF
        if text.startswith("soft"):
            try:
                return Soft(parse_rational(text[4:]))
            except ElementNotInSemigroup as exc:
                raise ParseError(str(exc)) from exc
        try:
            return self.check(Compact(parse_rational(text)))
        except ElementNotInSemigroup as exc:
            raise ParseError(str(exc)) from exc


# ---------------------------------------------------------------- direct sums


@dataclass(frozen=True)
class DirectSum(ScalarSemigroup):
    """Finite direct sum with componentwise order, addition and way-below."""

    components: tuple[ScalarSemigroup, ...]
    kind = "sum"

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise ValueError("a direct sum needs at least one summand")

    @property
    def arity(self) -> int:
        return len(self.components)

    def describe(self):
        first = self.components[0]
        if all(c == first for c in self.components):
            return f"{first.describe()}^{self.arity}"
        return " ⊕ ".join(c.describe() for c in self.components)

    def zero(self):
        return tuple(c.zero() for c in self.components)

    def check(self, x):
        if not isinstance(x, (tuple, list)) or len(x) != self.arity:
            raise ElementNotInSemigroup(f"{x!r} is not a {self.arity}-tuple")
        return tuple(c.check(v) for c, v in zip(self.components, x))

    def leq(self, a, b):
        return all(c.leq(x, y) for c, x, y in zip(self.components, a, b))

    def add(self, a, b):
        return tuple(c.add(x, y) for c, x, y in zip(self.components, a, b))

    def way_below(self, a, b):
        return all(c.way_below(x, y) for c, x, y in zip(self.components, a, b))

    def is_compact(self, a):
        return all(c.is_compact(x) for c, x in zip(self.components, a))

    def approximant(self, a, k):
        return tuple(c.approximant(x, k) for c, x in zip(self.components, a))

    def join2(self, a, b):
        return tuple(c.join2(x, y) for c, x, y in zip(self.components, a, b))

    def meet2(self, a, b):
        return tuple(c.meet2(x, y) for c, x, y in zip(self.components, a, b))

    def interpolate_way_below(self, a, b):
        return tuple(c.interpolate_way_below(x, y) for c, x, y in zip(self.components, a, b))

    def scale(self, x, n):
        return tuple(c.scale(v, n) for c, v in zip(self.components, x))

    def coerce(self, x, source):
        if isinstance(source, DirectSum):
            return tuple(c.coerce(v, s) for c, v, s in zip(self.components, x, source.components))
        return self.check(x)

    def recognize_sup(self, terms):
        out = []
        for i, c in enumerate(self.components):
            s = c.recognize_sup([t[i] for t in terms])
            if s is None:
                return None
            out.append(s)
        return tuple(out)

    def sample(self, rng):
        return tuple(c.sample(rng) for c in self.components)

    def sample_below(self, a, rng):
        return tuple(c.sample_below(x, rng) for c, x in zip(self.components, a))

    def grid(self, bound):
        import itertools

        return [tuple(v) for v in itertools.product(*(c.grid(bound) for c in self.components))]

    def format(self, x):
        return "(" + ",".join(c.format(v) for c, v in zip(self.components, x)) + ")"

    def parse(self, text):
        text = text.strip()
        if not (text.startswith("(") and text.endswith(")")):
            raise ParseError(f"expected a tuple '(a,b,...)', got {text!r}")
        parts = _split_top(text[1:-1])
        if len(parts) != self.arity:
            raise ParseError(f"expected {self.arity} components, got {len(parts)}")
        return tuple(c.parse(p) for c, p in zip(self.components, parts))


def product(M: ScalarSemigroup, n: int) -> ScalarSemigroup:
    """M^n; M^1 is M itself."""
    return M if n == 1 else DirectSum((M,) * n)


NBAR = ExtNat()


def interpolate(S: ScalarSemigroup, lowers, uppers):
    """Some c with l <= c for every lower and c << u for every upper, or None."""
    try:
        lowers = [S.check(v) for v in lowers]
        uppers = [S.check(v) for v in uppers]
    except ElementNotInSemigroup as exc:
        raise KindMismatch(f"value outside {S.describe()}: {exc}") from exc
    c = S.join(lowers)
    if all(S.way_below(c, u) for u in uppers):
        return c
    return None


def scalar_from_name(name: str) -> ScalarSemigroup:
    """Parse a scalar semigroup name: nbar, nbar^3, 1/6, C_2^inf, uhf:2^inf*3^inf, nbar+1/2."""
    name = name.strip().replace(" ", "")
    if "+" in name:
        return DirectSum(tuple(scalar_from_name(part) for part in name.split("+")))
    m = re.fullmatch(r"(.+?)\^(\d+)", name)
    if m and not m.group(1).lower().startswith(("c_", "uhf")):
        return product(scalar_from_name(m.group(1)), int(m.group(2)))
    low = name.lower()
    if low in ("nbar", "n̄", "n"):
        return NBAR
    m = re.fullmatch(r"\(?1/(\d+)\)?(?:nbar)?", low)
    if m:
        n = int(m.group(1))
        return NBAR if n == 1 else Scaled(n)
    m = re.fullmatch(r"(?:c_|uhf:)(.+)", low)
    if m:
        p = parse_supernatural(m.group(1))
        if not p.infinite_type:
            # C_2 is shorthand for the UHF algebra of type 2^inf
            p = Supernatural(tuple((q, INF) for q, _ in p.exponents))
        return Uhf(p)
    raise ParseError(f"unknown scalar semigroup {name!r}")
