"""Maps between supported semigroups that preserve zero, sums, order, suprema and way-below."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .core import CuSemigroup
from .errors import ElementNotInSemigroup, SpaceMismatch
from .lsc import Lsc, StepFunction, from_layout, precompose, restrict
from .scalars import DirectSum, ScalarSemigroup
from .spaces import CellMap, CellSet, subspace


class CuMorphism:
    source: CuSemigroup
    target: CuSemigroup

    def __call__(self, x):
        return self.apply(self.source.check(x))

    def apply(self, x):
        raise NotImplementedError

    def describe(self) -> str:
        return type(self).__name__


def _coords(M: ScalarSemigroup) -> list[ScalarSemigroup]:
    return list(M.components) if isinstance(M, DirectSum) else [M]


def _as_vector(M: ScalarSemigroup, x) -> tuple:
    return tuple(x) if isinstance(M, DirectSum) else (x,)


def _from_vector(M: ScalarSemigroup, v: tuple):
    return tuple(v) if isinstance(M, DirectSum) else v[0]


def _check_matrix(matrix, rows: int, cols: int) -> tuple[tuple[int, ...], ...]:
    A = tuple(tuple(row) for row in matrix)
    if len(A) != rows or any(len(r) != cols for r in A):
        raise ValueError(f"matrix must be {rows}x{cols}")
    for r in A:
        for a in r:
            if not isinstance(a, int) or isinstance(a, bool) or a < 0:
                raise ValueError("matrix entries must be non-negative integers")
    return A


@dataclass(frozen=True)
class MatrixMap(CuMorphism):
    """x ↦ A x between scalar semigroups (columns index source coordinates)."""

    matrix: tuple
    source: ScalarSemigroup
    target: ScalarSemigroup

    def __post_init__(self):
        rows, cols = len(_coords(self.target)), len(_coords(self.source))
        object.__setattr__(self, "matrix", _check_matrix(self.matrix, rows, cols))

    def apply(self, x):
        src, tgt = _coords(self.source), _coords(self.target)
        v = _as_vector(self.source, x)
        out = []
        for T, row in zip(tgt, self.matrix):
            acc = T.zero()
            for S, a, xj in zip(src, row, v):
                if a:
                    acc = T.add(acc, T.scale(T.coerce(xj, S), a))
            out.append(acc)
        return _from_vector(self.target, tuple(out))

    def describe(self):
        return f"matrix {list(map(list, self.matrix))}"


@dataclass(frozen=True)
class PointwiseMatrix(CuMorphism):
    """Apply a matrix map to every value of a step function."""

    inner: MatrixMap
    space: Any

    @property
    def source(self):
        return Lsc(self.space, self.inner.source)

    @property
    def target(self):
        return Lsc(self.space, self.inner.target)

    def apply(self, f: StepFunction):
        return from_layout(self.inner.target, f.layout.map(self.inner.apply))

    def describe(self):
        return f"pointwise {self.inner.describe()}"


@dataclass(frozen=True)
class Evaluation(CuMorphism):
    """f ↦ (f(p_1), ..., f(p_n)), flattening tuple values into one direct sum."""

    space: Any
    M: ScalarSemigroup
    points: tuple

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.space.point(p) for p in self.points))

    @property
    def source(self):
        return Lsc(self.space, self.M)

    @property
    def target(self):
        return DirectSum(tuple(_coords(self.M) * len(self.points)))

    def apply(self, f):
        out = []
        for p in self.points:
            out.extend(_as_vector(self.M, f(p)))
        return tuple(out)

    def split(self, c) -> dict:
        """Per evaluation point, the value of M carried by a target element."""
        width = len(_coords(self.M))
        return {p: _from_vector(self.M, tuple(c[i * width:(i + 1) * width]))
                for i, p in enumerate(self.points)}

    def describe(self):
        return "evaluation at " + ", ".join(self.space.format_point(p) for p in self.points)


@dataclass(frozen=True)
class Restriction(CuMorphism):
    space: Any
    M: ScalarSemigroup
    closed: CellSet

    @property
    def sub(self):
        return subspace(self.space, self.closed)

    @property
    def source(self):
        return Lsc(self.space, self.M)

    @property
    def target(self):
        return Lsc(self.sub[0], self.M)

    def apply(self, f):
        return restrict(f, self.sub)


@dataclass(frozen=True)
class Precomposition(CuMorphism):
    cellmap: CellMap
    M: ScalarSemigroup

    @property
    def source(self):
        return Lsc(self.cellmap.target, self.M)

    @property
    def target(self):
        return Lsc(self.cellmap.source, self.M)

    def apply(self, f):
        return precompose(f, self.cellmap)


@dataclass(frozen=True)
class Identity(CuMorphism):
    semigroup: CuSemigroup

    @property
    def source(self):
        return self.semigroup

    @property
    def target(self):
        return self.semigroup

    def apply(self, x):
        return x


@dataclass(frozen=True)
class Projection(CuMorphism):
    """Selected coordinates of a direct sum, or the right half of a pullback pair."""

    source: CuSemigroup
    indices: tuple | None = None

    @property
    def target(self):
        from .pullback import Pullback

        if isinstance(self.source, Pullback):
            return self.source.right
        comps = _coords(self.source)
        picked = tuple(comps[i] for i in self.indices)
        return picked[0] if len(picked) == 1 else DirectSum(picked)

    def apply(self, x):
        from .pullback import Pullback

        if isinstance(self.source, Pullback):
            return x.right
        v = tuple(x[i] for i in self.indices)
        return v[0] if len(v) == 1 else v


@dataclass(frozen=True)
class Composition(CuMorphism):
    """maps[0] first, then maps[1], and so on."""

    maps: tuple

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(self.maps))
        if not self.maps:
            raise ValueError("empty composition")
        for m1, m2 in zip(self.maps, self.maps[1:]):
            if m1.target != m2.source:
                raise SpaceMismatch(f"cannot compose {m1.describe()} with {m2.describe()}")

    @property
    def source(self):
        return self.maps[0].source

    @property
    def target(self):
        return self.maps[-1].target

    def apply(self, x):
        for m in self.maps:
            x = m.apply(x)
        return x

    def describe(self):
        return " then ".join(m.describe() for m in self.maps)


def scalar_inclusion(source: ScalarSemigroup, target: ScalarSemigroup) -> MatrixMap:
    n = len(_coords(source))
    if len(_coords(target)) != n:
        raise ElementNotInSemigroup("inclusion needs equal arity")
    return MatrixMap(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), source, target)
