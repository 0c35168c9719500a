"""Finite discrete spaces, the unit interval and finite graphs, with cell layouts over them.

A point is a vertex name or a pair ``(edge, t)`` with ``0 < t < 1``.  Every edge is a
copy of [0,1] running from its source vertex (t = 0) to its target vertex (t = 1).
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Callable, Iterator

from .errors import (BadBreakpoints, MapNotCellwiseAffine, NotClosedSubcomplex, NotOpen,
                     PointNotInSpace, SpaceMismatch)

Point = Any  # str | tuple[str, Fraction]


# ---------------------------------------------------------------- spaces


@dataclass(frozen=True)
class Space:
    kind: str
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, str], ...] = ()

    def __post_init__(self):
        if self.kind not in ("discrete", "interval", "graph"):
            raise ValueError(f"unknown space kind {self.kind!r}")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex names")
        names = [e[0] for e in self.edges]
        if len(set(names)) != len(names):
            raise ValueError("duplicate edge names")
        vs = set(self.vertices)
        for name, s, t in self.edges:
            if s not in vs or t not in vs:
                raise ValueError(f"edge {name} has an unknown endpoint")
        if self.kind == "discrete" and self.edges:
            raise ValueError("a discrete space has no edges")

    @staticmethod
    def interval() -> "Space":
        return Space("interval", ("0", "1"), (("e", "0", "1"),))

    @staticmethod
    def discrete(points) -> "Space":
        return Space("discrete", tuple(str(p) for p in points))

    @staticmethod
    def graph(vertices, edges) -> "Space":
        return Space("graph", tuple(vertices), tuple(tuple(e) for e in edges))

    @staticmethod
    def loop() -> "Space":
        return Space.graph(["v"], [("e", "v", "v")])

    @staticmethod
    def theta() -> "Space":
        return Space.graph(["u", "v"], [("e1", "u", "v"), ("e2", "u", "v"), ("e3", "u", "v")])

    @staticmethod
    def cycle(n: int) -> "Space":
        vs = [f"v{i}" for i in range(n)]
        return Space.graph(vs, [(f"e{i}", vs[i], vs[(i + 1) % n]) for i in range(n)])

    @staticmethod
    def path(n_edges: int) -> "Space":
        vs = [f"v{i}" for i in range(n_edges + 1)]
        return Space.graph(vs, [(f"e{i}", vs[i], vs[i + 1]) for i in range(n_edges)])

    @cached_property
    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def edge_index(self) -> dict[str, int]:
        return {e[0]: i for i, e in enumerate(self.edges)}

    @cached_property
    def incidence(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """For each vertex the incident edge ends as (edge index, end), end 0 = source."""
        inc: list[list[tuple[int, int]]] = [[] for _ in self.vertices]
        for k, (_, s, t) in enumerate(self.edges):
            inc[self.vertex_index[s]].append((k, 0))
            inc[self.vertex_index[t]].append((k, 1))
        return tuple(tuple(x) for x in inc)

    @property
    def dimension(self) -> int:
        return 1 if self.edges else 0

    @cached_property
    def connected(self) -> bool:
        if not self.vertices:
            return True
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        adj: dict[str, list[str]] = {v: [] for v in self.vertices}
        for _, s, t in self.edges:
            adj[s].append(t)
            adj[t].append(s)
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def point(self, p) -> Point:
        """Normalize a point; endpoints of edges become vertex names."""
        if isinstance(p, str):
            if p in self.vertex_index:
                return p
            if self.kind == "interval":
                try:
                    return self.point(Fraction(p))
                except (ValueError, ZeroDivisionError):
                    pass
            raise PointNotInSpace(f"no vertex named {p!r}")
        if isinstance(p, (int, Fraction)) and not isinstance(p, bool):
            if self.kind != "interval":
                raise PointNotInSpace(f"bare coordinate {p} needs an interval space")
            p = ("e", p)
        if isinstance(p, tuple) and len(p) == 2 and p[0] in self.edge_index:
            t = Fraction(p[1])
            if not 0 <= t <= 1:
                raise PointNotInSpace(f"coordinate {t} outside [0,1]")
            _, s, tgt = self.edges[self.edge_index[p[0]]]
            if t == 0:
                return s
            if t == 1:
                return tgt
            return (p[0], t)
        raise PointNotInSpace(f"{p!r} is not a point of this space")

    def format_point(self, p: Point) -> str:
        if isinstance(p, str):
            return p
        e, t = p
        return str(t) if self.kind == "interval" else f"{e}@{t}"

    def describe(self) -> str:
        if self.kind == "interval":
            return "[0,1]"
        if self.kind == "discrete":
            return "{" + ",".join(self.vertices) + "}"
        es = ",".join(f"{n}:{s}->{t}" for n, s, t in self.edges)
        return f"graph({','.join(self.vertices)}; {es})"


# ---------------------------------------------------------------- layouts


def _check_breaks(breaks) -> tuple[Fraction, ...]:
    out = tuple(Fraction(t) for t in breaks)
    for a, b in zip(out, out[1:]):
        if not a < b:
            raise BadBreakpoints(f"breakpoints not strictly increasing: {a}, {b}")
    if out and not (0 < out[0] and out[-1] < 1):
        raise BadBreakpoints("breakpoints must lie strictly inside (0,1)")
    return out


_VALID_BREAKS: dict[int, tuple] = {}


def _validate_breaks(br: tuple) -> None:
    # memoized by identity; the stored reference keeps the id from being reused
    if not (0 < br[0] and br[-1] < 1 and all(a < b for a, b in zip(br, br[1:]))):
        raise BadBreakpoints(f"breakpoints must increase strictly inside (0,1): {br}")
    if len(_VALID_BREAKS) > 4096:
        _VALID_BREAKS.clear()
    _VALID_BREAKS[id(br)] = br


@dataclass(frozen=True)
class Layout:
    """A value for every cell: vertices, and per edge alternating open/point cells.

    For an edge with breakpoints t_1 < ... < t_m, ``cells`` has 2m+1 entries; entry
    2i is the open cell (t_i, t_{i+1}) with t_0 = 0, t_{m+1} = 1, and entry 2i+1 is
    the point t_{i+1}.
    """

    space: Space
    vertex_values: tuple
    breaks: tuple[tuple[Fraction, ...], ...]
    cells: tuple[tuple, ...]

    def __post_init__(self):
        sp = self.space
        if len(self.vertex_values) != len(sp.vertices):
            raise BadBreakpoints("one value per vertex is required")
        if len(self.breaks) != len(sp.edges) or len(self.cells) != len(sp.edges):
            raise BadBreakpoints("one cell list per edge is required")
        for br, cs in zip(self.breaks, self.cells):
            if len(cs) != 2 * len(br) + 1:
                raise BadBreakpoints("cell list does not match breakpoints")
            if br and _VALID_BREAKS.get(id(br)) is not br:
                _validate_breaks(br)

    @staticmethod
    def constant(space: Space, value) -> "Layout":
        return Layout(space, (value,) * len(space.vertices), ((),) * len(space.edges),
                      ((value,),) * len(space.edges))

    def edge_cell(self, k: int, t: Fraction) -> int:
        br = self.breaks[k]
        i = bisect.bisect_left(br, t)
        if i < len(br) and br[i] == t:
            return 2 * i + 1
        return 2 * i

    def value_at(self, p: Point):
        p = self.space.point(p)
        if isinstance(p, str):
            return self.vertex_values[self.space.vertex_index[p]]
        k = self.space.edge_index[p[0]]
        return self.cells[k][self.edge_cell(k, p[1])]

    def end_value(self, k: int, end: int):
        """Value of the open cell of edge k touching the given end."""
        return self.cells[k][0 if end == 0 else -1]

    def point_cells(self) -> Iterator[tuple[Point, Any, list]]:
        """Every point cell with its value and the values of its adjacent open cells."""
        sp = self.space
        for v, val, inc in zip(sp.vertices, self.vertex_values, sp.incidence):
            yield v, val, [self.end_value(k, end) for k, end in inc]
        for k, (br, cs) in enumerate(zip(self.breaks, self.cells)):
            name = sp.edges[k][0]
            for i, t in enumerate(br):
                yield (name, t), cs[2 * i + 1], [cs[2 * i], cs[2 * i + 2]]

    def open_cells(self) -> Iterator[tuple[int, int, Fraction, Fraction, Any]]:
        for k, (br, cs) in enumerate(zip(self.breaks, self.cells)):
            pts = (Fraction(0),) + br + (Fraction(1),)
            for i in range(len(br) + 1):
                yield k, 2 * i, pts[i], pts[i + 1], cs[2 * i]

    def all_values(self) -> list:
        out = list(self.vertex_values)
        for cs in self.cells:
            out.extend(cs)
        return out

    def map(self, fn: Callable[[Any], Any]) -> "Layout":
        return Layout(self.space, tuple(fn(v) for v in self.vertex_values), self.breaks,
                      tuple(tuple(fn(v) for v in cs) for cs in self.cells))

    def refine(self, breaks) -> "Layout":
        """Re-express on a finer set of breakpoints (a superset per edge)."""
        if tuple(breaks) == self.breaks:
            return self
        cells = []
        for k, (br, new) in enumerate(zip(self.breaks, breaks)):
            if br == new:
                cells.append(self.cells[k])
                continue
            pts = (Fraction(0),) + tuple(new) + (Fraction(1),)
            row = []
            for i in range(len(new) + 1):
                row.append(self.cells[k][self.edge_cell(k, (pts[i] + pts[i + 1]) / 2)])
                if i < len(new):
                    row.append(self.cells[k][self.edge_cell(k, new[i])])
            cells.append(tuple(row))
        return Layout(self.space, self.vertex_values, tuple(tuple(b) for b in breaks), tuple(cells))

    def canonical(self) -> "Layout":
        """Drop breakpoints whose value agrees with both adjacent open cells."""
        breaks, cells = [], []
        for br, cs in zip(self.breaks, self.cells):
            nb, nc = [], [cs[0]]
            for i, t in enumerate(br):
                pv, right = cs[2 * i + 1], cs[2 * i + 2]
                if pv == nc[-1] == right:
                    continue
                nb.append(t)
                nc.extend((pv, right))
            breaks.append(tuple(nb))
            cells.append(tuple(nc))
        return Layout(self.space, self.vertex_values, tuple(breaks), tuple(cells))

    def gaps(self) -> list[Fraction]:
        """Per edge the smallest distance between consecutive breakpoints or endpoints."""
        out = []
        for br in self.breaks:
            pts = (Fraction(0),) + br + (Fraction(1),)
            out.append(min(b - a for a, b in zip(pts, pts[1:])))
        return out


def tabulate(space: Space, breaks, fn: Callable[[Point], Any]) -> Layout:
    """Evaluate ``fn`` once per cell; open cells are sampled at their midpoints."""
    breaks = tuple(_check_breaks(b) for b in breaks)
    if len(breaks) != len(space.edges):
        raise BadBreakpoints("one breakpoint list per edge is required")
    vv = tuple(fn(v) for v in space.vertices)
    cells = []
    for (name, _, _), br in zip(space.edges, breaks):
        pts = (Fraction(0),) + br + (Fraction(1),)
        row = []
        for i in range(len(br) + 1):
            row.append(fn((name, (pts[i] + pts[i + 1]) / 2)))
            if i < len(br):
                row.append(fn((name, br[i])))
        cells.append(tuple(row))
    return Layout(space, vv, breaks, tuple(cells))


def common_breaks(*layouts: Layout) -> tuple[tuple[Fraction, ...], ...]:
    space = layouts[0].space
    for lay in layouts[1:]:
        if lay.space != space:
            raise SpaceMismatch("layouts live on different spaces")
    first = layouts[0].breaks
    if all(lay.breaks == first for lay in layouts[1:]):
        return first
    return tuple(tuple(sorted(set().union(*(lay.breaks[k] for lay in layouts))))
                 for k in range(len(space.edges)))


def combine(fn: Callable, *layouts: Layout) -> Layout:
    """Cellwise ``fn`` on the common refinement."""
    br = common_breaks(*layouts)
    ref = [lay.refine(br) for lay in layouts]
    vv = tuple(fn(*vals) for vals in zip(*(r.vertex_values for r in ref)))
    cells = tuple(tuple(fn(*vals) for vals in zip(*(r.cells[k] for r in ref)))
                  for k in range(len(br)))
    return Layout(layouts[0].space, vv, br, cells)


def all_cells(*layouts: Layout) -> Iterator[tuple]:
    """Value tuples of every cell of the common refinement (vertices first)."""
    br = common_breaks(*layouts)
    ref = [lay.refine(br) for lay in layouts]
    yield from zip(*(r.vertex_values for r in ref))
    for k in range(len(br)):
        yield from zip(*(r.cells[k] for r in ref))


# ---------------------------------------------------------------- cell sets


class CellSet:
    """A finite union of cells, stored as a boolean layout."""

    def __init__(self, layout: Layout):
        self.layout = layout.map(bool).canonical()

    @property
    def space(self) -> Space:
        return self.layout.space

    def __eq__(self, other):
        return isinstance(other, CellSet) and self.layout == other.layout

    def __hash__(self):
        return hash(self.layout)

    def __repr__(self):
        return f"CellSet({describe_set(self)})"

    def __contains__(self, p) -> bool:
        return bool(self.layout.value_at(p))

    @staticmethod
    def empty(space: Space) -> "CellSet":
        return CellSet(Layout.constant(space, False))

    @staticmethod
    def whole(space: Space) -> "CellSet":
        return CellSet(Layout.constant(space, True))

    @staticmethod
    def from_parts(space: Space, vertices=(), segments=()) -> "CellSet":
        """Build from vertex names and segments (edge, lo, hi, lo_closed, hi_closed).

        A closed end at 0 or 1 includes the corresponding vertex."""
        verts = set(vertices)
        cuts: list[set] = [set() for _ in space.edges]
        segs = []
        for edge, lo, hi, lc, hc in segments:
            k = space.edge_index[edge]
            lo, hi = Fraction(lo), Fraction(hi)
            if not 0 <= lo <= hi <= 1 or (lo == hi and not (lc and hc)):
                raise BadBreakpoints(f"bad segment {edge}:{lo},{hi}")
            for t in (lo, hi):
                if 0 < t < 1:
                    cuts[k].add(t)
            segs.append((k, lo, hi, lc, hc))
            _, s, t = space.edges[k]
            if lo == 0 and lc:
                verts.add(s)
            if hi == 1 and hc:
                verts.add(t)

        def inside(p):
            if isinstance(p, str):
                return p in verts
            k = space.edge_index[p[0]]
            t = p[1]
            return any(kk == k and (lo < t < hi or (t == lo and lc) or (t == hi and hc))
                       for kk, lo, hi, lc, hc in segs)

        return CellSet(tabulate(space, [sorted(c) for c in cuts], inside))

    def _neighbour_rule(self, keep_point: Callable[[bool, list], bool]) -> "CellSet":
        lay = self.layout
        sp = lay.space
        vv = []
        for val, inc in zip(lay.vertex_values, sp.incidence):
            vv.append(keep_point(val, [lay.end_value(k, end) for k, end in inc]))
        cells = []
        for cs in lay.cells:
            row = list(cs)
            for i in range(1, len(cs), 2):
                row[i] = keep_point(cs[i], [cs[i - 1], cs[i + 1]])
            cells.append(tuple(row))
        return CellSet(Layout(sp, tuple(vv), lay.breaks, tuple(cells)))

    def is_open(self) -> bool:
        return all(not v or all(nb) for _, v, nb in self.layout.point_cells())

    def is_closed(self) -> bool:
        return self.complement().is_open()

    def complement(self) -> "CellSet":
        return CellSet(self.layout.map(lambda v: not v))

    def closure(self) -> "CellSet":
        return self._neighbour_rule(lambda v, nb: v or any(nb))

    def interior(self) -> "CellSet":
        return self._neighbour_rule(lambda v, nb: v and all(nb))

    def union(self, other: "CellSet") -> "CellSet":
        return CellSet(combine(lambda a, b: a or b, self.layout, other.layout))

    def intersection(self, other: "CellSet") -> "CellSet":
        return CellSet(combine(lambda a, b: a and b, self.layout, other.layout))

    def is_empty(self) -> bool:
        return not any(self.layout.all_values())

    def is_whole(self) -> bool:
        return all(self.layout.all_values())


def describe_set(cs: CellSet) -> str:
    lay = cs.layout
    parts = [v for v, val in zip(lay.space.vertices, lay.vertex_values) if val]
    for k, lo, hi, val in ((k, lo, hi, val) for k, _, lo, hi, val in lay.open_cells()):
        if val:
            parts.append(f"{lay.space.edges[k][0]}({lo},{hi})")
    for p, val, _ in lay.point_cells():
        if val and not isinstance(p, str):
            parts.append(f"{p[0]}@{p[1]}")
    return ", ".join(parts) if parts else "∅"


# ---------------------------------------------------------------- cellwise-affine maps


@dataclass(frozen=True)
class Piece:
    """Part [start, end] of a source edge, sent affinely onto [a, b] of a target edge,
    or collapsed to a single target point when ``edge`` is None."""

    start: Fraction
    end: Fraction
    edge: str | None = None
    a: Fraction | None = None
    b: Fraction | None = None
    point: Point = None

    def raw(self, s: Fraction) -> Fraction:
        return self.a + (self.b - self.a) * (s - self.start) / (self.end - self.start)


@dataclass(frozen=True)
class CellMap:
    """A continuous map source -> target, affine on the cells of a subdivision of the source."""

    source: Space
    target: Space
    vertex_images: tuple
    pieces: tuple[tuple[Piece, ...], ...]

    def __post_init__(self):
        src, tgt = self.source, self.target
        object.__setattr__(self, "vertex_images", tuple(tgt.point(p) for p in self.vertex_images))
        if len(self.vertex_images) != len(src.vertices) or len(self.pieces) != len(src.edges):
            raise MapNotCellwiseAffine("map data does not match the source space")
        fixed = []
        for k, plist in enumerate(self.pieces):
            if not plist:
                raise MapNotCellwiseAffine(f"edge {src.edges[k][0]} has no pieces")
            row = []
            pos = Fraction(0)
            for pc in plist:
                start, end = Fraction(pc.start), Fraction(pc.end)
                if start != pos or not start < end:
                    raise MapNotCellwiseAffine(f"pieces of edge {src.edges[k][0]} do not tile [0,1]")
                pos = end
                if pc.edge is None:
                    row.append(Piece(start, end, point=tgt.point(pc.point)))
                else:
                    if pc.edge not in tgt.edge_index:
                        raise MapNotCellwiseAffine(f"unknown target edge {pc.edge}")
                    a, b = Fraction(pc.a), Fraction(pc.b)
                    if not (0 <= a <= 1 and 0 <= b <= 1) or a == b:
                        raise MapNotCellwiseAffine("affine pieces need distinct ends in [0,1]")
                    row.append(Piece(start, end, pc.edge, a, b))
            if pos != 1:
                raise MapNotCellwiseAffine(f"pieces of edge {src.edges[k][0]} do not reach 1")
            fixed.append(tuple(row))
        object.__setattr__(self, "pieces", tuple(fixed))
        # continuity: piece ends agree with each other and with the vertex images
        for k, (name, s, t) in enumerate(src.edges):
            row = self.pieces[k]
            if self._piece_image(row[0], row[0].start) != self.vertex_images[src.vertex_index[s]]:
                raise MapNotCellwiseAffine(f"edge {name} is discontinuous at its source")
            if self._piece_image(row[-1], row[-1].end) != self.vertex_images[src.vertex_index[t]]:
                raise MapNotCellwiseAffine(f"edge {name} is discontinuous at its target")
            for p1, p2 in zip(row, row[1:]):
                if self._piece_image(p1, p1.end) != self._piece_image(p2, p2.start):
                    raise MapNotCellwiseAffine(f"edge {name} is discontinuous at {p1.end}")

    def _piece_image(self, pc: Piece, s: Fraction) -> Point:
        if pc.edge is None:
            return pc.point
        return self.target.point((pc.edge, pc.raw(s)))

    def __call__(self, p: Point) -> Point:
        p = self.source.point(p)
        if isinstance(p, str):
            return self.vertex_images[self.source.vertex_index[p]]
        k = self.source.edge_index[p[0]]
        s = p[1]
        for pc in self.pieces[k]:
            if pc.start <= s <= pc.end:
                return self._piece_image(pc, s)
        raise PointNotInSpace(f"{p!r} not covered")  # unreachable after validation

    def pullback_breaks(self, layout: Layout) -> tuple[tuple[Fraction, ...], ...]:
        """Source breakpoints making f∘m constant on every open cell for any f on ``layout``."""
        out = []
        for row in self.pieces:
            pts = set()
            for pc in row:
                if pc.start > 0:
                    pts.add(pc.start)
                if pc.edge is None:
                    continue
                lo, hi = min(pc.a, pc.b), max(pc.a, pc.b)
                for t in layout.breaks[self.target.edge_index[pc.edge]]:
                    if lo < t < hi:
                        pts.add(pc.start + (t - pc.a) / (pc.b - pc.a) * (pc.end - pc.start))
            out.append(tuple(sorted(pts)))
        return tuple(out)

    def is_surjective(self) -> bool:
        tgt = self.target
        covered = [[] for _ in tgt.edges]
        hit = set(self.vertex_images)
        for row in self.pieces:
            for pc in row:
                if pc.edge is None:
                    hit.add(pc.point)
                else:
                    k = tgt.edge_index[pc.edge]
                    covered[k].append((min(pc.a, pc.b), max(pc.a, pc.b)))
                    hit.add(tgt.point((pc.edge, pc.a)))
                    hit.add(tgt.point((pc.edge, pc.b)))
        for k, segs in enumerate(covered):
            pos = Fraction(0)
            for lo, hi in sorted(segs):
                if lo > pos:
                    return False
                pos = max(pos, hi)
            if pos < 1:
                return False
        for k, segs in enumerate(covered):
            if segs:
                _, s, t = tgt.edges[k]
                hit.update((s, t))
        return all(v in hit for v in tgt.vertices)

    @staticmethod
    def identity(space: Space) -> "CellMap":
        return CellMap(space, space, space.vertices,
                       tuple((Piece(Fraction(0), Fraction(1), name, Fraction(0), Fraction(1)),)
                             for name, _, _ in space.edges))


def compose(outer: CellMap, inner: CellMap) -> CellMap:
    """outer ∘ inner."""
    if inner.target != outer.source:
        raise SpaceMismatch("maps are not composable")
    mid = outer.source
    rows = []
    for row in inner.pieces:
        new = []
        for pc in row:
            if pc.edge is None:
                new.append(Piece(pc.start, pc.end, point=outer(pc.point)))
                continue
            # split at preimages of the outer piece joints on the middle edge
            k = mid.edge_index[pc.edge]
            lo, hi = min(pc.a, pc.b), max(pc.a, pc.b)
            cuts = {pc.start, pc.end}
            for q in outer.pieces[k]:
                for t in (q.start, q.end):
                    if lo < t < hi:
                        cuts.add(pc.start + (t - pc.a) / (pc.b - pc.a) * (pc.end - pc.start))
            cuts = sorted(cuts)
            for u, v in zip(cuts, cuts[1:]):
                ru, rv = pc.raw(u), pc.raw(v)
                m = (ru + rv) / 2
                q = next(q for q in outer.pieces[k] if q.start <= m <= q.end)
                if q.edge is None:
                    new.append(Piece(u, v, point=q.point))
                else:
                    new.append(Piece(u, v, q.edge, q.raw(ru), q.raw(rv)))
        rows.append(tuple(new))
    return CellMap(inner.source, outer.target, tuple(outer(p) for p in inner.vertex_images),
                   tuple(rows))


def subspace(space: Space, closed: CellSet) -> tuple[Space, CellMap]:
    """A closed union of cells as a space of its own, with its inclusion map."""
    if closed.space != space:
        raise SpaceMismatch("cell set lives on another space")
    if not closed.is_closed():
        raise NotClosedSubcomplex(f"{describe_set(closed)} is not closed")
    if closed.is_whole():
        return space, CellMap.identity(space)
    lay = closed.layout
    vertices: list[str] = []
    images: list[Point] = []
    edges: list[tuple[str, str, str]] = []
    pieces: list[tuple[Piece, ...]] = []

    def vertex_for(p: Point) -> str:
        name = p if isinstance(p, str) else f"{p[0]}@{p[1]}"
        if name not in vertices:
            vertices.append(name)
            images.append(p)
        return name

    for v, val in zip(space.vertices, lay.vertex_values):
        if val:
            vertex_for(v)
    for k, (name, s, t) in enumerate(space.edges):
        br = lay.breaks[k]
        cs = lay.cells[k]
        pts = (Fraction(0),) + br + (Fraction(1),)
        i = 0
        n_open = len(br) + 1
        while i < n_open:
            if not cs[2 * i]:
                # isolated points sit at breakpoints between two excluded open cells
                if i < len(br) and cs[2 * i + 1] and not cs[2 * i + 2]:
                    vertex_for((name, br[i]))
                i += 1
                continue
            j = i
            while j + 1 < n_open and cs[2 * j + 1] and cs[2 * j + 2]:
                j += 1
            lo, hi = pts[i], pts[j + 1]
            a = s if lo == 0 else vertex_for((name, lo))
            b = t if hi == 1 else vertex_for((name, hi))
            seg = name if (lo, hi) == (0, 1) else f"{name}[{lo},{hi}]"
            edges.append((seg, a, b))
            pieces.append((Piece(Fraction(0), Fraction(1), name, lo, hi),))
            i = j + 1
    kind = "graph" if edges else "discrete"
    sub = Space(kind, tuple(vertices), tuple(edges))
    return sub, CellMap(sub, space, tuple(images), tuple(pieces))


def require_open(u: CellSet) -> None:
    if not u.is_open():
        raise NotOpen(f"{describe_set(u)} is not open")
