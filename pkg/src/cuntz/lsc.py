"""Lower semicontinuous step functions with values in a scalar semigroup."""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .core import CuSemigroup
from .errors import (BadBreakpoints, ElementNotInSemigroup, GlueOrderViolation,
                     MultiplicityExceeded, NotLowerSemicontinuous, NotPresentable, ParseError,
                     PhiNotOrdered, PointNotInSpace, PreconditionViolated, SpaceMismatch)
from .scalars import ScalarSemigroup, _split_top, interpolate, parse_rational
from .spaces import (CellMap, CellSet, Layout, Point, Space, all_cells, combine, common_breaks,
                     require_open, subspace, tabulate)


@dataclass(frozen=True)
class StepFunction:
    M: ScalarSemigroup
    layout: Layout

    @property
    def space(self) -> Space:
        return self.layout.space

    def __call__(self, p):
        return eval_at(self, p)

    def __str__(self) -> str:
        return format_step(self)

    def __repr__(self) -> str:
        return f"StepFunction({format_step(self)!r})"

    def is_constant(self) -> bool:
        vals = self.layout.all_values()
        return all(v == vals[0] for v in vals) if vals else True


def _validate(M: ScalarSemigroup, layout: Layout) -> StepFunction:
    layout = layout.map(M.check)
    for p, val, nbrs in layout.point_cells():
        for nb in nbrs:
            if not M.leq(val, nb):
                raise NotLowerSemicontinuous(
                    f"value {M.format(val)} at {layout.space.format_point(p)} exceeds the "
                    f"adjacent open-cell value {M.format(nb)}", cell=p)
    return StepFunction(M, layout.canonical())


def from_layout(M: ScalarSemigroup, layout: Layout) -> StepFunction:
    return _validate(M, layout)


def constant(space: Space, M: ScalarSemigroup, value) -> StepFunction:
    return StepFunction(M, Layout.constant(space, M.check(value)))


def make_step(space: Space, M: ScalarSemigroup, segments: Iterable = (), vertices=None) -> StepFunction:
    """Build from segments ``(edge, lo, hi, lo_closed, hi_closed, value)`` and vertex values.

    A segment closed at 0 or 1 also assigns the value of the matching vertex.  Every cell
    must be covered exactly once (vertex values given twice must agree)."""
    vertices = dict(vertices or {})
    segs = []
    cuts: list[set] = [set() for _ in space.edges]
    vsources: dict[str, list] = {v: [] for v in space.vertices}
    for v, val in vertices.items():
        if v not in space.vertex_index:
            raise PointNotInSpace(f"no vertex named {v!r}")
        vsources[v].append(M.check(val))
    for edge, lo, hi, lc, hc, val in segments:
        if edge not in space.edge_index:
            raise PointNotInSpace(f"no edge named {edge!r}")
        k = space.edge_index[edge]
        lo, hi = Fraction(lo), Fraction(hi)
        if not 0 <= lo <= hi <= 1 or (lo == hi and not (lc and hc)):
            raise BadBreakpoints(f"empty or malformed segment on {edge}: {lo}, {hi}")
        val = M.check(val)
        for t in (lo, hi):
            if 0 < t < 1:
                cuts[k].add(t)
        _, s, tg = space.edges[k]
        if lo == 0 and lc:
            vsources[s].append(val)
        if hi == 1 and hc:
            vsources[tg].append(val)
        segs.append((k, lo, hi, lc, hc, val))

    def value(p):
        if isinstance(p, str):
            got = vsources[p]
            if not got:
                raise BadBreakpoints(f"no value given for vertex {p}")
            if any(g != got[0] for g in got):
                raise BadBreakpoints(f"conflicting values at vertex {p}")
            return got[0]
        k = space.edge_index[p[0]]
        t = p[1]
        hits = [val for kk, lo, hi, lc, hc, val in segs
                if kk == k and (lo < t < hi or (t == lo and lc) or (t == hi and hc))]
        if len(hits) != 1:
            raise BadBreakpoints(f"point {space.format_point(p)} is covered {len(hits)} times")
        return hits[0]

    return _validate(M, tabulate(space, [sorted(c) for c in cuts], value))


def eval_at(f: StepFunction, p):
    return f.layout.value_at(p)


def _same(f: StepFunction, g: StepFunction) -> None:
    if f.space != g.space:
        raise SpaceMismatch(f"{f.space.describe()} vs {g.space.describe()}")
    if f.M != g.M:
        raise SpaceMismatch(f"value semigroups differ: {f.M.describe()} vs {g.M.describe()}")


def leq_step(f: StepFunction, g: StepFunction) -> bool:
    _same(f, g)
    M = f.M
    return all(M.leq(a, b) for a, b in all_cells(f.layout, g.layout))


def add_step(f: StepFunction, g: StepFunction) -> StepFunction:
    _same(f, g)
    return StepFunction(f.M, combine(f.M.add, f.layout, g.layout).canonical())


def meet_step(f: StepFunction, g: StepFunction) -> StepFunction:
    _same(f, g)
    return StepFunction(f.M, combine(f.M.meet2, f.layout, g.layout).canonical())


def way_below_step(g: StepFunction, f: StepFunction) -> bool:
    """Local test on the common refinement: open cells need g << f; at each point cell the
    values of g on the point and its adjacent open cells must share a bound way below f
    on the same cells."""
    _same(g, f)
    M = f.M
    br = common_breaks(g.layout, f.layout)
    G, F = g.layout.refine(br), f.layout.refine(br)
    for k in range(len(br)):
        for i in range(0, len(G.cells[k]), 2):
            if not M.way_below(G.cells[k][i], F.cells[k][i]):
                return False
    for (_, gv, gn), (_, fv, fn) in zip(G.point_cells(), F.point_cells()):
        if interpolate(M, [gv, *gn], [fv, *fn]) is None:
            return False
    return True


def is_compact_step(f: StepFunction) -> bool:
    return way_below_step(f, f)


def char_action(f: StepFunction, U: CellSet) -> StepFunction:
    """f on the open set U and zero elsewhere."""
    if U.space != f.space:
        raise SpaceMismatch("open set lives on another space")
    require_open(U)
    z = f.M.zero()
    return StepFunction(f.M, combine(lambda v, inside: v if inside else z, f.layout, U.layout)
                        .canonical())


def precompose(f: StepFunction, m: CellMap) -> StepFunction:
    """f ∘ m on the source of m."""
    if m.target != f.space:
        raise SpaceMismatch("map does not land in the domain of f")
    lay = tabulate(m.source, m.pullback_breaks(f.layout), lambda p: f.layout.value_at(m(p)))
    return _validate(f.M, lay)


def _as_subspace(space: Space, Y) -> tuple[Space, CellMap]:
    if isinstance(Y, CellSet):
        return subspace(space, Y)
    sub, incl = Y
    if incl.target != space:
        raise SpaceMismatch("inclusion does not land in the space")
    return sub, incl


def restrict(f: StepFunction, Y) -> StepFunction:
    """Restriction to a closed union of cells (a CellSet or a (space, inclusion) pair)."""
    _, incl = _as_subspace(f.space, Y)
    return precompose(f, incl)


def _preimage(incl: CellMap, p: Point) -> Point | None:
    sub = incl.source
    for v, img in zip(sub.vertices, incl.vertex_images):
        if img == p:
            return v
    if isinstance(p, str):
        return None
    e, t = p
    for k, row in enumerate(incl.pieces):
        pc = row[0]
        if pc.edge == e and min(pc.a, pc.b) < t < max(pc.a, pc.b):
            return sub.point((sub.edges[k][0], (t - pc.a) / (pc.b - pc.a)))
    return None


def glue(f: StepFunction, g: StepFunction, Y) -> StepFunction:
    """The function equal to g on the closed set Y and to f off Y; needs g <= f|_Y."""
    sub, incl = _as_subspace(f.space, Y)
    if g.space != sub:
        raise SpaceMismatch("g must live on the subspace Y")
    if not leq_step(g, precompose(f, incl)):
        raise GlueOrderViolation("g is not below the restriction of f")
    cuts = [set(b) for b in f.layout.breaks]
    for k, row in enumerate(incl.pieces):
        pc = row[0]
        ek = f.space.edge_index[pc.edge]
        for t in (pc.a, pc.b):
            if 0 < t < 1:
                cuts[ek].add(t)
        for s in g.layout.breaks[k]:
            cuts[ek].add(pc.raw(s))
    for v in incl.vertex_images:
        if not isinstance(v, str):
            cuts[f.space.edge_index[v[0]]].add(v[1])

    def value(p):
        q = _preimage(incl, p)
        return f.layout.value_at(p) if q is None else g.layout.value_at(q)

    return _validate(f.M, tabulate(f.space, [sorted(c) for c in cuts], value))


# ---------------------------------------------------------------- approximation


def _with_points(f: StepFunction, points) -> Layout:
    cuts = [set(b) for b in f.layout.breaks]
    for p in points:
        if not isinstance(p, str):
            cuts[f.space.edge_index[p[0]]].add(p[1])
    return f.layout.refine(tuple(tuple(sorted(c)) for c in cuts))


def _regions(M, lay: Layout, region_value, open_value, scale) -> Layout:
    """Closed regions of radius gap*scale around every point cell, carrying
    region_value(point, value); remaining open parts carry open_value(value, left, right)."""
    sp = lay.space
    vv = tuple(region_value(v, val) for v, val in zip(sp.vertices, lay.vertex_values))
    gaps = lay.gaps()
    breaks, cells = [], []
    for k, (name, s, t) in enumerate(sp.edges):
        br, cs = lay.breaks[k], lay.cells[k]
        d = gaps[k] * scale
        m = len(br)
        R = [vv[sp.vertex_index[s]]]
        R += [region_value((name, br[i]), cs[2 * i + 1]) for i in range(m)]
        R.append(vv[sp.vertex_index[t]])
        nb = [d]
        nc = [R[0], R[0]]
        for i in range(m + 1):
            nc.append(open_value(cs[2 * i], R[i], R[i + 1]))
            if i < m:
                nb += [br[i] - d, br[i] + d]
                nc += [R[i + 1], R[i + 1], R[i + 1]]
        nb.append(1 - d)
        nc += [R[m + 1], R[m + 1]]
        breaks.append(tuple(nb))
        cells.append(tuple(nc))
    return Layout(sp, vv, tuple(breaks), tuple(cells))


def chi_approx(f: StepFunction, k: int, overrides: dict | None = None) -> StepFunction:
    """The k-th canonical piecewise characteristic approximant of f (k >= 1).

    Every point cell p gets a closed region of radius gap/2^(k+1) carrying the k-th
    approximant of f(p) (or ``overrides[p]``); the rest of each open cell carries the
    join of the approximant of its value and the two neighbouring region values.
    """
    if k < 1:
        raise ValueError("approximation index starts at 1")
    M = f.M
    over = {f.space.point(p): M.check(v) for p, v in (overrides or {}).items()}
    lay = _with_points(f, over)

    def region(p, val):
        return over[p] if p in over else M.approximant(val, k)

    def open_part(val, left, right):
        return M.join([M.approximant(val, k), left, right])

    if not f.space.edges:
        return StepFunction(M, Layout(f.space, tuple(region(v, val) for v, val in
                                                     zip(f.space.vertices, lay.vertex_values)),
                                      (), ()))
    return _validate(M, _regions(M, lay, region, open_part, Fraction(1, 2 ** (k + 1))))


def directed_join(g1: StepFunction, g2: StepFunction, f: StepFunction) -> StepFunction:
    """Some h with g1 << h, g2 << h and h << f, given g1 << f and g2 << f."""
    _same(g1, f)
    _same(g2, f)
    if not (way_below_step(g1, f) and way_below_step(g2, f)):
        raise PreconditionViolated("both inputs must be way below f")
    M = f.M
    br = common_breaks(g1.layout, g2.layout, f.layout)
    G1, G2, F = (x.layout.refine(br) for x in (g1, g2, f))
    sp = f.space
    # c_p: strictly between the local bound of g1, g2 near p and f(p)
    cpoint = {}
    for (p, a, an), (_, b, bn), (_, fv, _) in zip(G1.point_cells(), G2.point_cells(),
                                                  F.point_cells()):
        cpoint[p] = M.interpolate_way_below(M.join([a, b, *an, *bn]), fv)

    def region(p, val):
        return cpoint[p]

    if not sp.edges:
        return StepFunction(M, Layout(sp, tuple(cpoint[v] for v in sp.vertices), (), ()))
    lay = Layout(sp, F.vertex_values, br,
                 tuple(tuple(zip(G1.cells[k], G2.cells[k], F.cells[k])) for k in range(len(br))))

    def open_part(cell, left, right):
        a, b, fv = cell
        return M.interpolate_way_below(M.join([a, b, left, right]), fv)

    h = _validate(M, _regions(M, lay, region, open_part, Fraction(1, 4)))
    return h


def chi_search(g: StepFunction, f: StepFunction, depth: int = 6) -> bool:
    """Whether g lies below one of the first ``depth`` canonical approximants of f."""
    _same(g, f)
    return any(leq_step(g, chi_approx(f, k)) for k in range(1, depth + 1))


def probe_points(f: StepFunction) -> list[Point]:
    pts: list[Point] = list(f.space.vertices)
    for k, _, lo, hi, _ in f.layout.open_cells():
        name = f.space.edges[k][0]
        for w in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
            pts.append((name, lo + (hi - lo) * w))
    for p, _, _ in f.layout.point_cells():
        if not isinstance(p, str):
            pts.append(p)
    return pts


def probe_sup_equals(terms: list[StepFunction], f: StepFunction) -> bool:
    """Terms stay below f and their pointwise limits match f at the probe points."""
    if not all(leq_step(t, f) for t in terms):
        return False
    M = f.M
    for p in probe_points(f):
        if M.recognize_sup([t(p) for t in terms]) != f(p):
            return False
    return True


# ---------------------------------------------------------------- piecewise characteristic presentations


@dataclass(frozen=True)
class PiecewiseCharPresentation:
    """Open sets U_1..U_n with values phi(F) for index sets F; phi(∅) is zero."""

    space: Space
    M: ScalarSemigroup
    opens: tuple[CellSet, ...]
    phi: tuple[tuple[frozenset, object], ...]

    def phi_of(self, F: frozenset):
        for key, val in self.phi:
            if key == F:
                return val
        if not F:
            return self.M.zero()
        raise PhiNotOrdered(f"phi is undefined on {sorted(F)}")


def _index_sets(P: PiecewiseCharPresentation):
    """Per cell of the common refinement: (F_t, F'_t)."""
    sp = P.space
    if not P.opens:
        base = Layout.constant(sp, False)
        return [(frozenset(), frozenset())] * len(base.all_values()), base
    closures = [U.closure() for U in P.opens]
    lays = [U.layout for U in P.opens] + [C.layout for C in closures]
    br = common_breaks(*lays)
    ref = [lay.refine(br) for lay in lays]
    n = len(P.opens)
    out = []
    vals = [r.all_values() for r in ref]
    for cell in zip(*vals):
        F = frozenset(i for i in range(n) if cell[i])
        Fc = frozenset(i for i in range(n) if cell[n + i])
        out.append((F, Fc))
    return out, ref[0]


def from_presentation(P: PiecewiseCharPresentation) -> StepFunction:
    M = P.M
    for U in P.opens:
        if U.space != P.space:
            raise SpaceMismatch("open set lives on another space")
        require_open(U)
    sets, shape = _index_sets(P)
    limit = P.space.dimension + 1
    for F, Fc in sets:
        if len(Fc) > limit:
            raise MultiplicityExceeded(f"{len(Fc)} closures meet at one cell (limit {limit})")
    family = {F for F, _ in sets} | {Fc for _, Fc in sets}
    phi = {F: M.check(P.phi_of(F)) for F in family}
    for F in family:
        for G in family:
            if F <= G and not M.leq(phi[F], phi[G]):
                raise PhiNotOrdered(f"phi({sorted(F)}) is not below phi({sorted(G)})")
    values = iter([phi[F] for F, _ in sets])
    lay = Layout(shape.space, tuple(next(values) for _ in shape.vertex_values), shape.breaks,
                 tuple(tuple(next(values) for _ in cs) for cs in shape.cells))
    return _validate(M, lay)


def is_chi_member(P: PiecewiseCharPresentation, f: StepFunction) -> bool:
    """phi(F'_t) << f(t) for every t: the presented function is a piecewise
    characteristic approximant of f."""
    M = P.M
    sets, shape = _index_sets(P)
    values = iter([M.check(P.phi_of(Fc)) for _, Fc in sets])
    lay = Layout(shape.space, tuple(next(values) for _ in shape.vertex_values), shape.breaks,
                 tuple(tuple(next(values) for _ in cs) for cs in shape.cells))
    return all(M.way_below(a, b) for a, b in all_cells(lay, f.layout))


def to_presentation(g: StepFunction) -> PiecewiseCharPresentation:
    """A presentation of g: one open set per plateau (maximal connected region of constant
    value containing an open cell), widened by slivers over its boundary points."""
    M, lay, sp = g.M, g.layout, g.space
    # union-find over cells: ("v", i) vertices, ("c", k, j) edge cells
    parent: dict = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        parent[find(a)] = find(b)

    def val(c):
        return lay.vertex_values[c[1]] if c[0] == "v" else lay.cells[c[1]][c[2]]

    def neighbours(c):
        if c[0] == "v":
            return [("c", k, 0 if end == 0 else len(lay.cells[k]) - 1) for k, end in sp.incidence[c[1]]]
        _, k, j = c
        return [("c", k, j - 1), ("c", k, j + 1)] if j % 2 else []

    points = [("v", i) for i in range(len(sp.vertices))]
    points += [("c", k, j) for k in range(len(sp.edges)) for j in range(1, len(lay.cells[k]), 2)]
    opens = [("c", k, j) for k in range(len(sp.edges)) for j in range(0, len(lay.cells[k]), 2)]
    for c in points + opens:
        find(c)
    for p in points:
        for nb in neighbours(p):
            if val(nb) == val(p):
                union(p, nb)
    plateaus = sorted({find(c) for c in opens}, key=repr)
    index = {r: i for i, r in enumerate(plateaus)}
    zero = M.zero()
    for p in points:
        if find(p) not in index and val(p) != zero:
            raise NotPresentable(f"isolated dip of value {M.format(val(p))} is not presentable")
    # slivers: refine each edge at distance gap/4 around every point cell
    gaps = lay.gaps()
    new_breaks = []
    for k, br in enumerate(lay.breaks):
        d = gaps[k] / 4
        pts = {d, 1 - d}
        for t in br:
            pts.update((t - d, t, t + d))
        new_breaks.append(tuple(sorted(pts)))

    def owner(k, t, is_point):
        """Plateau indices containing the refined cell at coordinate t of edge k."""
        j = lay.edge_cell(k, t)
        own = {index.get(find(("c", k, j)))}
        # slivers of the plateaus of nearby point cells reach into open cells
        d = gaps[k] / 4
        if j % 2 == 0 and not is_point:
            pts = (Fraction(0),) + lay.breaks[k] + (Fraction(1),)
            i = j // 2
            lo, hi = pts[i], pts[i + 1]
            _, s, tg = sp.edges[k]
            if t < lo + d:
                left = ("v", sp.vertex_index[s]) if i == 0 else ("c", k, j - 1)
                own.add(index.get(find(left)))
            if t > hi - d:
                right = ("v", sp.vertex_index[tg]) if i == len(lay.breaks[k]) else ("c", k, j + 1)
                own.add(index.get(find(right)))
        own.discard(None)
        return own

    sets = []
    for r in range(len(plateaus)):
        vvals = tuple(index.get(find(("v", i))) == r for i in range(len(sp.vertices)))
        cells = []
        for k, br in enumerate(new_breaks):
            pts = (Fraction(0),) + br + (Fraction(1),)
            row = []
            for i in range(len(br) + 1):
                row.append(r in owner(k, (pts[i] + pts[i + 1]) / 2, False))
                if i < len(br):
                    row.append(r in owner(k, br[i], True))
            cells.append(tuple(row))
        sets.append(CellSet(Layout(sp, vvals, tuple(new_breaks), tuple(cells))))
    pvals = [val(r) for r in plateaus]
    probe = PiecewiseCharPresentation(sp, M, tuple(sets), ())
    family = set()
    for F, Fc in _index_sets(probe)[0]:
        family.update((F, Fc))
    phi = tuple((F, M.join(pvals[i] for i in F)) for F in sorted(family, key=sorted))
    return PiecewiseCharPresentation(sp, M, tuple(sets), phi)


# ---------------------------------------------------------------- text syntax


_SEG = re.compile(r"^([\[\(\{])\s*([^,\]\)\}]+?)\s*(?:,\s*([^\]\)]+?)\s*)?([\]\)\}])$")


def _parse_segment(edge: str, text: str, M: ScalarSemigroup):
    lhs, eq, rhs = text.partition("=")
    if not eq:
        raise ParseError(f"expected 'interval=value', got {text!r}")
    m = _SEG.match(lhs.strip())
    if not m:
        raise ParseError(f"bad interval {lhs.strip()!r}")
    op, a, b, cl = m.groups()
    value = M.parse(rhs)
    if op == "{":
        if b is not None or cl != "}":
            raise ParseError(f"bad point {lhs.strip()!r}")
        t = parse_rational(a)
        return (edge, t, t, True, True, value)
    if b is None or cl == "}":
        raise ParseError(f"bad interval {lhs.strip()!r}")
    return (edge, parse_rational(a), parse_rational(b), op == "[", cl == "]", value)


def parse_step(text: str, space: Space, M: ScalarSemigroup) -> StepFunction:
    """Parse ``const v``, ``[0,1/2]=1, (1/2,1]=2`` (single edge) or clauses
    ``edge e1: ...; v: 3`` separated by semicolons."""
    text = text.strip()
    if text.startswith("const"):
        return constant(space, M, M.parse(text[5:]))
    segments, vertices = [], {}
    for clause in (c.strip() for c in text.split(";")):
        if not clause:
            continue
        if clause.startswith("edge "):
            name, colon, body = clause[5:].partition(":")
            if not colon:
                raise ParseError(f"expected 'edge NAME: ...', got {clause!r}")
            name = name.strip()
        elif clause[0] in "[({":
            if len(space.edges) != 1:
                raise ParseError("bare segments need a space with exactly one edge")
            name, body = space.edges[0][0], clause
        else:
            vname, colon, body = clause.partition(":")
            if not colon:
                raise ParseError(f"cannot read clause {clause!r}")
            vertices[vname.strip()] = M.parse(body)
            continue
        for part in _split_top(body):
            if part:
                segments.append(_parse_segment(name, part, M))
    try:
        return make_step(space, M, segments, vertices)
    except (BadBreakpoints, PointNotInSpace, ElementNotInSemigroup) as exc:
        raise ParseError(str(exc)) from exc


def _fmt_t(t: Fraction) -> str:
    return str(t.numerator) if t.denominator == 1 else f"{t.numerator}/{t.denominator}"


def _format_edge(f: StepFunction, k: int, with_ends: bool) -> str:
    M, lay, sp = f.M, f.layout, f.space
    br, cs = lay.breaks[k], lay.cells[k]
    m = len(br)
    pts = (Fraction(0),) + br + (Fraction(1),)
    _, s, t = sp.edges[k]
    pvals = {i + 1: cs[2 * i + 1] for i in range(m)}
    if with_ends:
        pvals[0] = lay.vertex_values[sp.vertex_index[s]]
        pvals[m + 1] = lay.vertex_values[sp.vertex_index[t]]
    left_closed = [False] * (m + 1)
    right_closed = [False] * (m + 1)
    alone = {}
    for i, v in sorted(pvals.items()):
        if i >= 1 and cs[2 * (i - 1)] == v:
            right_closed[i - 1] = True
        elif i <= m and cs[2 * i] == v:
            left_closed[i] = True
        else:
            alone[i] = v
    parts = []
    for i in range(m + 1):
        if i in alone:
            parts.append(f"{{{_fmt_t(pts[i])}}}={M.format(alone[i])}")
        parts.append(f"{'[' if left_closed[i] else '('}{_fmt_t(pts[i])},{_fmt_t(pts[i + 1])}"
                     f"{']' if right_closed[i] else ')'}={M.format(cs[2 * i])}")
    if m + 1 in alone:
        parts.append(f"{{1}}={M.format(alone[m + 1])}")
    return ", ".join(parts)


def format_step(f: StepFunction) -> str:
    vals = f.layout.all_values()
    if vals and all(v == vals[0] for v in vals):
        return f"const {f.M.format(vals[0])}"
    sp = f.space
    if sp.kind == "interval":
        return _format_edge(f, 0, True)
    clauses = [f"{v}: {f.M.format(val)}" for v, val in zip(sp.vertices, f.layout.vertex_values)]
    clauses += [f"edge {name}: {_format_edge(f, k, False)}" for k, (name, _, _) in enumerate(sp.edges)]
    return "; ".join(clauses)


# ---------------------------------------------------------------- the semigroup


_GRID = tuple(Fraction(i, 8) for i in range(1, 8))


@dataclass(frozen=True)
class Lsc(CuSemigroup):
    """Lsc(X, M) on step functions."""

    space: Space
    M: ScalarSemigroup
    kind = "lsc"

    def describe(self):
        return f"Lsc({self.space.describe()},{self.M.describe()})"

    def zero(self):
        return constant(self.space, self.M, self.M.zero())

    def check(self, x):
        if not isinstance(x, StepFunction):
            raise ElementNotInSemigroup(f"{x!r} is not a step function")
        if x.space != self.space or x.M != self.M:
            raise ElementNotInSemigroup(f"step function does not belong to {self.describe()}")
        return x

    def leq(self, a, b):
        return leq_step(a, b)

    def add(self, a, b):
        return add_step(a, b)

    def way_below(self, a, b):
        return way_below_step(a, b)

    def approximant(self, a, k):
        return chi_approx(a, k)

    def meet2(self, a, b):
        return meet_step(a, b)

    def sample(self, rng: random.Random, max_breaks: int = 3):
        return random_step(self.space, self.M, rng, max_breaks)

    def sample_below(self, a, rng):
        return meet_step(self.sample(rng), a)

    def recognize_sup(self, terms):
        br = terms[-1].layout.breaks
        half = terms[len(terms) // 2:]
        if any(t.layout.breaks != br for t in half):
            return None
        cols = list(zip(*(t.layout.all_values() for t in half)))
        sups = []
        for col in cols:
            s = self.M.recognize_sup(list(col))
            if s is None:
                return None
            sups.append(s)
        it = iter(sups)
        shape = terms[-1].layout
        lay = Layout(self.space, tuple(next(it) for _ in shape.vertex_values), br,
                     tuple(tuple(next(it) for _ in cs) for cs in shape.cells))
        try:
            return _validate(self.M, lay)
        except NotLowerSemicontinuous:
            return None

    def format(self, x):
        return format_step(x)

    def parse(self, text):
        return parse_step(text, self.space, self.M)


def random_step(space: Space, M: ScalarSemigroup, rng: random.Random, max_breaks: int = 3,
                values=None, grid=_GRID) -> StepFunction:
    """A random canonical step function: breakpoints from ``grid``, open-cell values
    from ``values`` (or M.sample), point values cut down to keep lower semicontinuity."""
    def pick():
        return rng.choice(values) if values is not None else M.sample(rng)

    breaks, cells = [], []
    for _ in space.edges:
        br = tuple(sorted(rng.sample(grid, rng.randint(0, min(max_breaks, len(grid))))))
        row = []
        for i in range(len(br) + 1):
            row.append(pick())
            if i < len(br):
                row.append(None)
        for i in range(1, len(row), 2):
            row[i] = M.meet([pick(), row[i - 1], row[i + 1]])
        breaks.append(br)
        cells.append(tuple(row))
    vv = []
    for inc in space.incidence:
        nbs = [cells[k][0] if end == 0 else cells[k][-1] for k, end in inc]
        vv.append(M.meet([pick(), *nbs]))
    return _validate(M, Layout(space, tuple(vv), tuple(breaks), tuple(cells)))


def force_values(f: StepFunction, values: dict) -> StepFunction:
    """f with prescribed values at some points; adjacent open cells are raised where
    needed so the result stays lower semicontinuous."""
    M, sp = f.M, f.space
    over = {sp.point(p): M.check(v) for p, v in values.items()}
    lay = _with_points(f, over)
    vv = list(lay.vertex_values)
    cells = [list(c) for c in lay.cells]
    for p, v in over.items():
        if isinstance(p, str):
            i = sp.vertex_index[p]
            vv[i] = v
            for k, end in sp.incidence[i]:
                j = 0 if end == 0 else len(cells[k]) - 1
                cells[k][j] = M.join2(cells[k][j], v)
        else:
            k = sp.edge_index[p[0]]
            j = lay.edge_cell(k, p[1])
            cells[k][j] = v
            cells[k][j - 1] = M.join2(cells[k][j - 1], v)
            cells[k][j + 1] = M.join2(cells[k][j + 1], v)
    return _validate(M, Layout(sp, tuple(vv), lay.breaks, tuple(tuple(c) for c in cells)))
