"""Builders for the example semigroups: interval and graph algebras, one-dimensional NCCW
complexes, dimension drop algebras, mapping tori, recursive subhomogeneous chains."""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from .core import CuSemigroup
from .errors import (ConstraintViolated, ElementNotInSemigroup, InvalidSpec,
                     NotLowerSemicontinuous, ParseError)
from .lsc import Lsc, StepFunction, from_layout, parse_step, way_below_step
from .morphisms import (Composition, Evaluation, Identity, MatrixMap, PointwiseMatrix,
                        Projection)
from .pullback import Pullback, PullbackElement, pb_way_below
from .scalars import (INF, NBAR, DirectSum, ScalarSemigroup, Scaled, Supernatural, Uhf,
                      format_rational, product, scalar_from_name, uhf_membership)
from .spaces import Layout, Space, tabulate


def scaled(n: int) -> ScalarSemigroup:
    return NBAR if n == 1 else Scaled(n)


def power(M: ScalarSemigroup, n: int) -> DirectSum:
    """n copies of M as a direct sum whose coordinates are M-values (no flattening)."""
    return DirectSum((M,) * n)


@dataclass(frozen=True)
class Descriptor:
    """A built semigroup together with the candidate representation used for membership.

    Candidates are what a user writes down (usually a step function on the ambient space);
    ``to_element`` turns a candidate into an element of ``semigroup`` or raises."""

    name: str
    semigroup: CuSemigroup | None
    spec: dict
    candidate_space: Space | None = None
    candidate_M: ScalarSemigroup | None = None
    to_element: Callable | None = None
    from_element: Callable | None = None
    parse_candidate: Callable | None = None
    check_candidate: Callable | None = None
    vertex_domains: dict | None = None   # prunes enumeration; membership is still checked

    def parse(self, text: str):
        """Parse element text: a candidate if the descriptor has one, else native syntax."""
        if self.parse_candidate is not None:
            return self.element(self.parse_candidate(text))
        return self.semigroup.check(self.semigroup.parse(text))

    def element(self, candidate):
        if self.to_element is None:
            return self.semigroup.check(candidate)
        return self.to_element(candidate)

    def format(self, x) -> str:
        if self.from_element is not None:
            return str(self.from_element(x))
        return self.semigroup.format(x)


def _lsc_candidate(space, M):
    return lambda text: parse_step(text, space, M)


# ---------------------------------------------------------------- builders


def interval_algebra(M: ScalarSemigroup) -> Descriptor:
    I = Space.interval()
    S = Lsc(I, M)
    return Descriptor(f"Lsc([0,1],{M.describe()})", S, {"kind": "interval", "M": M.describe()},
                      I, M, parse_candidate=_lsc_candidate(I, M))


def lsc_algebra(space: Space, M: ScalarSemigroup) -> Descriptor:
    S = Lsc(space, M)
    return Descriptor(S.describe(), S, {"kind": "lsc"}, space, M,
                      parse_candidate=_lsc_candidate(space, M))


def scalar_algebra(M: ScalarSemigroup) -> Descriptor:
    return Descriptor(M.describe(), M, {"kind": "scalar", "M": M.describe()})


def _endpoint_pullback(name, left, right_M, phi_matrix, spec) -> Pullback:
    I = Space.interval()
    ev = Evaluation(I, right_M, ("0", "1"))
    phi = MatrixMap(phi_matrix, left, ev.target)
    return Pullback(left, Lsc(I, right_M), ev.target, phi, ev, True, name)


def _endpoint_descriptor(P: Pullback, spec: dict, left_of: Callable, check: Callable,
                         domains: dict | None = None) -> Descriptor:
    I = P.right.space
    M = P.right.M

    def to_element(f: StepFunction):
        ok, reason = check(f)
        if not ok:
            raise ConstraintViolated(reason)
        return P.check(PullbackElement(left_of(f), f))

    return Descriptor(P.name, P, spec, I, M, to_element, lambda x: x.right,
                      _lsc_candidate(I, M), check, domains)


def nccw1(r: int, s: int, A) -> Descriptor:
    A = tuple(tuple(int(a) for a in row) for row in A)
    if len(A) != 2 * s or any(len(row) != r for row in A):
        raise InvalidSpec(f"matrix must have 2s = {2 * s} rows and r = {r} columns")
    if any(a < 0 for row in A for a in row):
        raise InvalidSpec("matrix entries must be non-negative")
    left = product(NBAR, r)
    P = _endpoint_pullback(f"NCCW(r={r},s={s},A={[list(x) for x in A]})", left,
                           product(NBAR, s), A, {})
    spec = {"kind": "nccw1", "r": r, "s": s, "A": [list(x) for x in A]}
    return Descriptor(P.name, P, spec, P.right.space, P.right.M)


def dimension_drop(p, q) -> Descriptor:
    spec = {"kind": "dimension_drop", "p": str(p), "q": str(q)}
    if isinstance(p, int) and isinstance(q, int):
        if p < 1 or q < 1:
            raise InvalidSpec("p and q must be positive")
        Lp, Lq, Mpq = scaled(p), scaled(q), scaled(p * q)
        name = f"Z_{{{p},{q}}}"

        def member_p(v, sub, n):
            return v is INF or (n % Fraction(v).denominator == 0)
    else:
        try:
            sp, sq = Supernatural.of(p), Supernatural.of(q)
        except (ValueError, ParseError) as exc:
            raise InvalidSpec(str(exc)) from exc
        if not (sp.infinite_type and sq.infinite_type):
            raise InvalidSpec("supernatural p and q must be of infinite type")
        Lp, Lq, Mpq = Uhf(sp), Uhf(sq), Uhf(sp.times(sq))
        name = f"Z_{{{sp},{sq}}}"

        def member_p(v, sub, n):
            return uhf_membership(sub, Mpq.p, v)
    left = DirectSum((Lp, Lq))
    P = _endpoint_pullback(name, left, Mpq, ((1, 0), (0, 1)), spec)
    subs = (Lp.p if isinstance(Lp, Uhf) else None, Lq.p if isinstance(Lq, Uhf) else None)
    ns = (p if isinstance(p, int) else None, q if isinstance(q, int) else None)

    def check(f: StepFunction):
        for end, L, sub, n in (("0", Lp, subs[0], ns[0]), ("1", Lq, subs[1], ns[1])):
            v = f(end)
            if not member_p(v, sub, n):
                return False, f"f({end})={Mpq.format(v)} ∉ {L.describe()}"
        return True, "all endpoint constraints hold"

    def left_of(f):
        return (Lp.check(f("0")), Lq.check(f("1")))

    def domain(L):
        return lambda v: L.contains(v)

    return _endpoint_descriptor(P, spec, left_of, check, {"0": domain(Lp), "1": domain(Lq)})


def _is_permutation(P) -> bool:
    n = len(P)
    return (all(len(r) == n for r in P) and all(sorted(r) == [0] * (n - 1) + [1] for r in P)
            and all(sorted(c) == [0] * (n - 1) + [1] for c in zip(*P)))


def mapping_torus(M: ScalarSemigroup, perm) -> Descriptor:
    perm = tuple(tuple(int(a) for a in row) for row in perm)
    k = M.arity if isinstance(M, DirectSum) else 1
    if len(perm) != k or not _is_permutation(perm):
        raise InvalidSpec(f"automorphism must be a {k}x{k} permutation matrix")
    eye = tuple(tuple(int(i == j) for j in range(k)) for i in range(k))
    spec = {"kind": "mapping_torus", "M": M.describe(), "P": [list(r) for r in perm]}
    P = _endpoint_pullback(f"T({M.describe()},{[list(r) for r in perm]})", M, M, eye + perm, spec)
    auto = MatrixMap(perm, M, M)

    def check(f: StepFunction):
        a, b = f("0"), f("1")
        image = auto.apply(a)
        if image != b:
            return False, f"f(1)={M.format(b)} ≠ φ(f(0))={M.format(image)}"
        return True, "f(1) = φ(f(0))"

    return _endpoint_descriptor(P, spec, lambda f: f("0"), check)


def graph_algebra(space: Space, M: ScalarSemigroup) -> Descriptor:
    """Vertex values glued to one interval algebra carrying every edge."""
    spec = {"kind": "graph_algebra"}
    if not space.edges:
        return lsc_algebra(space, M)
    P = graph_pullback(space, M)
    S = Lsc(space, M)

    def to_element(f):
        return to_pullback(P, space, S.check(f))

    return Descriptor(P.name, P, spec, space, M, to_element,
                      lambda x: from_pullback(space, M, x), _lsc_candidate(space, M),
                      lambda f: (True, "every step function on the graph"))


def graph_pullback(space: Space, M: ScalarSemigroup) -> Pullback:
    m, nv = len(space.edges), len(space.vertices)
    left = power(M, nv)
    I = Space.interval()
    ev = Evaluation(I, power(M, m), ("0", "1"))
    rows = []
    for end in (1, 2):
        for _, s, t in space.edges:
            v = s if end == 1 else t
            rows.append(tuple(int(space.vertex_index[v] == j) for j in range(nv)))
    phi = MatrixMap(tuple(rows), left, ev.target)
    return Pullback(left, Lsc(I, power(M, m)), ev.target, phi, ev, True,
                    f"Lsc(I,{M.describe()}^{m}) ⊕ Lsc(V,{M.describe()}) over {space.describe()}")


def to_pullback(P: Pullback, space: Space, f: StepFunction) -> PullbackElement:
    br = sorted(set().union(*f.layout.breaks))
    I = P.right.space
    names = [e[0] for e in space.edges]

    def value(p):
        if p == "0":
            return tuple(f(s) for _, s, _ in space.edges)
        if p == "1":
            return tuple(f(t) for _, _, t in space.edges)
        return tuple(f((n, p[1])) for n in names)

    right = from_layout(P.right.M, tabulate(I, [br], value))
    return P.check(PullbackElement(tuple(f(v) for v in space.vertices), right))


def from_pullback(space: Space, M: ScalarSemigroup, x: PullbackElement) -> StepFunction:
    g = x.right
    br = g.layout.breaks[0]

    def value(p):
        if isinstance(p, str):
            return x.left[space.vertex_index[p]]
        return g(p[1])[space.edge_index[p[0]]]

    return from_layout(M, tabulate(space, [br] * len(space.edges), value))


@dataclass
class RshStage:
    space: Space
    Y: Any                 # tuple of points of ``space`` or "all"
    A: tuple
    source_points: tuple = ()


def rsh_chain(space0: Space, stages: list[RshStage], M: ScalarSemigroup = NBAR) -> Descriptor:
    """Fold pullbacks left to right; stage i glues Lsc(X_i, M) to the previous algebra along
    A_i applied to point values of the previous top space."""
    S: CuSemigroup = Lsc(space0, M)
    prev_space = space0
    for i, st in enumerate(stages, 1):
        A = tuple(tuple(int(a) for a in row) for row in st.A)
        to_top = [Projection(S)] if isinstance(S, Pullback) else []
        right = Lsc(st.space, M)
        if st.Y == "all":
            if st.space != prev_space:
                raise InvalidSpec(f"stage {i}: Y = X needs the same space as the previous stage")
            k = M.arity if isinstance(M, DirectSum) else 1
            if len(A) != k or any(len(r) != k for r in A):
                raise InvalidSpec(f"stage {i}: matrix must be {k}x{k}")
            base = right
            pi = Identity(right)
            phi_tail = [PointwiseMatrix(MatrixMap(A, M, M), st.space)]
        else:
            ys = tuple(st.Y)
            if not ys:
                raise InvalidSpec(f"stage {i}: Y must be non-empty")
            pi = Evaluation(st.space, M, ys)
            base = pi.target
            src = Evaluation(prev_space, M, tuple(st.source_points))
            try:
                phi_tail = [src, MatrixMap(A, src.target, base)]
            except ValueError as exc:
                raise InvalidSpec(f"stage {i}: {exc}") from exc
        phi = Composition(tuple(to_top + phi_tail)) if len(to_top + phi_tail) > 1 else phi_tail[0]
        S = Pullback(S, right, base, phi, pi, True, f"rsh stage {i}")
        prev_space = st.space
    spec = {"kind": "rsh"}
    return Descriptor(S.describe() if not isinstance(S, Pullback) else f"rsh({len(stages)} stages)",
                      S, spec)


@dataclass(frozen=True)
class TwoDimDimDrop:
    """Point constraints f(x_i) ∈ C_{p_i} only; no step functions on 2-complexes."""

    constraints: tuple  # (label, Supernatural)

    @property
    def ambient(self) -> Supernatural:
        acc = self.constraints[0][1]
        for _, p in self.constraints[1:]:
            acc = acc.times(p)
        return acc


def two_dim_dimension_drop(constraints: dict) -> Descriptor:
    cons = tuple((str(k), Supernatural.of(v)) for k, v in constraints.items())
    if not cons:
        raise InvalidSpec("at least one point constraint is required")
    marker = TwoDimDimDrop(cons)
    amb = Uhf(marker.ambient) if marker.ambient.infinite_type else None
    spec = {"kind": "two_dim_dimension_drop"}

    def parse_candidate(text):
        out = {}
        for part in text.split(";"):
            if part.strip():
                label, _, val = part.partition(":")
                out[label.strip()] = amb.parse(val) if amb else Fraction(val.strip())
        return out

    def check(values: dict):
        for label, p in cons:
            if label not in values:
                return False, f"no value given at {label}"
            v = values[label]
            ok = (uhf_membership(p, marker.ambient, v) if amb else
                  v is INF or p.divides(Fraction(v).denominator))
            if not ok:
                shown = amb.format(v) if amb else format_rational(Fraction(v))
                return False, f"f({label})={shown} ∉ C_{p}"
        return True, "all point constraints hold"

    return Descriptor("two-dimensional dimension drop (point constraints)", None, spec,
                      parse_candidate=parse_candidate, check_candidate=check)


# ---------------------------------------------------------------- generic operations


def member(desc: Descriptor, candidate) -> tuple[bool, str]:
    if desc.check_candidate is not None and desc.to_element is None:
        return desc.check_candidate(candidate)
    try:
        if desc.check_candidate is not None:
            ok, reason = desc.check_candidate(candidate)
            if not ok:
                return False, reason
        desc.element(candidate)
    except ElementNotInSemigroup as exc:
        return False, str(exc)
    except NotLowerSemicontinuous as exc:
        return False, str(exc)
    return True, "member"


def enumerate_step_functions(space: Space, M: ScalarSemigroup, values: list, breakpoints=(),
                             vertex_domains: dict | None = None):
    """Every lower semicontinuous canonical step function with breakpoints among
    ``breakpoints`` (on every edge) and values in ``values``; ``vertex_domains`` optionally
    restricts the value at a vertex by a predicate."""
    vertex_domains = vertex_domains or {}
    seen = set()
    subsets = [c for r in range(len(breakpoints) + 1)
               for c in itertools.combinations(sorted(breakpoints), r)]
    for br_choice in itertools.product(subsets, repeat=len(space.edges)):
        sizes = [len(br) + 1 for br in br_choice]
        for opens in itertools.product(values, repeat=sum(sizes)):
            rows, pos = [], 0
            for size in sizes:
                rows.append(opens[pos:pos + size])
                pos += size
            # candidate values for each point cell: at most the adjacent open values
            slots = []
            for k, row in enumerate(rows):
                for i in range(len(row) - 1):
                    slots.append([v for v in values
                                  if M.leq(v, row[i]) and M.leq(v, row[i + 1])])
            for vname, inc in zip(space.vertices, space.incidence):
                nbs = [rows[k][0] if end == 0 else rows[k][-1] for k, end in inc]
                ok = vertex_domains.get(vname, lambda v: True)
                slots.append([v for v in values if ok(v) and all(M.leq(v, nb) for nb in nbs)])
            for choice in itertools.product(*slots):
                it = iter(choice)
                cells = []
                for row in rows:
                    cs = [row[0]]
                    for i in range(1, len(row)):
                        cs += [next(it), row[i]]
                    cells.append(tuple(cs))
                vv = tuple(next(it) for _ in space.vertices)
                lay = Layout(space, vv, tuple(br_choice), tuple(cells)).canonical()
                if lay in seen:
                    continue
                seen.add(lay)
                yield StepFunction(M, lay)


def compact_elements(desc: Descriptor, bound: int, breakpoints=(Fraction(1, 2),),
                     values: list | None = None) -> list:
    """Candidates x (up to the value bound) with x << x, found by exhaustive search."""
    S = desc.semigroup
    if desc.candidate_space is None:
        if isinstance(S, ScalarSemigroup):
            return [v for v in (values or S.grid(bound)) if S.way_below(v, v)]
        raise InvalidSpec(f"{desc.name} has no enumerable candidates")
    M = desc.candidate_M
    if not desc.candidate_space.connected:
        raise InvalidSpec("compact element search needs a connected space")
    vals = values if values is not None else M.grid(bound)
    out = []
    for f in enumerate_step_functions(desc.candidate_space, M, vals, breakpoints,
                                      desc.vertex_domains):
        if desc.check_candidate is not None and not desc.check_candidate(f)[0]:
            continue
        try:
            x = desc.element(f)
        except ElementNotInSemigroup:
            continue
        if S.way_below(x, x):
            out.append(f)
    return out


# ---------------------------------------------------------------- graph decomposition


@dataclass
class IsoReport:
    space: str
    M: str
    trials: int
    seed: int
    checks: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def summary(self):
        return (f"{self.space} over {self.M}: {self.trials} samples, {self.checks} checks, "
                f"{len(self.violations)} violations")


def graph_iso_check(space: Space, M: ScalarSemigroup, sampler=None, trials: int = 200,
                    seed: int = 0) -> IsoReport:
    """Translate sampled elements between Lsc(X, M) and the interval/vertex pullback and
    check that translation is additive, reflects and preserves order and way-below, and is
    onto at the sampled pullback elements."""
    report = IsoReport(space.describe(), M.describe(), trials, seed)
    S = Lsc(space, M)
    sample = sampler or S.sample

    def law(name, ok, *witness):
        report.checks += 1
        if not ok:
            report.violations.append((name, witness))

    if not space.edges:
        for trial in range(trials):
            rng = random.Random(f"{seed}:{trial}")
            f = sample(rng)
            law("identity", S.check(f) == f, f)
        return report
    P = graph_pullback(space, M)
    for trial in range(trials):
        rng = random.Random(f"{seed}:{trial}")
        f, g = sample(rng), sample(rng)
        tf, tg = to_pullback(P, space, f), to_pullback(P, space, g)
        law("roundtrip", from_pullback(space, M, tf) == f, f)
        law("additive", to_pullback(P, space, S.add(f, g)) == P.add(tf, tg), f, g)
        law("order", S.leq(f, g) == P.leq(tf, tg), f, g)
        law("order", S.leq(g, f) == P.leq(tg, tf), g, f)
        h = S.approximant(f, rng.randint(1, 3))
        th = to_pullback(P, space, h)
        law("way-below", way_below_step(h, f) == pb_way_below(P, th, tf).value, h, f)
        law("way-below", way_below_step(f, g) == pb_way_below(P, tf, tg).value, f, g)
        y = P.sample(rng)
        law("onto", to_pullback(P, space, from_pullback(space, M, y)) == y, y)
    return report


# ---------------------------------------------------------------- spec files


def _space_from_json(obj) -> Space:
    if obj in (None, "interval", "[0,1]"):
        return Space.interval()
    if obj == "loop":
        return Space.loop()
    if obj == "theta":
        return Space.theta()
    if isinstance(obj, str) and obj.startswith("cycle"):
        return Space.cycle(int(obj[5:] or 3))
    if isinstance(obj, dict):
        kind = obj.get("kind")
        try:
            if kind == "interval":
                return Space.interval()
            if kind == "discrete":
                return Space.discrete(obj["points"])
            if kind == "graph":
                return Space.graph(obj["vertices"], [tuple(e) for e in obj["edges"]])
        except (KeyError, ValueError, TypeError) as exc:
            raise InvalidSpec(f"bad space: {exc}") from exc
    raise InvalidSpec(f"unknown space {obj!r}")


def _scalar(obj) -> ScalarSemigroup:
    try:
        return scalar_from_name(str(obj or "nbar"))
    except ParseError as exc:
        raise InvalidSpec(str(exc)) from exc


def _super_or_int(v):
    if isinstance(v, int):
        return v
    v = str(v)
    return int(v) if v.isdigit() else v


def build(spec: dict) -> Descriptor:
    """The descriptor named by a spec dictionary (see the README for the schema)."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise InvalidSpec("a spec needs a 'kind' field")
    kind = spec["kind"]
    try:
        if kind == "scalar":
            return scalar_algebra(_scalar(spec.get("M")))
        if kind == "interval":
            return interval_algebra(_scalar(spec.get("M")))
        if kind == "lsc":
            return lsc_algebra(_space_from_json(spec.get("space")), _scalar(spec.get("M")))
        if kind == "graph_algebra":
            return graph_algebra(_space_from_json(spec.get("space")), _scalar(spec.get("M")))
        if kind == "nccw1":
            return nccw1(int(spec["r"]), int(spec["s"]), spec["A"])
        if kind == "dimension_drop":
            return dimension_drop(_super_or_int(spec["p"]), _super_or_int(spec["q"]))
        if kind == "mapping_torus":
            return mapping_torus(_scalar(spec.get("M")), spec["P"])
        if kind == "rsh":
            stages = [RshStage(_space_from_json(st.get("space")),
                               "all" if st.get("Y") == "all" else tuple(_points(st.get("Y", []))),
                               tuple(tuple(r) for r in st["A"]), tuple(_points(st.get("from", []))))
                      for st in spec.get("stages", [])]
            return rsh_chain(_space_from_json(spec.get("base_space")), stages, _scalar(spec.get("M")))
        if kind == "two_dim_dimension_drop":
            return two_dim_dimension_drop(spec["constraints"])
    except KeyError as exc:
        raise InvalidSpec(f"{kind}: missing field {exc}") from exc
    except (ValueError, TypeError) as exc:
        if isinstance(exc, InvalidSpec):
            raise
        raise InvalidSpec(f"{kind}: {exc}") from exc
    raise InvalidSpec(f"unknown kind {kind!r}")


def _points(items):
    out = []
    for p in items:
        if isinstance(p, list):
            out.append((p[0], Fraction(str(p[1]))))
        elif isinstance(p, (int, float)) and not isinstance(p, bool):
            raise InvalidSpec("write interval coordinates as strings like \"1/2\"")
        else:
            out.append(str(p))
    return out


def load_spec(text: str, source: str = "<spec>") -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, source, exc.lineno) from exc


PRESETS: dict[str, dict] = {
    "nbar": {"kind": "scalar", "M": "nbar"},
    "nbar2": {"kind": "scalar", "M": "nbar^2"},
    "nbar3": {"kind": "scalar", "M": "nbar^3"},
    "c2": {"kind": "scalar", "M": "C_2^inf"},
    "c6": {"kind": "scalar", "M": "C_6^inf"},
    "lsc-interval-nbar": {"kind": "interval", "M": "nbar"},
    "lsc-interval-nbar2": {"kind": "interval", "M": "nbar^2"},
    "lsc-interval-c2": {"kind": "interval", "M": "C_2^inf"},
    "lsc-loop-nbar2": {"kind": "lsc", "space": "loop", "M": "nbar^2"},
    "loop-graph-nbar": {"kind": "graph_algebra", "space": "loop", "M": "nbar"},
    "theta-graph-nbar": {"kind": "graph_algebra", "space": "theta", "M": "nbar"},
    "zdd23": {"kind": "dimension_drop", "p": 2, "q": 3},
    "zdd-2inf-3inf": {"kind": "dimension_drop", "p": "2^inf", "q": "3^inf"},
    "nccw-11": {"kind": "nccw1", "r": 1, "s": 1, "A": [[1], [1]]},
    "torus-swap": {"kind": "mapping_torus", "M": "nbar^2", "P": [[0, 1], [1, 0]]},
}


def resolve(spec_arg: str) -> Descriptor:
    """A preset name, a path to a JSON spec file, or inline JSON."""
    if spec_arg in PRESETS:
        return build(PRESETS[spec_arg])
    text = spec_arg
    source = "<inline>"
    if not spec_arg.lstrip().startswith("{"):
        try:
            with open(spec_arg, encoding="utf-8") as fh:
                text = fh.read()
            source = spec_arg
        except OSError as exc:
            raise InvalidSpec(f"unknown preset or unreadable file {spec_arg!r}") from exc
    return build(load_spec(text, source))
