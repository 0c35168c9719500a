"""Command-line front end.

Exit codes: 0 answered true (or succeeded), 1 answered false, 2 unknown at the requested
depth, 64 usage or parse error.
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .catalog import PRESETS, Descriptor, compact_elements, graph_iso_check, member, resolve
from .core import DEFAULT_DEPTH, ThreeValued, check_cu_axioms, limit_leq, three
from .core import way_below as core_way_below
from .errors import CuError, ElementNotInSemigroup, NotLowerSemicontinuous, ParseError
from .limits import uhf_stage_system
from .pullback import Pullback
from .scalars import INF, Uhf, parse_rational
from .suites import SUITES

EXIT_TRUE, EXIT_FALSE, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2, 64
VERBS = ("leq", "waybelow", "add", "member", "compacts", "approx", "check-axioms", "graph-iso",
         "limit-leq", "suite")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cuntz", description="Decide order, way-below and membership in "
                "ordered semigroups of step functions and pullbacks.")
    p.add_argument("--spec", help="preset name, JSON spec file, or inline JSON "
                   f"(presets: {', '.join(PRESETS)})")
    p.add_argument("--query", required=True, choices=VERBS)
    p.add_argument("--lhs", help="left operand (element text, x@stage, or suite name)")
    p.add_argument("--rhs", help="right operand")
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bound", type=int, default=4, help="value bound for compacts")
    p.add_argument("--count", type=int, default=4, help="number of approximants to print")
    p.add_argument("--format", choices=("text", "machine"), default="text")
    return p


class Report:
    """Collects key/value lines; text and machine renderings differ only in layout."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.items: list[tuple[str, str]] = []

    def add(self, key: str, value) -> None:
        self.items.append((key, str(value)))

    def render(self, answer: str) -> str:
        if self.fmt == "machine":
            lines = [f"{k}={v}" for k, v in self.items] + [f"answer={answer}"]
        else:
            lines = [f"{k}: {v}" for k, v in self.items] + [f"answer: {answer}"]
        return "\n".join(lines) + "\n"


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise UsageError(f"--query {args.query} needs --{n}")


def _semigroup(desc: Descriptor):
    if desc.semigroup is None:
        raise UsageError(f"{desc.name} supports only member queries")
    return desc.semigroup


def _exit_for(answer: ThreeValued) -> tuple[int, str]:
    if answer.value is True:
        return EXIT_TRUE, "true"
    if answer.value is False:
        return EXIT_FALSE, "false"
    return EXIT_UNKNOWN, f"unknown@{answer.depth}"


def _stage_operand(text: str):
    value, at, stage = text.rpartition("@")
    if not at:
        raise ParseError(f"expected value@stage, got {text!r}")
    try:
        k = int(stage)
    except ValueError:
        raise ParseError(f"bad stage index in {text!r}") from None
    v = value.strip()
    if v in ("inf", "∞"):
        return INF, k
    q = parse_rational(v)
    if q.denominator != 1 or q < 0:
        raise ParseError(f"stage values are extended naturals, got {v!r}")
    return int(q), k


def execute(args, rep: Report) -> ThreeValued:
    if args.query == "suite":
        _need(args, "lhs")
        if args.lhs not in SUITES:
            raise UsageError(f"unknown suite {args.lhs!r}; choose from {', '.join(SUITES)}")
        res = SUITES[args.lhs](seed=args.seed)
        rep.add("suite", res.name)
        rep.add("seed", args.seed)
        rep.add("detail", res.detail)
        for c in res.counterexamples[:5]:
            rep.add("counterexample", c)
        return three(res.ok)

    _need(args, "spec")
    desc = resolve(args.spec)
    rep.add("semigroup", desc.name)
    q = args.query

    if q == "member":
        _need(args, "lhs")
        try:
            if desc.parse_candidate is not None:
                ok, reason = member(desc, desc.parse_candidate(args.lhs))
            else:
                S = _semigroup(desc)
                ok, reason = member(desc, S.check(S.parse(args.lhs)))
        except (ElementNotInSemigroup, NotLowerSemicontinuous) as exc:
            ok, reason = False, str(exc)
        rep.add("reason", reason)
        return three(ok)

    S = _semigroup(desc)
    if q in ("leq", "waybelow", "add"):
        _need(args, "lhs", "rhs")
        a, b = desc.parse(args.lhs), desc.parse(args.rhs)
        rep.add("lhs", desc.format(a))
        rep.add("rhs", desc.format(b))
        if q == "leq":
            return three(S.leq(a, b))
        if q == "waybelow":
            return core_way_below(S, a, b, args.depth)
        rep.add("sum", desc.format(S.check(S.add(a, b))))
        return three(True)
    if q == "approx":
        _need(args, "lhs")
        x = desc.parse(args.lhs)
        rep.add("element", desc.format(x))
        for k in range(1, args.count + 1):
            rep.add(f"approximant_{k}", desc.format(S.approximant(x, k)))
        return three(True)
    if q == "compacts":
        found = compact_elements(desc, args.bound)
        rep.add("bound", args.bound)
        rep.add("count", len(found))
        for f in sorted(found, key=str):
            rep.add("compact", str(f))
        return three(True)
    if q == "check-axioms":
        r = check_cu_axioms(S, trials=args.trials, seed=args.seed, depth=args.depth)
        rep.add("trials", args.trials)
        rep.add("seed", args.seed)
        rep.add("checks", sum(r.checks.values()))
        rep.add("violations", len(r.violations))
        for v in r.violations[:5]:
            rep.add("violation", v)
        return three(r.ok)
    if q == "graph-iso":
        space = desc.candidate_space or getattr(S, "space", None)
        M = desc.candidate_M or getattr(S, "M", None)
        if isinstance(S, Pullback) and desc.spec.get("kind") != "graph_algebra":
            raise UsageError("graph-iso needs a graph or lsc spec")
        if space is None or M is None:
            raise UsageError("graph-iso needs a graph or lsc spec")
        r = graph_iso_check(space, M, trials=args.trials, seed=args.seed)
        rep.add("space", r.space)
        rep.add("checks", r.checks)
        rep.add("violations", len(r.violations))
        return three(r.ok)
    if q == "limit-leq":
        _need(args, "lhs", "rhs")
        if not isinstance(S, Uhf):
            raise UsageError("limit-leq needs a C_p spec such as c2 or c6")
        L = uhf_stage_system(S.p)
        (x, i), (y, j) = _stage_operand(args.lhs), _stage_operand(args.rhs)
        rep.add("system", L.name)
        return limit_leq(L, x, i, y, j, args.depth)
    raise UsageError(f"unsupported query {q}")  # pragma: no cover


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_TRUE if exc.code in (0, None) else EXIT_USAGE
    rep = Report(args.format)
    try:
        answer = execute(args, rep)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except ParseError as exc:
        err.write(f"parse error: {exc}\n")
        return EXIT_USAGE
    except CuError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    code, text = _exit_for(answer)
    out.write(rep.render(text))
    return code


def main() -> None:
    sys.exit(run())
