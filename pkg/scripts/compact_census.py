#!/usr/bin/env python3
"""List the compact elements (x << x) of catalog algebras by exhaustive search.

    python scripts/compact_census.py zdd23 lsc-interval-nbar --bound 3
"""
import argparse
import sys
from fractions import Fraction

from cuntz.catalog import PRESETS, compact_elements, resolve


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("specs", nargs="+", help=f"presets ({', '.join(PRESETS)}), files or inline JSON")
    ap.add_argument("--bound", type=int, default=2)
    ap.add_argument("--breakpoints", default="1/2",
                    help="comma-separated breakpoints shared by every edge")
    args = ap.parse_args(argv)
    bps = tuple(Fraction(b) for b in args.breakpoints.split(",") if b.strip())
    for spec in args.specs:
        d = resolve(spec)
        found = compact_elements(d, args.bound, bps)
        shown = ", ".join(sorted((d.format(x) if not hasattr(x, "layout") else str(x)) for x in found))
        print(f"{d.name} (bound {args.bound}): {len(found)} compact: {shown}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
