#!/usr/bin/env python3
"""Compare the C_p order and way-below tables with the stage-sequence limit oracle.

    python scripts/uhf_table.py --p "2^inf*3^inf" --numerators 64 --exponents 6 6
"""
import argparse
import sys

from cuntz.limits import uhf_table_agreement, uhf_value_grid
from cuntz.scalars import Supernatural


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--p", default="2^inf*3^inf", help="supernatural number of infinite type")
    ap.add_argument("--numerators", type=int, default=64)
    ap.add_argument("--exponents", type=int, nargs="+", default=[6, 6],
                    help="denominator exponent per prime of p, in increasing prime order")
    ap.add_argument("--depth", type=int, default=None, help="stage depth (default: max exponent + 2)")
    args = ap.parse_args(argv)
    p = Supernatural.of(args.p)
    primes = [q for q, _ in p.exponents]
    if len(args.exponents) != len(primes):
        ap.error(f"need one exponent per prime of {p}: {primes}")
    dens = tuple(zip(primes, args.exponents))
    depth = args.depth if args.depth is not None else max(args.exponents) + 2
    values = uhf_value_grid(args.numerators, dens)
    rep = uhf_table_agreement(p, values, depth)
    print(f"C_{p}, depth {depth}: {rep.summary()}")
    for a, b in (rep.leq_disagreements + rep.wb_disagreements)[:10]:
        print(f"    disagreement at ({a}, {b})")
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
