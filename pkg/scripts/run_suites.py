#!/usr/bin/env python3
"""Run named randomized/exhaustive suites with a fixed seed and print one line each.

    python scripts/run_suites.py                 # all suites, seed 0
    python scripts/run_suites.py chi-oracle cancellation --seed 3
"""
import argparse
import sys

from cuntz.suites import SUITES


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("suites", nargs="*", help=f"suite names (default: all): {', '.join(SUITES)}")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--show", type=int, default=3, help="counterexamples to print per failing suite")
    args = ap.parse_args(argv)
    unknown = [s for s in args.suites if s not in SUITES]
    if unknown:
        ap.error(f"unknown suites: {', '.join(unknown)}")
    failed = 0
    for name in args.suites or list(SUITES):
        res = SUITES[name](seed=args.seed)
        print(res.line(), flush=True)
        if not res.ok:
            failed += 1
            for c in res.counterexamples[:args.show]:
                print(f"    {c}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
