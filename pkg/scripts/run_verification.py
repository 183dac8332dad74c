#!/usr/bin/env python3
"""Run the full verification grid and print one line per check.

Covers the four canonical angles at every time up to --t-max: the amplitude
mirror and copy identities, the probability copy, closed form versus
simulation, the inner-state split, limit-density normalization, and the KS
convergence diagnostic. Exits 1 if any check fails.
"""
import argparse

from qwalk.harness import canonical_coins, run_checks


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t-max", type=int, default=200)
    ap.add_argument("--quiet", action="store_true",
                    help="print failures and the summary only")
    args = ap.parse_args()

    ts = list(range(1, args.t_max + 1))
    report = run_checks("all", canonical_coins(), ts)
    for check in report.checks:
        if not args.quiet or not check.passed:
            print(check.line())
    n_fail = len(report.failures())
    print(f"{len(report.checks)} checks, {n_fail} failures")
    return 0 if report.all_passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
