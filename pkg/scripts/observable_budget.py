#!/usr/bin/env python3
"""Measurement budget table: how many observables pin down low-rank states.

For each dimension, compare full tomography (d^2 - 1 observables) against
the constructed sets that determine any pure state among all states (5d - 7)
and any rank <= q state (q = 2, 3 where defined).  Sanity-samples the
two-sided signature property of each complement family along the way.
"""

import argparse

from udalab.construction import complement_family, family_signature_check, uda_observables


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dmax", type=int, default=12)
    parser.add_argument("--samples", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    header = f"{'d':>3} {'full':>6} {'pure':>6} {'rank<=2':>8} {'rank<=3':>8} {'margin':>10}"
    print(header)
    print("-" * len(header))
    for d in range(3, args.dmax + 1):
        full = d * d - 1
        pure = len(uda_observables(d, 1))
        rank2 = len(uda_observables(d, 2)) if d >= 6 else None
        rank3 = len(uda_observables(d, 3)) if d >= 8 else None
        family = complement_family(d, 1)
        margin = ""
        if len(family):
            report = family_signature_check(family, samples=args.samples, seed=args.seed)
            if not report.passed:
                raise SystemExit(f"signature property violated at d={d}")
            margin = f"{report.worst_margin:.2e}"
        print(f"{d:>3} {full:>6} {pure:>6} "
              f"{rank2 if rank2 is not None else '-':>8} "
              f"{rank3 if rank3 is not None else '-':>8} {margin:>10}")


if __name__ == "__main__":
    main()
