#!/usr/bin/env python3
"""Empirical E||g|| / E||u|| for Ginibre vs Haar matrices against [sqrt(n)/8, 4 sqrt(n)]."""

import argparse

from triptych.random_lab import gaussian_unitary_comparison


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[4, 8, 16, 32, 64])
    ap.add_argument("--trials", type=int, default=300)
    ap.add_argument("--seminorm", choices=["operator", "triple-max"], default="operator")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'n':>4} {'ratio':>9} {'ci_low':>9} {'ci_high':>9} {'lower':>8} {'upper':>8}  inside")
    for n in args.n:
        s = gaussian_unitary_comparison(n, args.trials, args.seminorm, args.seed)
        print(f"{n:>4} {s.ratio:>9.4f} {s.ci_low:>9.4f} {s.ci_high:>9.4f} "
              f"{s.lower_bracket:>8.3f} {s.upper_bracket:>8.3f}  {s.inside}")


if __name__ == "__main__":
    main()
