#!/usr/bin/env python3
"""Haar scrambler sweep: writes a CSV of per-trial norms and I3 + 2S(R), prints the summary."""

import argparse
import json
import math

from triptych.cli import parse_d_range
from triptych.random_lab import i3_sweep, write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d", type=parse_d_range, default=parse_d_range("2..8"))
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--secrets", type=int, default=20)
    ap.add_argument("--mu", type=float, default=3.0)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="i3_sweep.csv")
    args = ap.parse_args()

    records, summary = i3_sweep(args.d, args.trials, args.secrets, args.seed, args.mu,
                                math.exp(-args.mu), args.workers)
    write_csv(records, args.out)
    print(json.dumps(summary.to_json(), indent=2))
    print(f"# {len(records)} rows -> {args.out}")


if __name__ == "__main__":
    main()
