#!/usr/bin/env python3
"""Search for secrets with I3 > 0 on a few code spaces.

A positive value would be a counterexample to I3 <= 0 on that code space.
Nothing is proved by a negative maximum.
"""

import argparse

from triptych.codespace import from_tensor, permutation_code, shift_code, vip_code
from triptych.random_lab import sample_haar_unitary, scrambler_tensor, trial_seed
from triptych.verifier import monogamy_probe


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    codes = {
        "shift(3,1,2)": shift_code(3, 1, 2),
        "shift(5,2,3)": shift_code(5, 2, 3),
        "vip(2)": vip_code(2),
        "vip(4)": vip_code(4),
        "perm d=2 (id, swap, swap)": permutation_code(2, [[0, 1], [1, 0], [1, 0]]),
        "haar d=3": scrambler_tensor(sample_haar_unitary(9, trial_seed(args.seed, 3, 0)), 3),
    }
    print(f"{'code':<28} {'max I3 (bits)':>14}  argmax")
    for name, t in codes.items():
        res = monogamy_probe(from_tensor(t), args.samples, args.seed)
        print(f"{name:<28} {res.max_i3:>14.6f}  {res.argmax_kind}")


if __name__ == "__main__":
    main()
