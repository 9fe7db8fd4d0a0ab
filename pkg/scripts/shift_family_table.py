#!/usr/bin/env python3
"""Certify every shift code up to a given d and tabulate which foldings are unitary.

For even d the difference k1 - k2 is never a unit, so the P1 folding fails.
"""

import argparse
import itertools
import math

from triptych.codespace import from_tensor, shift_code, shift_is_perfect
from triptych.verifier import certify


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-d", type=int, default=8)
    ap.add_argument("--secrets", type=int, default=4)
    args = ap.parse_args()

    print(f"{'d':>3} {'k1':>3} {'k2':>3}  {'verdict':<10} {'I3 (bits)':>10}  unitary(P1,P2,P3)")
    for d in range(3, args.max_d + 1):
        for k1, k2 in itertools.permutations(range(1, d), 2):
            if math.gcd(k1, d) != 1 or math.gcd(k2, d) != 1:
                continue
            rep = certify(from_tensor(shift_code(d, k1, k2)), n_secrets=args.secrets)
            flags = "".join("U" if r.is_unitary else "-" for r in rep.multiunitary)
            assert (rep.verdict == "perfect") == shift_is_perfect(d, k1, k2)
            print(f"{d:>3} {k1:>3} {k2:>3}  {rep.verdict:<10} {rep.i3_value:>10.5f}  {flags}")


if __name__ == "__main__":
    main()
