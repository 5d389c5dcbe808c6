#!/usr/bin/env python3
"""Scan small (P, n) pairs for the stability exponent.

The shift y += x^s*t conjugated through the coordinate word becomes a
polynomial automorphism of 5-space once s is large enough; this prints the
smallest such s per pair. The value is not monotone in deg(P) alone, which
is why it is worth tabulating.

    python3 scripts/find_stable_exponent.py --max-n 3 --s-max 12
"""

import argparse
import sys
import time

sys.path.insert(0, "src")

from a2bundle.errors import NoPolynomialSInRange
from a2bundle.exprio import parse
from a2bundle.fibration import PVAR, FibrationSpec, stable_variable
from a2bundle.fields import QQ


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--polys", default="z^2,z^2 + z,z^3 + 2*z",
                    help="comma-separated defining polynomials")
    ap.add_argument("--max-n", type=int, default=3)
    ap.add_argument("--s-max", type=int, default=12)
    args = ap.parse_args()

    print(f"{'P':<12} {'n':>2} {'s':>3}   time")
    for p_text in args.polys.split(","):
        p_text = p_text.strip()
        P = parse(p_text, PVAR, QQ)
        for n in range(1, args.max_n + 1):
            t0 = time.perf_counter()
            try:
                s, _word = stable_variable(FibrationSpec(P, n),
                                           s_max=args.s_max)
                cell = f"{s:>3}"
            except NoPolynomialSInRange:
                cell = "  -"
            dt = time.perf_counter() - t0
            print(f"{p_text:<12} {n:>2} {cell}   {dt:5.2f}s")


if __name__ == "__main__":
    main()
