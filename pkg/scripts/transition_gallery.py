#!/usr/bin/env python3
"""Print the ladder of chart-transition functions for a defining polynomial.

For each n the smallest legal number of sum terms is m = deg(P)//n + 1;
larger m only appends geometric-tail terms.  Handy for eyeballing how the
denominators trade a-depth against b-depth as n drops.

    python3 scripts/transition_gallery.py --P "z^2" --max-n 3
"""

import argparse
import sys

sys.path.insert(0, "src")

from a2bundle.exprio import parse, to_expr
from a2bundle.fibration import (
    PVAR,
    FibrationSpec,
    closed_form_m1,
    closed_form_m2,
    minimal_m,
    transition_formula,
)
from a2bundle.fields import QQ


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--P", default="z^2")
    ap.add_argument("--max-n", type=int, default=3)
    ap.add_argument("--extra-m", type=int, default=1,
                    help="how many non-minimal m to show per n")
    args = ap.parse_args()

    P = parse(args.P, PVAR, QQ)
    print(f"P = {to_expr(P)}  (degree {P.degree_in('z')})\n")
    for n in range(args.max_n, 0, -1):
        spec = FibrationSpec(P, n)
        m0 = minimal_m(spec)
        for m in range(m0, m0 + 1 + args.extra_m):
            f = transition_formula(spec, m)
            tag = "minimal" if m == m0 else "padded"
            print(f"n={n} m={m} ({tag}, {len(f.terms)} terms)")
            print(f"    {to_expr(f)}")
        if m0 == 1:
            assert transition_formula(spec, 1) == closed_form_m1(spec)
        if 2 * n > P.degree_in("z"):
            assert transition_formula(spec, 2) == closed_form_m2(spec)
        print()


if __name__ == "__main__":
    main()
