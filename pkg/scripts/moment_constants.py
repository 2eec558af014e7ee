#!/usr/bin/env python3
"""Moment-comparison constants C_p = (p/(p+1)) (sqrt(3) p^2/(p-1))^(1/(p+1)).

Prints the sequence on a grid, confirms it decreases toward 1, and runs
the centered moment suite on the standard families.
"""

import argparse
import sys

from covineq import (
    check_logconcave_moments,
    check_moment_comparison,
    check_moment_growth,
    check_psi1_bound,
    cp_sequence,
    measures,
)

PASS = 0
FAIL = 0


def check(name, cond):
    global PASS, FAIL
    if cond:
        PASS += 1
        print(f"  PASS  {name}")
    else:
        FAIL += 1
        print(f"  FAIL  {name}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p-max", type=float, default=1000.0)
    args = ap.parse_args()

    grid = [2, 3, 5, 10, 30, 100, args.p_max]
    cs = cp_sequence(grid)
    print("p      C_p")
    for p, c in zip(grid, cs):
        print(f"{p:<6g} {c:.6f}")
    check("C_2 = 1.27091 (5 decimals)", abs(cs[0] - 1.27091) < 1e-5)
    check("C_p strictly decreasing", all(a > b for a, b in zip(cs, cs[1:])))
    check(f"C_{args.p_max:g} < 1.01", cs[-1] < 1.01)

    ms = [measures.laplace(0, 1), measures.gaussian(0, 1),
          measures.uniform(-0.5, 0.5)]
    for m in ms:
        c = check_moment_growth(m, 2.0)
        check(f"{m.label}: ||X-EX||_2 <= 2 c_2 (ratio {c.ratio:.4f})", c.passed)
        c = check_moment_comparison(m, 2.0)
        check(f"{m.label}: ||X||_3 vs ||X||_2 (ratio {c.ratio:.4f})", c.passed)
        c = check_logconcave_moments(m, 2.0)
        check(f"{m.label}: log-concave 3rd moment (ratio {c.ratio:.4f})",
              c.passed)
        c = check_psi1_bound(m)
        check(f"{m.label}: ||X-EX||_Psi1 <= 4/Is (ratio {c.ratio:.4f})",
              c.passed)

    print(f"\n{PASS} passed, {FAIL} failed")
    return FAIL


if __name__ == "__main__":
    sys.exit(main())
