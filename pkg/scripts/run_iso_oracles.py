#!/usr/bin/env python3
"""Isoperimetric-constant oracle battery.

Closed forms used as ground truth:
    laplace(0,1)      Is = 1
    uniform(0,1)      Is = 2
    gaussian(0,1)     Is = 2*phi(0) = sqrt(2/pi)
    exponential(1)    Is = 1
    logistic(0,1)     Is = 1/2          (f = F(1-F), min at the median)
    beta(2,2)         Is = 3            (profile minimized at the median)

plus the scaling law Is(law of X/c) = c * Is(law of X).
"""

import argparse
import math
import sys
import time

from covineq import isoperimetric_constant, isoperimetric_value, measures

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
    ap.add_argument("--profile-dir", default=None,
                    help="write <family>.csv ratio profiles here")
    args = ap.parse_args()

    oracles = [
        (measures.laplace(0, 1), 1.0, 1e-6),
        (measures.uniform(0, 1), 2.0, 1e-6),
        (measures.gaussian(0, 1), math.sqrt(2.0 / math.pi), 1e-5),
        (measures.exponential(1), 1.0, 1e-6),
        (measures.logistic(0, 1), 0.5, 1e-6),
        (measures.beta(2, 2), 3.0, 1e-5),
    ]
    for m, target, tol in oracles:
        t0 = time.perf_counter()
        prof = isoperimetric_constant(m)
        dt = time.perf_counter() - t0
        err = abs(prof.is_value - target)
        check(f"{m.label:<16} Is={prof.is_value:.7f} want {target:.7f} "
              f"({dt*1e3:.0f} ms)", err <= tol * max(1.0, target))
        if args.profile_dir:
            path = f"{args.profile_dir}/{m.family}.csv"
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(prof.to_csv())

    # scaling: X ~ m, law of X/c has constant c*Is
    for c in (0.5, 2.0, 7.0):
        m = measures.laplace(0, 1).rescale(c)
        check(f"rescale laplace by c={c}: Is={isoperimetric_value(m):.6f}",
              abs(isoperimetric_value(m) - c) <= 1e-6 * c)

    print(f"\n{PASS} passed, {FAIL} failed")
    return FAIL


if __name__ == "__main__":
    sys.exit(main())
