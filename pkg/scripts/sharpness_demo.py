#!/usr/bin/env python3
"""Sharpness of the two-sided Poincaré family and the l1/linf constant.

Part 1 sweeps monomials x^k on the double exponential: at p=1 every odd
monomial attains the bound exactly; at p=2 the ratio sqrt((2k-1)/(2k))
climbs toward 1, so the constant cannot be improved.

Part 2 drives the covariance bound |Cov(g,h)| <= C ||g'||_1 ||T h0||_inf
to its optimal constant C = 1/Is with the shrinking-ramp sequence.
"""

import argparse
import sys

from covineq import estimate_best_constant, measures, sharpness_sweep
from covineq.runner import near_extremal_increasing

FAMILIES = {
    "laplace": measures.laplace(0, 1),
    "uniform": measures.uniform(0, 1),
    "gaussian": measures.gaussian(0, 1),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", default="1,3,5,7,9")
    ap.add_argument("--deltas", default="1e-1,1e-2,1e-3")
    args = ap.parse_args()
    ks = [int(s) for s in args.k.split(",")]
    deltas = [float(s) for s in args.deltas.split(",")]

    m = FAMILIES["laplace"]
    for p in (1.0, 2.0):
        certs = sharpness_sweep(m, p, ks)
        print(f"laplace monomial sweep, p={p:g}")
        for k, c in zip(ks, certs):
            print(f"  k={k:<3d} ratio={c.ratio:.6f}  "
                  f"(lhs={c.lhs:.6g}, rhs={c.rhs:.6g})")
        print()

    print("ramp sequence toward the optimal covariance constant 1/Is")
    bad = 0
    for name, m in FAMILIES.items():
        est = estimate_best_constant(m, near_extremal_increasing(m), deltas)
        gap = abs(est.limit_estimate - est.target) / est.target
        flag = "ok" if (est.monotone and gap < 0.02) else "DRIFT"
        bad += flag != "ok"
        print(f"  {name:<10} ratios={['%.5f' % r for r in est.ratios]} "
              f"limit={est.limit_estimate:.5f} target={est.target:.5f} {flag}")
    return bad


if __name__ == "__main__":
    sys.exit(main())
