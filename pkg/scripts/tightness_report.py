#!/usr/bin/env python3
"""Empirical tightness maxima for the dimension-free Poincaré constants.

Whether the factors of 2 in the unconditional bounds

    ||u - Eu||_p  <=  2p/Is * ||u'||_p         (centered, constant 2p)
    ||u||_p       <=  2p/Is * ||u'||_p         (raw, odd p, E[u^p] = 0)

are necessary is open.  This sweep records the largest lhs/rhs ratio seen
over a seeded battery of random piecewise-linear functions plus monomials;
it reports the maxima and draws no conclusion.
"""

import argparse
import sys

import numpy as np

from covineq import check_lp_poincare, measures
from covineq.errors import HypothesisViolatedError
from covineq.functions import monomial, piecewise_linear
from covineq.runner import near_extremal_increasing


def battery(m, rng, size):
    fns = [monomial(1), monomial(3), near_extremal_increasing(m)]
    for i in range(size):
        t = np.sort(rng.uniform(0.03, 0.97, size=7))
        xs = np.unique(np.asarray(m.quantile(t), dtype=float))
        if xs.size < 2:
            continue
        fns.append(piecewise_linear(xs, rng.standard_normal(xs.size),
                                    descriptor=f"pwl#{i}"))
    return fns


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--battery-size", type=int, default=12)
    ap.add_argument("--p", default="1,2,3",
                    help="comma-separated exponent list")
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    ps = [float(s) for s in args.p.split(",")]

    ms = [measures.laplace(0, 1), measures.gaussian(0, 1),
          measures.uniform(0, 1), measures.exponential(1)]
    worst = []
    print(f"{'family':<18} {'variant':<12} {'p':>4}  {'max ratio':>10}  witness")
    for m in ms:
        fns = battery(m, rng, args.battery_size)
        for variant in ("centered_2p", "raw_2p"):
            for p in ps:
                best, who = -1.0, "-"
                for u in fns:
                    try:
                        cert = check_lp_poincare(m, u, p, variant)
                    except HypothesisViolatedError:
                        continue
                    if cert.ratio > best:
                        best, who = cert.ratio, u.descriptor
                    if not cert.passed:
                        worst.append(cert.describe())
                if best >= 0.0:
                    print(f"{m.label:<18} {variant:<12} {p:>4g}  "
                          f"{best:>10.5f}  {who}")

    if worst:
        print("\nVIOLATIONS (should be empty):")
        for line in worst:
            print("  " + line)
    else:
        print("\nno violations; all ratios at most 1 within tolerance")
    return len(worst)


if __name__ == "__main__":
    sys.exit(main())
