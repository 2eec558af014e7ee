"""Covariance kernel K(x,y) = F(x∧y)·S(x∨y), tail identities, T_k transform.

The kernel represents covariances of absolutely continuous functions as
Cov(g,h) = ∫∫ g′(x) K(x,y) h′(y) dx dy.  The inner integral has the closed
forms F(z)·E[h] − ∫_{−∞}^z h dF (lower tail) and ∫_{(z,∞)} h dF − S(z)·E[h]
(upper tail), which are equal; using each on its own side of the median
keeps the cancellation mild and collapses the double integral to a single
quadrature.

T_k conditionally averages h over the tail cut at the moving point:
T_k h(x) = (∫_{−∞}^x h dF)/F(x) for x ≤ k and (∫_{(x,∞)} h dF)/(1−F(x))
above.  Both numerator and denominator are prefix integrals from the same
engine over the same panel layout, so the ratio stays stable deep in the
tails and T_k 1 ≡ 1 holds exactly.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import quadrature, search
from .certificates import InequalityCertificate, certify
from .errors import DomainError


def _union_knots(m, *fns) -> tuple[float, ...]:
    out = set(m.knots)
    for g in fns:
        out.update(getattr(g, "knots", ()))
    return tuple(sorted(out))


def kernel_eval(m, x, y):
    """K(x,y) = F(min) − F(x)F(y), computed as F(min)·S(max) (no cancellation)."""
    x_arr = np.asarray(x, dtype=float)
    y_arr = np.asarray(y, dtype=float)
    out = m.cdf(np.minimum(x_arr, y_arr)) * m.sf(np.maximum(x_arr, y_arr))
    return float(out) if (np.ndim(x) == 0 and np.ndim(y) == 0) else out


def covariance_direct(m, g, h) -> float:
    """E[gh] − E[g]E[h] by direct quadrature."""
    from . import functions

    return m.expectation(functions.product(g, h)) - m.expectation(g) * m.expectation(h)


def covariance_kernel(m, g, h) -> float:
    """∫∫ g′(x) K(x,y) h′(y) dy dx, inner integral in closed form.

    The y-integral against the kernel equals the tail quantity
    W(x) = F(x)E[h] − ∫_{−∞}^x h dF = ∫_{(x,∞)} h dF − S(x)E[h]; the first
    form is used below the median, the second above.
    """
    lo, hi = m.integration_domain()
    ch = quadrature.cumulative(
        lambda y: np.asarray(h(y), dtype=float) * m.pdf(y),
        lo, hi, knots=_union_knots(m, h),
    )
    e_h = ch.total
    med = m.median()

    def w(x):
        low = m.cdf(x) * e_h - ch.left(x)
        high = ch.right(x) - m.sf(x) * e_h
        return np.where(x <= med, low, high)

    return quadrature.integrate(
        lambda x: np.asarray(g.deriv(x), dtype=float) * w(x),
        lo, hi, knots=_union_knots(m, g, h) + (med,),
    )


def tail_identity_left(m, h, z) -> tuple[float, float]:
    """(F(z)E[h] − ∫_{−∞}^z h dF, ∫ K(z,y) h′(y) dy): equal in exact arithmetic."""
    z = float(z)
    lo, hi = m.integration_domain()
    knots = _union_knots(m, h)
    e_h = m.expectation(h)
    zc = min(max(z, lo), hi)
    part = 0.0
    if zc > lo:
        part = quadrature.integrate(
            lambda y: np.asarray(h(y), dtype=float) * m.pdf(y), lo, zc, knots=knots
        )
    lhs = m.cdf(z) * e_h - part
    rhs = quadrature.integrate(
        lambda y: kernel_eval(m, z, y) * np.asarray(h.deriv(y), dtype=float),
        lo, hi, knots=knots + (zc,),
    )
    return float(lhs), float(rhs)


def tail_identity_right(m, h, z) -> tuple[float, float]:
    """(∫_{(z,∞)} h dF − S(z)E[h], ∫ K(z,y) h′(y) dy): mirror identity."""
    z = float(z)
    lo, hi = m.integration_domain()
    knots = _union_knots(m, h)
    e_h = m.expectation(h)
    zc = min(max(z, lo), hi)
    part = 0.0
    if zc < hi:
        part = quadrature.integrate(
            lambda y: np.asarray(h(y), dtype=float) * m.pdf(y), zc, hi, knots=knots
        )
    lhs = part - m.sf(z) * e_h
    rhs = quadrature.integrate(
        lambda y: kernel_eval(m, z, y) * np.asarray(h.deriv(y), dtype=float),
        lo, hi, knots=knots + (zc,),
    )
    return float(lhs), float(rhs)


@dataclass(frozen=True, eq=False)
class TkTransform:
    """Immutable T_k h with cached prefix integrals of h dF and dF."""

    measure: object
    k: float
    source: object
    left_integral: Callable    # x ↦ ∫_{(lo,x)} h dF
    right_integral: Callable   # x ↦ ∫_{(x,hi)} h dF
    _mass_left: Callable       # x ↦ ∫_{(lo,x)} dF, same panel layout
    _mass_right: Callable
    domain: tuple[float, float]

    def __call__(self, x):
        lo, hi = self.domain
        x_arr = np.atleast_1d(np.asarray(x, dtype=float))
        # clamp into the open interior so both tail masses stay positive
        xc = np.clip(x_arr, np.nextafter(lo, hi), np.nextafter(hi, lo))
        below = self.left_integral(xc) / self._mass_left(xc)
        above = self.right_integral(xc) / self._mass_right(xc)
        out = np.where(xc <= self.k, below, above)
        return float(out[0]) if np.ndim(x) == 0 else out

    def profile(self, n: int = 512):
        t = np.arange(1, n + 1, dtype=float) / (n + 1)
        xs = self.measure.quantile(t)
        return t, xs, self(xs)

    def profile_csv(self, n: int = 512) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "x", "Tkh"])
        for t, x, v in zip(*self.profile(n)):
            writer.writerow([f"{t:.12g}", f"{x:.12g}", f"{v:.12g}"])
        return buf.getvalue()


def t_transform(m, h, k) -> TkTransform:
    """Build T_k h with eagerly cached cumulative integrals."""
    lo, hi = m.integration_domain()
    knots = _union_knots(m, h)
    ch = quadrature.cumulative(
        lambda y: np.asarray(h(y), dtype=float) * m.pdf(y), lo, hi, knots=knots
    )
    cf = quadrature.cumulative(m.pdf, lo, hi, knots=knots)
    return TkTransform(
        measure=m,
        k=float(k),
        source=h,
        left_integral=ch.left,
        right_integral=ch.right,
        _mass_left=cf.left,
        _mass_right=cf.right,
        domain=(lo, hi),
    )


def t_norm(m, h, k, p, transform: TkTransform | None = None) -> float:
    """‖T_k h‖_p; p = inf takes the probed supremum with golden refinement."""
    p = float(p)
    if math.isnan(p) or p < 1.0:
        raise DomainError(f"t_norm requires p >= 1, got {p}")
    T = transform if transform is not None else t_transform(m, h, k)
    lo, hi = m.integration_domain()
    if math.isinf(p):
        pts = [m.probe_points(), np.asarray(h.knots, dtype=float)]
        if lo < T.k < hi:
            # T jumps at the split point: probe both one-sided limits
            pts.append(np.asarray([T.k, np.nextafter(T.k, hi)]))
        pts = np.unique(np.concatenate([np.atleast_1d(q) for q in pts]))
        pts = pts[(pts >= lo) & (pts <= hi)]
        vals = np.abs(T(pts))
        if not np.all(np.isfinite(vals)):
            return float("inf")
        top = np.argsort(vals)[-3:]
        _, refined = search.golden_max(
            lambda x: np.abs(T(x)),
            pts[np.maximum(top - 1, 0)],
            pts[np.minimum(top + 1, len(pts) - 1)],
        )
        return float(max(np.max(vals), np.max(refined)))
    knots = _union_knots(m, h)
    if lo < T.k < hi:
        knots = tuple(sorted(set(knots) | {T.k}))
    total = quadrature.integrate(
        lambda x: np.abs(T(x)) ** p * m.pdf(x), lo, hi, knots=knots
    )
    return total ** (1.0 / p)


def hardy_certificate(m, h, k, p) -> InequalityCertificate:
    """‖T_k h‖_p ≤ (p/(p−1))·‖h‖_p; the constant diverges at p=1."""
    p = float(p)
    if p == 1.0:
        raise DomainError("Hardy constant p/(p-1) diverges at p=1; need p > 1")
    if math.isnan(p) or p < 1.0:
        raise DomainError(f"hardy_certificate requires p > 1, got {p}")
    const = 1.0 if math.isinf(p) else p / (p - 1.0)
    lhs = t_norm(m, h, k, p)
    rhs = const * m.lp_norm(h, p)
    return certify(
        "hardy",
        lhs=lhs,
        rhs=rhs,
        params={
            "family": m.label,
            "p": p,
            "k": float(k),
            "h": getattr(h, "descriptor", repr(h)),
        },
    )
