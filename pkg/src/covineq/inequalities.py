"""Certificates for covariance, Poincaré, Orlicz, and moment inequalities.

Every ``check_*`` operation evaluates both sides of one inequality on a
concrete (measure, function, exponent) instance and returns an
:class:`~covineq.certificates.InequalityCertificate` with the tightness
ratio.  Conditional inequalities compute their side conditions numerically
and refuse (``HypothesisViolatedError``) to certify when a hypothesis
fails; the computed values are recorded in ``side_conditions`` either way.

The module also houses the Orlicz-norm machinery (``YoungFunction``,
``orlicz_norm``, ``young_cn``), the moment-growth suite, and the two
extremal estimators (``estimate_best_constant``, ``sharpness_sweep``)
that probe sharpness of the covariance and Poincaré bounds.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import functions, kernel, quadrature, search
from .certificates import InequalityCertificate, certify
from .errors import (
    ComputationError,
    DivergentNormError,
    DomainError,
    HypothesisViolatedError,
    IntegrationError,
    UnsupportedMeasureError,
)
from .isoperimetry import isoperimetric_value

__all__ = [
    "YoungFunction",
    "BestConstantEstimate",
    "check_cov_l1_linf",
    "check_cov_lp_lq_T",
    "check_cov_lp_lq",
    "check_cheeger",
    "check_lp_poincare",
    "check_mean_median_sandwich",
    "check_brascamp_lieb",
    "check_cov_variant",
    "check_cov_final",
    "young_function",
    "young_power",
    "young_psi1",
    "young_cn",
    "orlicz_norm",
    "check_orlicz",
    "check_moment_growth",
    "check_psi1_bound",
    "check_moment_comparison",
    "check_logconcave_moments",
    "cp_sequence",
    "estimate_best_constant",
    "sharpness_sweep",
]

POINCARE_VARIANTS = ("centered_2p", "centered_p", "raw_2p", "raw_p")
ORLICZ_VARIANTS = ("median_centered", "mean_centered")
COV_VARIANT_SIDES = ("left", "right")
HYPOTHESIS_TOL = 1e-6

_IDENTITY = functions.monomial(1)


# ---------------------------------------------------------------------------
# shared helpers


def _inv_is(m) -> tuple[float, bool]:
    """1/Is(μ) and an 'uninformative' flag (Is=0 → infinite rhs)."""
    val = isoperimetric_value(m)
    if val == 0.0:
        return math.inf, True
    return 1.0 / val, False


def _sup_abs(m, fn, extra_knots=()) -> float:
    """sup |fn| over the probe grid plus knots, with golden refinement.

    Like ``Measure.ess_sup`` but lets the caller merge in abscissae the
    probe grid cannot know about (function kinks, the median).
    """
    lo, hi = m.integration_domain()
    pts = [m.probe_points()]
    extra = np.asarray(tuple(extra_knots), dtype=float)
    if extra.size:
        pts.append(extra[(extra >= lo) & (extra <= hi)])
    grid = np.unique(np.concatenate(pts))
    vals = np.abs(np.asarray(fn(grid), dtype=float))
    if not np.all(np.isfinite(vals)):
        return float("inf")
    top = np.argsort(vals)[-3:]
    a = grid[np.maximum(top - 1, 0)]
    b = grid[np.minimum(top + 1, len(grid) - 1)]
    _, refined = search.golden_max(lambda x: np.abs(np.asarray(fn(x), float)), a, b)
    return float(max(np.max(vals), np.max(refined)))


def _deriv_norm(m, g, p) -> float:
    return m.lp_norm(functions.derivative(g), p)


def _holder_conjugate(p: float) -> float:
    if not 1.0 < p < math.inf:
        raise DomainError(f"Hölder conjugate needs p in (1, inf), got {p}")
    return p / (p - 1.0)


def _check_p(p, *, open_left=False, allow_inf=False) -> float:
    p = float(p)
    if math.isnan(p) or p < 1.0 or (open_left and p == 1.0):
        low = "> 1" if open_left else ">= 1"
        raise DomainError(f"exponent must be {low}, got {p}")
    if math.isinf(p) and not allow_inf:
        raise DomainError("exponent must be finite")
    return p


def _pair_params(m, g, h, **extra) -> dict:
    params = {"family": m.label, "g": g.descriptor, "h": h.descriptor}
    params.update(extra)
    return params


# ---------------------------------------------------------------------------
# covariance inequalities


def check_cov_l1_linf(m, g, h) -> InequalityCertificate:
    """|Cov(g,h)| ≤ Is(μ)⁻¹·‖g′‖₁·‖T_m h₀‖_∞ with h₀ = h − E[h].

    The L₁ derivative norm applies to g and the transform sup to h; for
    unbounded h the probed sup under-reports the rhs, which only makes
    the certificate harder to pass.
    """
    inv_is, trivial = _inv_is(m)
    lhs = abs(kernel.covariance_kernel(m, g, h))
    med = m.median()
    h0 = functions.centered(h, m)
    rhs = inv_is * _deriv_norm(m, g, 1.0) * kernel.t_norm(m, h0, med, math.inf)
    return certify(
        "cov_l1_linf",
        lhs=lhs,
        rhs=rhs,
        params=_pair_params(m, g, h, p=1.0),
        uninformative=trivial,
    )


def check_cov_lp_lq_T(m, g, h, p) -> InequalityCertificate:
    """|Cov(g,h)| ≤ Is(μ)⁻¹·‖g′‖_p·‖T_m h₀‖_q, q = p/(p−1), p ∈ (1,∞)."""
    p = _check_p(p, open_left=True)
    q = _holder_conjugate(p)
    inv_is, trivial = _inv_is(m)
    lhs = abs(kernel.covariance_kernel(m, g, h))
    h0 = functions.centered(h, m)
    rhs = inv_is * _deriv_norm(m, g, p) * kernel.t_norm(m, h0, m.median(), q)
    return certify(
        "cov_lp_lq_T",
        lhs=lhs,
        rhs=rhs,
        params=_pair_params(m, g, h, p=p, q=q),
        uninformative=trivial,
    )


def check_cov_lp_lq(m, g, h, p) -> InequalityCertificate:
    """|Cov(g,h)| ≤ p·Is(μ)⁻¹·‖g′‖_p·‖h₀‖_q (p > 1); p=1 uses ‖h₀‖_∞.

    The p=1 form drops the leading factor (constant 1) and takes the
    essential sup of the centered h, matching the bounded-h covariance
    inequality it degenerates to.
    """
    p = _check_p(p)
    inv_is, trivial = _inv_is(m)
    lhs = abs(kernel.covariance_kernel(m, g, h))
    h0 = functions.centered(h, m)
    if p == 1.0:
        q = math.inf
        rhs = inv_is * _deriv_norm(m, g, 1.0) * _sup_abs(m, h0, h0.knots)
    else:
        q = _holder_conjugate(p)
        rhs = p * inv_is * _deriv_norm(m, g, p) * m.lp_norm(h0, q)
    return certify(
        "cov_lp_lq",
        lhs=lhs,
        rhs=rhs,
        params=_pair_params(m, g, h, p=p, q=q),
        uninformative=trivial,
    )


def check_cheeger(m, g) -> InequalityCertificate:
    """Var(g) ≤ 4·Is(μ)⁻²·‖g′‖₂² (the g=h, p=2 specialization)."""
    inv_is, trivial = _inv_is(m)
    lhs = abs(kernel.covariance_kernel(m, g, g))
    rhs = 4.0 * inv_is**2 * _deriv_norm(m, g, 2.0) ** 2
    return certify(
        "cheeger",
        lhs=lhs,
        rhs=rhs,
        params={"family": m.label, "g": g.descriptor, "p": 2.0},
        uninformative=trivial,
    )


def check_cov_final(m, g, h, p) -> InequalityCertificate:
    """|Cov(g,h)| ≤ 2(p+q)·Is(μ)⁻²·‖g′‖_p·‖h′‖_q, q = p/(p−1)."""
    p = _check_p(p, open_left=True)
    q = _holder_conjugate(p)
    inv_is, trivial = _inv_is(m)
    lhs = abs(kernel.covariance_kernel(m, g, h))
    rhs = 2.0 * (p + q) * inv_is**2 * _deriv_norm(m, g, p) * _deriv_norm(m, h, q)
    return certify(
        "cov_final",
        lhs=lhs,
        rhs=rhs,
        params=_pair_params(m, g, h, p=p, q=q),
        uninformative=trivial,
    )


def check_brascamp_lieb(m, g, h) -> InequalityCertificate:
    """|Cov(g,h)| ≤ ‖g′‖₁·sup|h′/φ″| for strictly log-concave μ = e^{-φ}."""
    phi2 = m.potential_second_derivative
    if phi2 is None:
        raise UnsupportedMeasureError(
            f"{m.label} does not track a strictly positive potential second "
            "derivative; the asymmetric covariance bound needs one"
        )
    lhs = abs(kernel.covariance_kernel(m, g, h))

    def weighted(x):
        x = np.asarray(x, dtype=float)
        return np.asarray(h.deriv(x), dtype=float) / np.asarray(phi2(x), dtype=float)

    rhs = _deriv_norm(m, g, 1.0) * _sup_abs(m, weighted, h.knots)
    return certify(
        "brascamp_lieb", lhs=lhs, rhs=rhs, params=_pair_params(m, g, h)
    )


def check_cov_variant(m, g, h, side) -> InequalityCertificate:
    """|Cov(g,h)| ≤ sup_x |F(x)E[h] − ∫_{−∞}^x h dF| / f(x) · ‖g′‖₁.

    ``side`` picks the form of the numerator: ``left`` evaluates
    F(x)E[h] − ∫_{-∞}^x h dF and ``right`` the mirror image
    ∫_{(x,∞)} h dF − S(x)E[h]; the two agree analytically and the
    certificates differ only in roundoff.
    """
    if side not in COV_VARIANT_SIDES:
        raise DomainError(f"side must be one of {COV_VARIANT_SIDES}, got {side!r}")
    lhs = abs(kernel.covariance_kernel(m, g, h))
    lo, hi = m.integration_domain()
    knots = tuple(h.knots) + m.knots
    ch = quadrature.cumulative(
        lambda y: np.asarray(h(y), dtype=float) * m.pdf(y), lo, hi, knots=knots
    )
    e_h = ch.total

    def ratio(x):
        x = np.asarray(x, dtype=float)
        if side == "left":
            w = m.cdf(x) * e_h - ch.left(x)
        else:
            w = ch.right(x) - m.sf(x) * e_h
        return np.abs(w) / m.pdf(x)

    sup = _sup_abs(m, ratio, tuple(h.knots) + (m.median(),))
    rhs = sup * _deriv_norm(m, g, 1.0)
    return certify(
        "cov_variant", lhs=lhs, rhs=rhs, params=_pair_params(m, g, h, side=side)
    )


# ---------------------------------------------------------------------------
# Lp Poincaré inequalities


def _signed_moment(m, v, p) -> tuple[float, float]:
    """E[sign(v)|v|^{p−1}] and the normalizer E[|v|^{p−1}]."""
    lo, hi = m.integration_domain()
    knots = tuple(v.knots) + m.knots

    def signed(x):
        vals = np.asarray(v(x), dtype=float)
        return np.sign(vals) * np.abs(vals) ** (p - 1.0) * m.pdf(x)

    def absolute(x):
        return np.abs(np.asarray(v(x), dtype=float)) ** (p - 1.0) * m.pdf(x)

    num = quadrature.integrate(signed, lo, hi, knots=knots)
    den = quadrature.integrate(absolute, lo, hi, knots=knots)
    return num, den


def _require_odd_integer(p: float) -> int:
    k = round(p)
    if abs(p - k) > HYPOTHESIS_TOL or k % 2 == 0:
        raise HypothesisViolatedError("p is an odd integer", p)
    return int(k)


def check_lp_poincare(m, u, p, variant) -> InequalityCertificate:
    """One of the four L_p Poincaré bounds ‖·‖_p ≤ c·Is(μ)⁻¹·‖u′‖_p.

    variant: ``centered_2p`` — ‖u−Eu‖_p ≤ 2p·Is⁻¹‖u′‖_p, unconditional;
    ``centered_p`` — constant p, needs E[sign(u−Eu)|u−Eu|^{p−1}] = 0;
    ``raw_2p`` — ‖u‖_p ≤ 2p·Is⁻¹‖u′‖_p, needs odd integer p and
    E[u^p] = 0; ``raw_p`` — constant p, additionally E[sign(u^p)] = 0.

    Side conditions are evaluated numerically (normalized where they have
    a scale) and recorded; a violated hypothesis raises
    ``HypothesisViolatedError`` rather than producing a certificate.
    """
    p = _check_p(p)
    if variant not in POINCARE_VARIANTS:
        raise DomainError(
            f"variant must be one of {POINCARE_VARIANTS}, got {variant!r}"
        )
    inv_is, trivial = _inv_is(m)
    side: dict[str, float] = {}

    if variant.startswith("centered"):
        v = functions.centered(u, m)
        constant = 2.0 * p if variant == "centered_2p" else p
        if variant == "centered_p":
            num, den = _signed_moment(m, v, p)
            cond = num / den if den > 0.0 else 0.0
            side["sign_moment"] = cond
            if abs(cond) > HYPOTHESIS_TOL:
                raise HypothesisViolatedError(
                    "E[sign(u-Eu)|u-Eu|^(p-1)] = 0", cond
                )
        lhs = m.lp_norm(v, p)
    else:
        k = _require_odd_integer(p)
        side["p_odd"] = float(k)
        lo, hi = m.integration_domain()
        knots = tuple(u.knots) + m.knots
        raw = quadrature.integrate(
            lambda x: np.asarray(u(x), dtype=float) ** k * m.pdf(x),
            lo, hi, knots=knots,
        )
        lhs = m.lp_norm(u, p)
        scale = lhs**k if lhs > 0.0 else 1.0
        side["raw_moment"] = raw / scale
        if abs(side["raw_moment"]) > HYPOTHESIS_TOL:
            raise HypothesisViolatedError("E[u^p] = 0", side["raw_moment"])
        constant = 2.0 * p
        if variant == "raw_p":
            sign_raw = quadrature.integrate(
                lambda x: np.sign(np.asarray(u(x), dtype=float)) * m.pdf(x),
                lo, hi, knots=knots,
            )
            side["sign_raw"] = sign_raw
            if abs(sign_raw) > HYPOTHESIS_TOL:
                raise HypothesisViolatedError("E[sign(u^p)] = 0", sign_raw)
            constant = p

    rhs = constant * inv_is * _deriv_norm(m, u, p)
    return certify(
        "lp_poincare",
        lhs=lhs,
        rhs=rhs,
        params={"family": m.label, "u": u.descriptor, "p": p, "variant": variant},
        side_conditions=side,
        uninformative=trivial,
    )


# ---------------------------------------------------------------------------
# mean/median centering comparison


def _abs_deviation(m, g, c) -> float:
    """E|g − c|."""
    lo, hi = m.integration_domain()
    return quadrature.integrate(
        lambda x: np.abs(np.asarray(g(x), dtype=float) - c) * m.pdf(x),
        lo, hi, knots=tuple(g.knots) + m.knots,
    )


def _pushforward_median(m, g) -> float:
    pts = m.probe_points()
    vals = np.asarray(g(pts), dtype=float)
    d = np.diff(vals)
    if np.all(d >= 0.0) or np.all(d <= 0.0):
        # monotone g: the median pushes forward through g
        return float(np.asarray(g(m.median()), dtype=float))
    lo, hi = float(np.min(vals)), float(np.max(vals))
    if lo == hi:
        return lo

    def dev(cs):
        return np.array([_abs_deviation(m, g, float(c)) for c in np.atleast_1d(cs)])

    cref, _ = search.golden_min(dev, np.array([lo]), np.array([hi]), iters=48)
    return float(cref[0])


def check_mean_median_sandwich(m, g) -> InequalityCertificate:
    """E|g − med(g)| ≤ E|g − Eg| ≤ 2·E|g − med(g)|.

    The certificate's lhs/rhs carry the upper inequality; the lower one
    is folded into ``pass`` and recorded under ``side_conditions``.
    Deviations below quadrature noise on the scale of the centerings
    collapse to zero, so an (effectively) constant g certifies 0 ≤ 0.
    """
    center = m.expectation(g)
    mean_dev = _abs_deviation(m, g, center)
    med_dev = _abs_deviation(m, g, _pushforward_median(m, g))
    floor = 1e-12 * (1.0 + abs(center))
    if mean_dev < floor and med_dev < floor:
        mean_dev = med_dev = 0.0
    cert = certify(
        "mean_median_sandwich",
        lhs=mean_dev,
        rhs=2.0 * med_dev,
        params={"family": m.label, "g": g.descriptor},
        side_conditions={"median_abs_dev": med_dev, "mean_abs_dev": mean_dev},
    )
    lower_ok = med_dev <= mean_dev * (1.0 + cert.tol) + 1e-300
    if not lower_ok:
        cert = dataclasses.replace(cert, passed=False)
    return cert


# ---------------------------------------------------------------------------
# Orlicz norms


@dataclass(frozen=True, eq=False)
class YoungFunction:
    """An even convex N with N(0)=0, N>0 off 0, its derivative, and C_N.

    ``cn`` is sup_x x·N′(x)/N(x) (+inf when the ratio diverges); the
    Orlicz Poincaré constants scale with it.
    """

    N: Callable
    N_prime: Callable
    cn: float
    descriptor: str

    def __call__(self, x):
        return self.N(x)


_YOUNG_GRID = np.concatenate([[0.0], np.logspace(-6.0, 6.0, 97)])


def _cn_value(N, N_prime, grid=None) -> float:
    xs = np.asarray(_YOUNG_GRID[1:] if grid is None else grid, dtype=float)
    xs = np.unique(xs[xs > 0.0])
    with np.errstate(over="ignore", invalid="ignore"):
        nv = np.asarray(N(xs), dtype=float)
        dv = np.asarray(N_prime(xs), dtype=float)
        ratio = xs * dv / nv
    ok = np.isfinite(nv) & (nv > 0.0) & np.isfinite(ratio)
    if not np.any(ok):
        raise DomainError("C_N probe grid produced no finite ratio values")
    xs, ratio = xs[ok], ratio[ok]
    # divergence test: three successive increases across the last usable
    # decade mean the ratio is still climbing at the edge of float range
    tail = ratio[xs >= xs[-1] / 10.0]
    if len(tail) >= 4:
        inc = np.diff(tail) > 0.0
        run = 0
        for step in inc:
            run = run + 1 if step else 0
            if run >= 3:
                return math.inf
    return float(np.max(ratio))


def young_cn(N: YoungFunction, probe_grid=None) -> float:
    """sup x·N′(x)/N(x) over the probe grid, +inf when it diverges."""
    return _cn_value(N.N, N.N_prime, probe_grid)


def young_function(N, N_prime, descriptor: str) -> YoungFunction:
    """Validate (evenness, N(0)=0, positivity, midpoint convexity) and wrap."""
    xs = _YOUNG_GRID
    with np.errstate(over="ignore"):
        pos = np.asarray(N(xs), dtype=float)
        neg = np.asarray(N(-xs), dtype=float)
    both = np.isfinite(pos) & np.isfinite(neg)
    scale = np.abs(pos[both]) + 1e-300
    if np.any(np.abs(pos[both] - neg[both]) > 1e-9 * scale):
        raise DomainError(f"{descriptor} is not even on the sample grid")
    if pos[0] != 0.0:
        raise DomainError(f"{descriptor}(0) must be 0, got {pos[0]!r}")
    if np.any(pos[1:][np.isfinite(pos[1:])] <= 0.0):
        raise DomainError(f"{descriptor} must be positive away from 0")
    fin = np.flatnonzero(np.isfinite(pos))
    a, b = xs[fin[:-1]], xs[fin[1:]]
    with np.errstate(over="ignore"):
        mid = np.asarray(N((a + b) / 2.0), dtype=float)
        chord = (pos[fin[:-1]] + pos[fin[1:]]) / 2.0
    bad = mid > chord * (1.0 + 1e-9) + 1e-300
    if np.any(bad[np.isfinite(mid) & np.isfinite(chord)]):
        raise DomainError(f"{descriptor} fails the midpoint convexity test")
    cn = _cn_value(N, N_prime)
    if cn < 1.0 - 1e-9:
        raise DomainError(f"{descriptor} has C_N = {cn} < 1; not a Young function")
    return YoungFunction(N, N_prime, cn, descriptor)


def young_power(p) -> YoungFunction:
    """N(x) = |x|^p, for which C_N = p."""
    p = _check_p(p)

    def N(x):
        return np.abs(np.asarray(x, dtype=float)) ** p

    def N_prime(x):
        x = np.asarray(x, dtype=float)
        return p * np.sign(x) * np.abs(x) ** (p - 1.0)

    return young_function(N, N_prime, f"|x|^{p:g}")


def young_psi1() -> YoungFunction:
    """Ψ1(x) = e^{|x|} − 1; its C_N diverges."""

    def N(x):
        with np.errstate(over="ignore"):
            return np.expm1(np.abs(np.asarray(x, dtype=float)))

    def N_prime(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(over="ignore"):
            return np.sign(x) * np.exp(np.abs(x))

    return young_function(N, N_prime, "psi1")


_ORLICZ_LO = 1e-8
_ORLICZ_HI = 1e8


def orlicz_norm(m, g, N: YoungFunction) -> float:
    """inf{λ > 0 : E[N(g/λ)] ≤ 1} by geometric bisection to relative 1e-8.

    λ ↦ E[N(g/λ)] is non-increasing, so a single bracket suffices.  A
    modular that stays above one at λ = 1e8 (or diverges at every probed
    λ) raises ``DivergentNormError``; a modular already below one at
    λ = 1e-8 reports norm 0.
    """
    lo_dom, hi_dom = m.integration_domain()
    knots = tuple(getattr(g, "knots", ())) + m.knots

    def modular(lam: float) -> float:
        def f(x):
            vals = np.asarray(g(x), dtype=float) / lam
            with np.errstate(over="ignore"):
                out = np.asarray(N(vals), dtype=float) * m.pdf(x)
            return out

        try:
            return quadrature.integrate(f, lo_dom, hi_dom, knots=knots)
        except IntegrationError:
            return math.inf

    if modular(_ORLICZ_LO) <= 1.0:
        return 0.0
    if not modular(_ORLICZ_HI) <= 1.0:
        raise DivergentNormError(
            f"E[{N.descriptor}(g/lambda)] stays above 1 for lambda up to {_ORLICZ_HI:g}"
        )
    lo, hi = _ORLICZ_LO, _ORLICZ_HI
    while hi - lo > 1e-8 * hi:
        mid = math.sqrt(lo * hi)
        if modular(mid) <= 1.0:
            hi = mid
        else:
            lo = mid
    return hi


def check_orlicz(m, f, N: YoungFunction, which) -> InequalityCertificate:
    """Orlicz Poincaré: ‖f−f(med)‖_N ≤ C_N·Is⁻¹‖f′‖_N (median_centered)
    or ‖f−Ef‖_N ≤ 2C_N·Is⁻¹‖f′‖_N (mean_centered)."""
    if which not in ORLICZ_VARIANTS:
        raise DomainError(f"which must be one of {ORLICZ_VARIANTS}, got {which!r}")
    if not math.isfinite(N.cn):
        raise DomainError(
            f"C_N is infinite for {N.descriptor}; the Orlicz Poincaré "
            "constant is vacuous"
        )
    inv_is, trivial = _inv_is(m)
    if which == "median_centered":
        center = float(np.asarray(f(m.median()), dtype=float))
        constant = N.cn
    else:
        center = m.expectation(f)
        constant = 2.0 * N.cn
    lhs = orlicz_norm(m, functions.shifted(f, -center), N)
    rhs = constant * inv_is * orlicz_norm(m, functions.derivative(f), N)
    return certify(
        "orlicz",
        lhs=lhs,
        rhs=rhs,
        params={
            "family": m.label,
            "f": f.descriptor,
            "N": N.descriptor,
            "which": which,
        },
        side_conditions={"C_N": N.cn, "center": center},
        uninformative=trivial,
    )


# ---------------------------------------------------------------------------
# moment bounds


def check_moment_growth(m, p) -> InequalityCertificate:
    """‖X − EX‖_p ≤ 2c_p with c_p = p/Is(μ)."""
    p = _check_p(p)
    inv_is, trivial = _inv_is(m)
    c_p = p * inv_is
    lhs = m.lp_norm(functions.centered(_IDENTITY, m), p)
    return certify(
        "moment_growth",
        lhs=lhs,
        rhs=2.0 * c_p,
        params={"family": m.label, "p": p},
        side_conditions={"c_p": c_p},
        uninformative=trivial,
    )


def check_psi1_bound(m) -> InequalityCertificate:
    """‖X − EX‖_{Ψ1} ≤ 4/Is(μ)."""
    inv_is, trivial = _inv_is(m)
    lhs = orlicz_norm(m, functions.centered(_IDENTITY, m), young_psi1())
    return certify(
        "psi1_bound",
        lhs=lhs,
        rhs=4.0 * inv_is,
        params={"family": m.label},
        uninformative=trivial,
    )


def _require_centered(m) -> None:
    mean = m.expectation(_IDENTITY)
    if abs(mean) > 1e-9:
        raise HypothesisViolatedError("E[X] = 0", mean)


def check_moment_comparison(m, p) -> InequalityCertificate:
    """‖X‖_{p+1} ≤ (p²/((p−1)·Is(μ_c)))^{1/(p+1)}·‖X‖_p with c = ‖X‖_p.

    μ_c is the rescaled law with density x ↦ c·f(cx); its isoperimetric
    constant is computed fresh on the rescaled measure.  The comparison
    is empty at p = 1 (the constant diverges), hence the domain error.
    """
    p = float(p)
    if p == 1.0:
        raise DomainError("moment comparison needs p > 1; the constant diverges at p=1")
    p = _check_p(p, open_left=True)
    _require_centered(m)
    norm_p = m.lp_norm(_IDENTITY, p)
    lhs = m.lp_norm(_IDENTITY, p + 1.0)
    scaled_is = isoperimetric_value(m.rescale(norm_p))
    if scaled_is == 0.0:
        rhs, trivial = math.inf, True
    else:
        rhs = (p**2 / ((p - 1.0) * scaled_is)) ** (1.0 / (p + 1.0)) * norm_p
        trivial = False
    return certify(
        "moment_comparison",
        lhs=lhs,
        rhs=rhs,
        params={"family": m.label, "p": p},
        side_conditions={"norm_p": norm_p, "rescaled_is": scaled_is},
        uninformative=trivial,
    )


def check_logconcave_moments(m, p) -> InequalityCertificate:
    """‖X‖_{p+1} ≤ (√3·p²/(p−1))^{1/(p+1)}·‖X‖_p for centered log-concave X.

    At p = 2 this cubes to the third-moment bound E|X|³ ≤ 4√3·(EX²)^{3/2};
    both cubed sides are recorded in ``side_conditions`` for that case.
    """
    if m.log_concavity == "none":
        raise UnsupportedMeasureError(
            f"{m.label} is not flagged log-concave; the moment bound needs it"
        )
    p = float(p)
    if math.isnan(p) or not 2.0 <= p < math.inf:
        raise DomainError(f"log-concave moment bound needs p >= 2, got {p}")
    _require_centered(m)
    norm_p = m.lp_norm(_IDENTITY, p)
    lhs = m.lp_norm(_IDENTITY, p + 1.0)
    rhs = (math.sqrt(3.0) * p**2 / (p - 1.0)) ** (1.0 / (p + 1.0)) * norm_p
    side = {"norm_p": norm_p}
    if p == 2.0:
        side["third_abs_moment"] = lhs**3
        side["third_moment_bound"] = 4.0 * math.sqrt(3.0) * norm_p**3
    return certify(
        "logconcave_moments",
        lhs=lhs,
        rhs=rhs,
        params={"family": m.label, "p": p},
        side_conditions=side,
    )


def cp_sequence(p_values) -> list[float]:
    """C_p = (p/(p+1))·(√3·p²/(p−1))^{1/(p+1)}: decreasing toward 1.

    Strict decrease over increasing inputs is asserted; a violation would
    mean the evaluation itself is broken, so it raises rather than flags.
    """
    ps = [float(p) for p in p_values]
    if any(math.isnan(p) or p <= 1.0 for p in ps):
        raise DomainError("C_p is defined for p > 1 only")
    out = [
        (p / (p + 1.0)) * (math.sqrt(3.0) * p**2 / (p - 1.0)) ** (1.0 / (p + 1.0))
        for p in ps
    ]
    for (pa, ca), (pb, cb) in zip(zip(ps, out), zip(ps[1:], out[1:])):
        if pb > pa and not cb < ca:
            raise ComputationError(
                f"C_p failed to decrease between p={pa} and p={pb}"
            )
    if any(c <= 1.0 for c in out):
        raise ComputationError("C_p dropped to 1 or below; evaluation is broken")
    return out


# ---------------------------------------------------------------------------
# extremal estimators


@dataclass(frozen=True, eq=False)
class BestConstantEstimate:
    """Ramp-width sweep toward the best covariance constant 1/Is(μ).

    ``ratios[i]`` is |Cov(g, h_δ)|/(‖g′‖₁·‖T_m h₀‖_∞) at δ = deltas[i];
    the sequence increases as δ shrinks and the extrapolated limit should
    match ``target`` = 1/Is(μ).  ``monotone`` is False (and the limit NaN)
    when the sweep is too noisy to extrapolate.
    """

    deltas: tuple[float, ...]
    ratios: tuple[float, ...]
    limit_estimate: float
    target: float
    monotone: bool = True

    def to_csv(self) -> str:
        lines = ["delta,ratio"]
        for d, r in zip(self.deltas, self.ratios):
            lines.append(f"{d!r},{r!r}")
        return "\n".join(lines) + "\n"


def estimate_best_constant(m, g, deltas) -> BestConstantEstimate:
    """Drive the l1/linf covariance bound to equality with shrinking ramps.

    For each width δ the test function h = ramp(med, δ) approximates the
    sign of x − med; the attained ratio converges to 1/Is(μ) at first
    order in δ, and the last two ratios give a Richardson-style
    extrapolation of the limit.
    """
    ds = [float(d) for d in deltas]
    if not ds or any(d <= 0.0 for d in ds):
        raise DomainError("deltas must be positive")
    if any(b >= a for a, b in zip(ds, ds[1:])):
        raise DomainError("deltas must be strictly decreasing")
    pts = m.probe_points()
    if np.any(np.asarray(g.deriv(pts), dtype=float) <= 0.0):
        raise DomainError(
            f"{g.descriptor} is not strictly increasing on the probe grid"
        )
    med = m.median()
    g1 = _deriv_norm(m, g, 1.0)
    ratios = []
    for d in ds:
        h = functions.ramp(functions.RampSpec(med, d))
        num = abs(kernel.covariance_kernel(m, g, h))
        h0 = functions.centered(h, m)
        den = g1 * kernel.t_norm(m, h0, med, math.inf)
        ratios.append(num / den)
    monotone = all(b >= a * (1.0 - 1e-12) for a, b in zip(ratios, ratios[1:]))
    if monotone and len(ds) >= 2:
        d1, d2 = ds[-2], ds[-1]
        r1, r2 = ratios[-2], ratios[-1]
        limit = r2 + (r2 - r1) * d2 / (d1 - d2)
    elif monotone:
        limit = ratios[-1]
    else:
        limit = math.nan
    return BestConstantEstimate(
        deltas=tuple(ds),
        ratios=tuple(ratios),
        limit_estimate=limit,
        target=1.0 / isoperimetric_value(m),
        monotone=monotone,
    )


def sharpness_sweep(m, p, k_values) -> list[InequalityCertificate]:
    """Poincaré tightness on odd monomials u = x^k for increasing k.

    Uses the constant-p variants: the raw form at p = 1 (where odd
    monomials are exactly extremal) and the centered form otherwise.
    For a Laplace-type measure the ratios must be nondecreasing in k.
    """
    p = _check_p(p)
    ks = [int(k) for k in k_values]
    if any(k < 1 or k % 2 == 0 for k in ks):
        raise DomainError(f"k_values must be odd positive integers, got {ks}")
    if any(b <= a for a, b in zip(ks, ks[1:])):
        raise DomainError("k_values must be strictly increasing")
    variant = "raw_p" if p == 1.0 else "centered_p"
    certs = [check_lp_poincare(m, functions.monomial(k), p, variant) for k in ks]
    if m.family == "laplace":
        ratios = [c.ratio for c in certs]
        if any(b < a * (1.0 - 1e-9) for a, b in zip(ratios, ratios[1:])):
            raise ComputationError(
                f"sharpness ratios {ratios} are not monotone for {m.label}"
            )
    return certs
