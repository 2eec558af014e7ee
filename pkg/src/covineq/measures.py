"""One-dimensional probability measures with positive density on an interval.

Analytic families wrap frozen scipy distributions (closed-form pdf/cdf/
quantile via special functions); tabulated densities are ingested as a
piecewise-linear pdf whose cdf is its exact piecewise-quadratic integral.

All integral operations (expectation, lp_norm) run in x-space: the integrand
g(x)·f(x) is integrated adaptively over [quantile(1e-300), isf(1e-300)]
(exact endpoints where the support is bounded).  Upper-tail quantiles always
go through the survival function, never through 1−t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np
from scipy import stats

from . import quadrature, search
from .errors import DomainError, IngestionError, UnsupportedMeasureError

# log-concavity flags
LOG_CONCAVITY_NONE = "none"
LOG_CONCAVE = "log_concave"
STRICTLY_LOG_CONCAVE = "strictly_log_concave"

_TAIL_EPS = 1e-300  # quantile depth standing in for an infinite endpoint


@dataclass(frozen=True, eq=False, repr=False)
class Measure:
    """A probability measure on an interval with strictly positive density.

    ``dist`` is any frozen scipy-like object exposing pdf/cdf/sf/ppf/isf;
    ``potential_second_derivative`` is φ'' for the potential φ = −log f and
    is present exactly when the measure is strictly log-concave.  ``knots``
    are density kinks strictly inside the support (panel seeds for
    quadrature).  Instances are immutable and all methods are pure.
    """

    family: str
    params: dict
    dist: Any
    support: tuple[float, float]
    log_concavity: str = LOG_CONCAVITY_NONE
    potential_second_derivative: Callable | None = None
    knots: tuple[float, ...] = ()

    # ---- pointwise primitives -------------------------------------------

    def pdf(self, x):
        """Density; 0 outside the support (documented, not an error)."""
        return self.dist.pdf(x)

    def cdf(self, x):
        return self.dist.cdf(x)

    def sf(self, x):
        """Survival function 1−F, accurate in the upper tail."""
        return self.dist.sf(x)

    def quantile(self, t):
        t_arr = np.asarray(t, dtype=float)
        if not np.all((t_arr > 0.0) & (t_arr < 1.0)):
            raise DomainError(f"quantile level must lie in (0,1), got {t!r}")
        out = self.dist.ppf(t_arr)
        return float(out) if np.ndim(t) == 0 else np.asarray(out, dtype=float)

    def median(self) -> float:
        return self.quantile(0.5)

    # ---- integration ----------------------------------------------------

    def integration_domain(self) -> tuple[float, float]:
        """Finite window carrying all but ~1e-300 of the mass."""
        a, b = self.support
        lo = a if math.isfinite(a) else float(self.dist.ppf(_TAIL_EPS))
        hi = b if math.isfinite(b) else float(self.dist.isf(_TAIL_EPS))
        return lo, hi

    def expectation(self, g) -> float:
        """∫ g dμ to relative tolerance 1e-9; IntegrationError on divergence."""
        lo, hi = self.integration_domain()
        knots = tuple(getattr(g, "knots", ())) + self.knots
        return quadrature.integrate(
            lambda x: np.asarray(g(x), dtype=float) * self.dist.pdf(x),
            lo, hi, knots=knots,
        )

    def lp_norm(self, g, p) -> float:
        """(∫|g|^p dμ)^(1/p) for real p ≥ 1; p = inf takes the grid sup."""
        p = float(p)
        if math.isnan(p) or p < 1.0:
            raise DomainError(f"lp_norm requires p >= 1, got {p}")
        if math.isinf(p):
            return self.ess_sup(g)
        lo, hi = self.integration_domain()
        knots = tuple(getattr(g, "knots", ())) + self.knots
        total = quadrature.integrate(
            lambda x: np.abs(np.asarray(g(x), dtype=float)) ** p * self.dist.pdf(x),
            lo, hi, knots=knots,
        )
        return total ** (1.0 / p)

    # ---- sup norms -------------------------------------------------------

    def probe_points(self, n: int = 2048) -> np.ndarray:
        """Interior quantile grid plus deep tail probes, sorted and unique."""
        t = np.linspace(0.0, 1.0, n + 2)[1:-1]
        pts = [self.quantile(t)]
        s = 10.0 ** -np.arange(4.0, 14.0)
        pts.append(np.asarray(self.dist.ppf(s), dtype=float))
        pts.append(np.asarray(self.dist.isf(s), dtype=float))
        pts.append(np.asarray(self.knots, dtype=float))
        lo, hi = self.integration_domain()
        out = np.unique(np.concatenate([np.atleast_1d(p) for p in pts]))
        return out[(out >= lo) & (out <= hi)]

    def ess_sup(self, g) -> float:
        """Grid supremum of |g| with golden refinement around the top points.

        The density is positive on the support, so the essential sup is the
        sup over the interior.  Genuinely unbounded |g| is reported as the
        largest probed value (or inf if a probe overflows) — an
        under-report, documented where it matters.
        """
        pts = self.probe_points()
        vals = np.abs(np.asarray(g(pts), dtype=float))
        if not np.all(np.isfinite(vals)):
            return float("inf")
        top = np.argsort(vals)[-3:]
        lo = pts[np.maximum(top - 1, 0)]
        hi = pts[np.minimum(top + 1, len(pts) - 1)]
        _, refined = search.golden_max(lambda x: np.abs(np.asarray(g(x), float)), lo, hi)
        return float(max(np.max(vals), np.max(refined)))

    # ---- transforms ------------------------------------------------------

    def rescale(self, c) -> "Measure":
        """Law of X/c: density x ↦ c·f(cx); same family, scaled parameters."""
        c = float(c)
        if not c > 0.0:
            raise DomainError(f"rescale factor must be positive, got {c}")
        f, p = self.family, self.params
        if f == "gaussian":
            return gaussian(p["mean"] / c, p["sd"] / c)
        if f == "laplace":
            return laplace(p["loc"] / c, p["scale"] / c)
        if f == "exponential":
            return exponential(p["rate"] * c)
        if f == "uniform":
            return uniform(p["lo"] / c, p["hi"] / c)
        if f == "logistic":
            return logistic(p["loc"] / c, p["scale"] / c)
        if f == "beta":
            return _beta_scaled(p["alpha"], p["beta"], p.get("scale", 1.0) / c)
        if f == "tabulated":
            return ingest_tabulated(self.dist.xs / c, self.dist.ds * c)
        raise UnsupportedMeasureError(f"rescale not defined for family {f!r}")

    # ---- cosmetics -------------------------------------------------------

    @property
    def label(self) -> str:
        if self.family == "tabulated":
            return f"tabulated({self.params['n']})"
        vals = ",".join(f"{v:g}" for v in self.params.values())
        return f"{self.family}({vals})"

    def __repr__(self):
        return f"Measure({self.label})"


# ---- analytic families ----------------------------------------------------


def _validated(name, value, positive=False):
    value = float(value)
    if not math.isfinite(value) or (positive and not value > 0.0):
        raise DomainError(f"invalid {name}: {value}")
    return value


def gaussian(mean=0.0, sd=1.0) -> Measure:
    mean = _validated("mean", mean)
    sd = _validated("sd", sd, positive=True)
    inv = 1.0 / (sd * sd)
    return Measure(
        family="gaussian",
        params={"mean": mean, "sd": sd},
        dist=stats.norm(mean, sd),
        support=(-math.inf, math.inf),
        log_concavity=STRICTLY_LOG_CONCAVE,
        potential_second_derivative=lambda x: np.full_like(
            np.asarray(x, dtype=float), inv
        ),
    )


def laplace(loc=0.0, scale=1.0) -> Measure:
    loc = _validated("loc", loc)
    scale = _validated("scale", scale, positive=True)
    return Measure(
        family="laplace",
        params={"loc": loc, "scale": scale},
        dist=stats.laplace(loc, scale),
        support=(-math.inf, math.inf),
        log_concavity=LOG_CONCAVE,
        knots=(loc,),
    )


def exponential(rate=1.0) -> Measure:
    rate = _validated("rate", rate, positive=True)
    return Measure(
        family="exponential",
        params={"rate": rate},
        dist=stats.expon(scale=1.0 / rate),
        support=(0.0, math.inf),
        log_concavity=LOG_CONCAVE,
    )


def uniform(lo=0.0, hi=1.0) -> Measure:
    lo = _validated("lo", lo)
    hi = _validated("hi", hi)
    if not hi > lo:
        raise DomainError(f"uniform needs lo < hi, got [{lo}, {hi}]")
    return Measure(
        family="uniform",
        params={"lo": lo, "hi": hi},
        dist=stats.uniform(loc=lo, scale=hi - lo),
        support=(lo, hi),
        log_concavity=LOG_CONCAVE,
    )


def logistic(loc=0.0, scale=1.0) -> Measure:
    loc = _validated("loc", loc)
    scale = _validated("scale", scale, positive=True)

    def phi2(x):
        z = (np.asarray(x, dtype=float) - loc) / scale
        with np.errstate(over="ignore"):
            ch = np.cosh(z / 2.0)
            return 1.0 / (2.0 * scale * scale * ch * ch)

    return Measure(
        family="logistic",
        params={"loc": loc, "scale": scale},
        dist=stats.logistic(loc, scale),
        support=(-math.inf, math.inf),
        log_concavity=STRICTLY_LOG_CONCAVE,
        potential_second_derivative=phi2,
    )


def _beta_scaled(alpha, beta_, scale) -> Measure:
    alpha = _validated("alpha", alpha, positive=True)
    beta_ = _validated("beta", beta_, positive=True)
    scale = _validated("scale", scale, positive=True)
    if alpha >= 1.0 and beta_ >= 1.0:
        concavity = (
            STRICTLY_LOG_CONCAVE if max(alpha, beta_) > 1.0 else LOG_CONCAVE
        )
    else:
        concavity = LOG_CONCAVITY_NONE
    phi2 = None
    if concavity == STRICTLY_LOG_CONCAVE:

        def phi2(x):
            u = np.asarray(x, dtype=float) / scale
            with np.errstate(divide="ignore"):
                return ((alpha - 1.0) / u**2 + (beta_ - 1.0) / (1.0 - u) ** 2) / (
                    scale * scale
                )

    params = {"alpha": alpha, "beta": beta_}
    if scale != 1.0:
        params["scale"] = scale
    return Measure(
        family="beta",
        params=params,
        dist=stats.beta(alpha, beta_, loc=0.0, scale=scale),
        support=(0.0, scale),
        log_concavity=concavity,
        potential_second_derivative=phi2,
    )


def beta(alpha, beta_) -> Measure:
    return _beta_scaled(alpha, beta_, 1.0)


def from_scipy(
    dist,
    family="custom",
    params=None,
    log_concavity=LOG_CONCAVITY_NONE,
    potential_second_derivative=None,
    knots=(),
) -> Measure:
    """Wrap any frozen scipy-like continuous distribution (duck-typed)."""
    a, b = (float(v) for v in dist.support())
    return Measure(
        family=family,
        params=dict(params or {}),
        dist=dist,
        support=(a, b),
        log_concavity=log_concavity,
        potential_second_derivative=potential_second_derivative,
        knots=tuple(knots),
    )


# ---- tabulated densities ---------------------------------------------------


class _TabulatedDist:
    """Piecewise-linear pdf; cdf/sf are its exact piecewise-quadratic
    integrals accumulated from their own end (no upper-tail cancellation);
    quantiles by vectorized bisection on the exact cdf/sf."""

    def __init__(self, xs: np.ndarray, ds: np.ndarray):
        self.xs = xs
        self.ds = ds
        seg = np.diff(xs) * 0.5 * (ds[:-1] + ds[1:])
        total = float(np.sum(seg))
        self._cum = np.concatenate([[0.0], np.cumsum(seg)]) / total
        self._cum[-1] = 1.0
        self._suf = np.concatenate([np.cumsum(seg[::-1])[::-1], [0.0]]) / total
        self._suf[0] = 1.0

    def support(self):
        return float(self.xs[0]), float(self.xs[-1])

    def pdf(self, x):
        return np.interp(np.asarray(x, dtype=float), self.xs, self.ds,
                         left=0.0, right=0.0)

    def _segment(self, x):
        idx = np.searchsorted(self.xs, x, side="right") - 1
        return np.clip(idx, 0, len(self.xs) - 2)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        i = self._segment(x)
        u = x - self.xs[i]
        slope = (self.ds[i + 1] - self.ds[i]) / (self.xs[i + 1] - self.xs[i])
        val = self._cum[i] + u * (self.ds[i] + 0.5 * slope * u)
        val = np.where(x <= self.xs[0], 0.0, np.where(x >= self.xs[-1], 1.0, val))
        return np.clip(val, 0.0, 1.0)

    def sf(self, x):
        x = np.asarray(x, dtype=float)
        i = self._segment(x)
        u = x - self.xs[i]
        slope = (self.ds[i + 1] - self.ds[i]) / (self.xs[i + 1] - self.xs[i])
        dx_here = self.ds[i] + slope * u
        rest = (self.xs[i + 1] - x) * 0.5 * (dx_here + self.ds[i + 1])
        val = self._suf[i + 1] + rest
        val = np.where(x <= self.xs[0], 1.0, np.where(x >= self.xs[-1], 0.0, val))
        return np.clip(val, 0.0, 1.0)

    def ppf(self, t):
        t = np.asarray(t, dtype=float)
        lo = np.full(t.shape, self.xs[0])
        hi = np.full(t.shape, self.xs[-1])
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            below = self.cdf(mid) < t
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        return 0.5 * (lo + hi)

    def isf(self, s):
        s = np.asarray(s, dtype=float)
        lo = np.full(s.shape, self.xs[0])
        hi = np.full(s.shape, self.xs[-1])
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            above = self.sf(mid) > s
            lo = np.where(above, mid, lo)
            hi = np.where(above, hi, mid)
        return 0.5 * (lo + hi)


def ingest_tabulated(nodes, values) -> Measure:
    """Normalized measure from (node, density) samples.

    Requires ≥8 strictly increasing finite nodes, nonnegative values,
    strictly positive on the interior; endpoints may carry zero density.
    """
    xs = np.asarray(nodes, dtype=float).ravel()
    ds = np.asarray(values, dtype=float).ravel()
    if xs.shape != ds.shape:
        raise IngestionError(
            f"nodes and values disagree in length: {xs.shape} vs {ds.shape}"
        )
    if len(xs) < 8:
        raise IngestionError(f"need at least 8 nodes, got {len(xs)}")
    if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ds))):
        raise IngestionError("nodes and values must all be finite")
    if not np.all(np.diff(xs) > 0):
        raise IngestionError("nodes must be strictly increasing")
    if np.any(ds < 0):
        raise IngestionError("density values must be nonnegative")
    if not np.all(ds[1:-1] > 0):
        raise IngestionError(
            "density must be strictly positive on the interior "
            "(all-zero input included)"
        )
    total = float(np.sum(np.diff(xs) * 0.5 * (ds[:-1] + ds[1:])))
    if not total > 0:
        raise IngestionError("density integrates to zero")
    dist = _TabulatedDist(xs, ds / total)
    return Measure(
        family="tabulated",
        params={"n": len(xs)},
        dist=dist,
        support=(float(xs[0]), float(xs[-1])),
        log_concavity=LOG_CONCAVITY_NONE,
        knots=tuple(float(x) for x in xs[1:-1]),
    )


def load_tabulated(path) -> Measure:
    """Read whitespace-separated `x density` pairs; `#` starts a comment."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise IngestionError(f"cannot read tabulated density {path!r}: {exc}")
    xs, ds = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise IngestionError(
                f"{path}:{lineno}: expected `x density`, got {raw!r}"
            )
        try:
            xs.append(float(parts[0]))
            ds.append(float(parts[1]))
        except ValueError:
            raise IngestionError(
                f"{path}:{lineno}: non-numeric entry in {raw!r}"
            )
    return ingest_tabulated(xs, ds)
