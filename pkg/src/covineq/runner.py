"""Execute a RunConfig: sweep cells, collect certificates, emit a report.

Cells are all (measure x function x check x grid-point) combinations for
function-battery checks and (measure x check x grid-point) for measure-level
checks.  A cell that raises a library error is recorded in the report with a
``status`` explaining why (skip:* for inapplicable cells, error:* for
numerical failures) instead of aborting the sweep; the exit code summarizes
the worst outcome.

Exit codes: 0 all executed certificates pass, 1 at least one certificate
fails beyond tolerance, 2 config error (raised by the config parser before
this module runs), 3 numerical failure anywhere in the sweep.
"""

from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass

import numpy as np

from . import config as config_mod
from . import functions, inequalities, kernel, quadrature
from .certificates import (
    InequalityCertificate,
    _params_text,
    debug_rhs_scale,
    pass_tol_override,
    to_csv,
    to_json,
)
from .errors import (
    ComputationError,
    DivergentNormError,
    DomainError,
    HypothesisViolatedError,
    IntegrationError,
    UnsupportedMeasureError,
)
from .isoperimetry import isoperimetric_constant

__all__ = ["RunResult", "near_extremal_increasing", "run"]

EXIT_PASS = 0
EXIT_CERT_FAILURE = 1
EXIT_CONFIG_ERROR = 2
EXIT_NUMERICAL = 3

_BATTERY_SIZE = 2
_BATTERY_NODES = 6


def _young_from_spec(spec: str) -> inequalities.YoungFunction:
    s = spec.strip()
    if s == "psi1":
        return inequalities.young_psi1()
    return inequalities.young_power(float(s[4:]))


# name -> (takes_function, callable); grids arrive as keyword arguments
_ADAPTERS = {
    "cov_l1_linf": lambda m, fn: inequalities.check_cov_l1_linf(m, fn, fn),
    "cov_lp_lq_T": lambda m, fn, p: inequalities.check_cov_lp_lq_T(m, fn, fn, p),
    "cov_lp_lq": lambda m, fn, p: inequalities.check_cov_lp_lq(m, fn, fn, p),
    "cheeger": lambda m, fn: inequalities.check_cheeger(m, fn),
    "cov_final": lambda m, fn, p: inequalities.check_cov_final(m, fn, fn, p),
    "brascamp_lieb": lambda m, fn: inequalities.check_brascamp_lieb(m, fn, fn),
    "cov_variant": lambda m, fn, side: inequalities.check_cov_variant(
        m, fn, fn, side
    ),
    "lp_poincare": lambda m, fn, p, variant: inequalities.check_lp_poincare(
        m, fn, p, variant
    ),
    "mean_median_sandwich": lambda m, fn: inequalities.check_mean_median_sandwich(
        m, fn
    ),
    "orlicz": lambda m, fn, young, which: inequalities.check_orlicz(
        m, fn, _young_from_spec(young), which
    ),
    "hardy": lambda m, fn, p: kernel.hardy_certificate(m, fn, m.median(), p),
    "moment_growth": lambda m, p: inequalities.check_moment_growth(m, p),
    "psi1_bound": lambda m: inequalities.check_psi1_bound(m),
    "moment_comparison": lambda m, p: inequalities.check_moment_comparison(m, p),
    "logconcave_moments": lambda m, p: inequalities.check_logconcave_moments(
        m, p
    ),
}

assert set(_ADAPTERS) == set(config_mod.CHECKS)

# key under which each check reports its battery function (default "g")
_FN_PARAM_KEY = {"lp_poincare": "u", "orlicz": "f", "hardy": "h"}


@dataclass(frozen=True, eq=False)
class RunResult:
    exit_code: int
    report: str
    certificates: tuple
    statuses: tuple


def near_extremal_increasing(m) -> functions.DifferentiableFunction:
    """A strictly increasing g whose derivative concentrates at the median.

    The l1/linf covariance ratio of estimate_best_constant converges to
    E|g - med(g)| / E|g'|, which approaches its supremum 1/Is when g' piles
    its mass where the isoperimetric ratio is smallest.  For the symmetric
    and monotone-profile families that point is the median, so a steep
    narrow ramp there (slope 1 elsewhere, to stay strictly increasing) is
    near-extremal.  This is the default g for the best-constant subcommand.
    """
    lo, hi = m.integration_domain()
    a = float(m.quantile(0.499))
    b = float(m.quantile(0.501))
    rise = 1000.0 * float(m.quantile(0.999) - m.quantile(0.001))
    xs = [lo, a, b, hi]
    ys = [0.0, a - lo, a - lo + rise, a - lo + rise + (hi - b)]
    return functions.piecewise_linear(xs, ys, descriptor="steep_median_ramp")


def _random_battery(m, rng, seed) -> list:
    """Random piecewise-linear functions with seeded knots for one measure."""
    fns = []
    for i in range(_BATTERY_SIZE):
        t = np.sort(rng.uniform(0.03, 0.97, size=_BATTERY_NODES))
        xs = np.unique(np.asarray(m.quantile(t), dtype=float))
        ys = rng.standard_normal(xs.size)
        if xs.size < 2:
            continue
        fns.append(
            functions.piecewise_linear(
                xs, ys, descriptor=f"pwl[seed={seed}]#{i}"
            )
        )
    return fns


def _classify(exc) -> str:
    if isinstance(exc, HypothesisViolatedError):
        return "skip:hypothesis"
    if isinstance(exc, UnsupportedMeasureError):
        return "skip:unsupported-measure"
    if isinstance(exc, DomainError):
        return "skip:domain"
    if isinstance(exc, IntegrationError):
        return "error:integration"
    if isinstance(exc, DivergentNormError):
        return "error:divergent-norm"
    if isinstance(exc, ComputationError):
        return "error:computation"
    raise exc


def _placeholder(name, params, tol) -> InequalityCertificate:
    nan = math.nan
    return InequalityCertificate(
        name=name,
        params=dict(params),
        lhs=nan,
        rhs=nan,
        ratio=nan,
        slack=nan,
        side_conditions={},
        passed=False,
        tol=tol,
    )


def _grid_points(grid: dict):
    """Cartesian product of the grid, keys in sorted order, values in order."""
    keys = sorted(grid)
    points = [{}]
    for key in keys:
        points = [dict(pt, **{key: v}) for pt in points for v in grid[key]]
    return points


def _sort_key(cert: InequalityCertificate):
    p = cert.params.get("p", None)
    p_key = float(p) if isinstance(p, (int, float)) else -1.0
    return (
        cert.name,
        str(cert.params.get("family", "")),
        _params_text(cert.params),
        p_key,
    )


def run(config) -> RunResult:
    """Execute every cell of the config; always produce a full report."""
    entries = []  # (certificate, status)
    rng = np.random.default_rng(config.seed) if config.seed is not None else None

    with contextlib.ExitStack() as stack:
        stack.enter_context(
            quadrature.tolerance_override(config.quad_rel_tol, config.quad_abs_tol)
        )
        stack.enter_context(pass_tol_override(config.pass_tol))
        if config.debug_rhs_scale is not None:
            stack.enter_context(debug_rhs_scale(config.debug_rhs_scale))

        for m in config.measures:
            params = {"family": m.label}
            try:
                prof = isoperimetric_constant(m)
            except (IntegrationError, ComputationError) as exc:
                entries.append(
                    (
                        _placeholder("isoperimetric_constant", params, config.pass_tol),
                        _classify(exc),
                    )
                )
                prof = None
            if prof is not None:
                v = prof.is_value
                entries.append(
                    (
                        InequalityCertificate(
                            name="isoperimetric_constant",
                            params=params,
                            lhs=v,
                            rhs=v,
                            ratio=1.0,
                            slack=0.0,
                            side_conditions={"argmin_t": prof.argmin_t},
                            passed=True,
                            tol=config.pass_tol,
                            uninformative=prof.diverging_tail,
                        ),
                        "info",
                    )
                )

            battery = []
            for expr in config.functions:
                try:
                    battery.append(expr.bind(m))
                except (IntegrationError, ComputationError, DomainError) as exc:
                    entries.append(
                        (
                            _placeholder(
                                "function_battery",
                                {"family": m.label, "g": expr.text},
                                config.pass_tol,
                            ),
                            _classify(exc),
                        )
                    )
            if rng is not None:
                battery.extend(_random_battery(m, rng, config.seed))

            for spec in config.checks:
                adapter = _ADAPTERS[spec.name]
                needs_fn = config_mod.CHECKS[spec.name].needs_function
                fns = battery if needs_fn else [None]
                for fn in fns:
                    for point in _grid_points(spec.grid):
                        try:
                            if needs_fn:
                                cert = adapter(m, fn, **point)
                            else:
                                cert = adapter(m, **point)
                            status = "ok" if cert.passed else "fail"
                        except Exception as exc:  # noqa: BLE001 - classified below
                            pp = {"family": m.label, **point}
                            if needs_fn:
                                key = _FN_PARAM_KEY.get(spec.name, "g")
                                pp[key] = fn.descriptor
                            cert = _placeholder(spec.name, pp, config.pass_tol)
                            status = _classify(exc)
                        entries.append((cert, status))

    entries.sort(key=lambda e: _sort_key(e[0]))
    certs = tuple(c for c, _ in entries)
    statuses = tuple(s for _, s in entries)
    serializer = to_csv if config.output_format == "csv" else to_json
    report = serializer(certs, statuses=statuses, quad_tol=config.quad_rel_tol)

    if any(s.startswith("error") for s in statuses):
        code = EXIT_NUMERICAL
    elif any(s == "fail" for s in statuses):
        code = EXIT_CERT_FAILURE
    else:
        code = EXIT_PASS

    if config.output_path is not None:
        with open(config.output_path, "w", encoding="utf-8") as fh:
            fh.write(report)
    return RunResult(
        exit_code=code,
        report=report,
        certificates=certs,
        statuses=statuses,
    )
