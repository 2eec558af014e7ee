"""Run configuration: schema, parsing, and validation for the runner.

A run is described by a flat JSON object (or the equivalent dict built by
the CLI from flags).  Keys:

    measures        list of measure specs, "family:p1,p2,..." or
                    "tabulated:<path>"
    functions       list of expression strings (see functions.parse_expression)
    checks          list of check names, or objects {"name": ..., "<key>":
                    [grid values]} for checks with parameter grids
    pass_tol        relative pass tolerance for certificates (default 1e-6)
    quad_rel_tol    quadrature relative tolerance (default 1e-9)
    quad_abs_tol    quadrature absolute tolerance (default 1e-13)
    seed            integer; when present, a battery of random piecewise-
                    linear functions with seeded knots is appended to
                    `functions`
    debug_rhs_scale scales every certificate rhs (negative-control runs)
    output_format   "csv" or "json" (default "csv")
    output_path     file to write the report to (default: stdout)

Validation collects *all* problems, each tagged with the offending field,
and raises a single ConfigError.
"""

from __future__ import annotations

import difflib
import json
import math
import os
from dataclasses import dataclass, field

from . import functions, measures
from .certificates import DEFAULT_PASS_TOL
from .errors import (
    ConfigError,
    DomainError,
    ExpressionError,
    IngestionError,
)
from .quadrature import DEFAULT_ABS_TOL, DEFAULT_REL_TOL

__all__ = [
    "CHECKS",
    "CheckSpec",
    "RunConfig",
    "default_config_dict",
    "load_config",
    "parse_config",
    "parse_measure_spec",
]


# ---------------------------------------------------------------------------
# check registry: grid keys, defaults, and whether the check consumes the
# function battery.  The runner binds names to the actual check calls; the
# two tables are kept aligned by a test.
# ---------------------------------------------------------------------------

_POINCARE_VARIANTS = ("centered_2p", "centered_p", "raw_2p", "raw_p")
_ORLICZ_WHICH = ("median_centered", "mean_centered")
_COV_SIDES = ("left", "right")
_YOUNG_SPECS = ("psi1",)  # plus "|x|^p" forms, validated by pattern


@dataclass(frozen=True)
class _CheckInfo:
    needs_function: bool
    defaults: dict
    choices: dict = field(default_factory=dict)


CHECKS: dict[str, _CheckInfo] = {
    "cov_l1_linf": _CheckInfo(True, {}),
    "cov_lp_lq_T": _CheckInfo(True, {"p": (1.5, 2.0)}),
    "cov_lp_lq": _CheckInfo(True, {"p": (1.0, 2.0)}),
    "cheeger": _CheckInfo(True, {}),
    "cov_final": _CheckInfo(True, {"p": (2.0,)}),
    "brascamp_lieb": _CheckInfo(True, {}),
    "cov_variant": _CheckInfo(
        True, {"side": _COV_SIDES}, {"side": _COV_SIDES}
    ),
    "lp_poincare": _CheckInfo(
        True,
        {"p": (2.0,), "variant": ("centered_2p",)},
        {"variant": _POINCARE_VARIANTS},
    ),
    "mean_median_sandwich": _CheckInfo(True, {}),
    "orlicz": _CheckInfo(
        True,
        {"young": ("|x|^2",), "which": ("median_centered",)},
        {"which": _ORLICZ_WHICH},
    ),
    "hardy": _CheckInfo(True, {"p": (2.0,)}),
    "moment_growth": _CheckInfo(False, {"p": (1.0, 2.0, 3.0)}),
    "psi1_bound": _CheckInfo(False, {}),
    "moment_comparison": _CheckInfo(False, {"p": (2.0,)}),
    "logconcave_moments": _CheckInfo(False, {"p": (2.0,)}),
}

_GRID_KEYS = {"p", "variant", "side", "young", "which"}

_FAMILY_ARITY = {
    "laplace": ("loc, scale", 2),
    "gaussian": ("mean, sd", 2),
    "uniform": ("lo, hi", 2),
    "exponential": ("rate", 1),
    "logistic": ("loc, scale", 2),
    "beta": ("alpha, beta", 2),
}

_FAMILY_FACTORY = {
    "laplace": measures.laplace,
    "gaussian": measures.gaussian,
    "uniform": measures.uniform,
    "exponential": measures.exponential,
    "logistic": measures.logistic,
    "beta": measures.beta,
}


@dataclass(frozen=True, eq=False)
class CheckSpec:
    """One configured check: registry name plus its parameter grid."""

    name: str
    grid: dict  # key -> tuple of values, defaults already filled in


@dataclass(frozen=True, eq=False)
class RunConfig:
    measures: tuple  # of measures.Measure
    measure_specs: tuple  # of str, parallel to measures
    functions: tuple  # of functions.Expression
    checks: tuple  # of CheckSpec
    pass_tol: float = DEFAULT_PASS_TOL
    quad_rel_tol: float = DEFAULT_REL_TOL
    quad_abs_tol: float = DEFAULT_ABS_TOL
    seed: int | None = None
    debug_rhs_scale: float | None = None
    output_format: str = "csv"
    output_path: str | None = None


def default_config_dict() -> dict:
    """The full default suite: all checks at default grids, four families."""
    return {
        "measures": [
            "laplace:0,1",
            "gaussian:0,1",
            "uniform:0,1",
            "exponential:1",
        ],
        "functions": ["x", "x^2", "center(x)"],
        "checks": sorted(CHECKS),
    }


def parse_measure_spec(spec: str):
    """Build a measure from "family:p1,p2" or "tabulated:<path>".

    Raises DomainError/IngestionError with a self-contained message; the
    config parser wraps these with the field location.
    """
    text = str(spec).strip()
    family, sep, rest = text.partition(":")
    family = family.strip().lower()
    if family == "tabulated":
        if not sep or not rest.strip():
            raise DomainError("tabulated spec needs a path: tabulated:<path>")
        path = rest.strip()
        if not os.path.exists(path):
            raise DomainError(f"tabulated file not found: {path}")
        return measures.load_tabulated(path)
    if family not in _FAMILY_ARITY:
        known = ", ".join(sorted(_FAMILY_ARITY) + ["tabulated"])
        hint = difflib.get_close_matches(family, list(_FAMILY_ARITY), n=1)
        extra = f" (did you mean {hint[0]!r}?)" if hint else ""
        raise DomainError(f"unknown family {family!r}{extra}; known: {known}")
    argnames, arity = _FAMILY_ARITY[family]
    parts = [s for s in rest.split(",")] if sep else []
    try:
        args = [float(s) for s in parts]
    except ValueError:
        raise DomainError(f"non-numeric parameter in {text!r}")
    if len(args) != arity or any(not math.isfinite(a) for a in args):
        raise DomainError(
            f"{family} takes {arity} finite parameters ({argnames}), "
            f"got {text!r}"
        )
    return _FAMILY_FACTORY[family](*args)


def _suggest_check(name: str) -> str:
    hits = difflib.get_close_matches(name, list(CHECKS), n=1)
    return f" (did you mean {hits[0]!r}?)" if hits else ""


def _coerce_grid_values(key, raw):
    """Normalize a grid entry to a tuple; scalars become one-element grids."""
    if isinstance(raw, (list, tuple)):
        return tuple(raw)
    return (raw,)


def _valid_young(spec) -> bool:
    if not isinstance(spec, str):
        return False
    s = spec.strip()
    if s in _YOUNG_SPECS:
        return True
    if s.startswith("|x|^"):
        try:
            return float(s[4:]) >= 1.0
        except ValueError:
            return False
    return False


def _parse_checks(raw, errors):
    specs = []
    if not isinstance(raw, list) or not raw:
        errors.append("checks: must be a non-empty list")
        return specs
    for i, entry in enumerate(raw):
        loc = f"checks[{i}]"
        if isinstance(entry, str):
            entry = {"name": entry}
        if not isinstance(entry, dict) or "name" not in entry:
            errors.append(f"{loc}: must be a check name or an object with 'name'")
            continue
        name = entry["name"]
        if name not in CHECKS:
            errors.append(f"{loc}.name: unknown check {name!r}{_suggest_check(name)}")
            continue
        info = CHECKS[name]
        grid = {k: tuple(v) for k, v in info.defaults.items()}
        bad = False
        for key, raw_vals in entry.items():
            if key == "name":
                continue
            if key not in _GRID_KEYS or key not in info.defaults:
                errors.append(f"{loc}.{key}: check {name!r} takes no {key!r} grid")
                bad = True
                continue
            vals = _coerce_grid_values(key, raw_vals)
            if not vals:
                errors.append(f"{loc}.{key}: empty grid")
                bad = True
                continue
            if key == "p":
                ok = []
                for j, v in enumerate(vals):
                    if not isinstance(v, (int, float)) or not v >= 1.0:
                        errors.append(f"{loc}.p[{j}]: p must be >= 1, got {v!r}")
                        bad = True
                    else:
                        ok.append(float(v))
                vals = tuple(ok)
            elif key == "young":
                for j, v in enumerate(vals):
                    if not _valid_young(v):
                        errors.append(
                            f"{loc}.young[{j}]: expected 'psi1' or '|x|^p' "
                            f"with p >= 1, got {v!r}"
                        )
                        bad = True
            else:
                choices = info.choices.get(key, ())
                for j, v in enumerate(vals):
                    if v not in choices:
                        errors.append(
                            f"{loc}.{key}[{j}]: must be one of "
                            f"{', '.join(choices)}; got {v!r}"
                        )
                        bad = True
            grid[key] = vals
        if not bad:
            specs.append(CheckSpec(name=name, grid=grid))
    return specs


def _parse_number(cfg, key, default, errors, *, positive=True, integer=False):
    if key not in cfg or cfg[key] is None:
        return default
    v = cfg[key]
    if integer:
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            errors.append(f"{key}: must be a nonnegative integer, got {v!r}")
            return default
        return int(v)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        errors.append(f"{key}: must be a number, got {v!r}")
        return default
    v = float(v)
    if positive and not (v > 0.0 and math.isfinite(v)):
        errors.append(f"{key}: must be a positive finite number, got {v!r}")
        return default
    return v


_KNOWN_KEYS = {
    "measures",
    "functions",
    "checks",
    "pass_tol",
    "quad_rel_tol",
    "quad_abs_tol",
    "seed",
    "debug_rhs_scale",
    "output_format",
    "output_path",
}


def parse_config(text_or_dict) -> RunConfig:
    """Parse and validate a run configuration.

    Accepts the JSON text or an already-decoded dict.  Every problem found
    is collected; a ConfigError carrying the full list is raised if any.
    """
    errors: list[str] = []
    if isinstance(text_or_dict, dict):
        cfg = text_or_dict
    else:
        try:
            cfg = json.loads(text_or_dict)
        except json.JSONDecodeError as exc:
            raise ConfigError([f"config is not valid JSON: {exc}"])
    if not isinstance(cfg, dict):
        raise ConfigError(["config must be a JSON object"])

    for key in sorted(set(cfg) - _KNOWN_KEYS):
        errors.append(f"{key}: unknown key")

    ms, specs = [], []
    raw_measures = cfg.get("measures")
    if not isinstance(raw_measures, list) or not raw_measures:
        errors.append("measures: must be a non-empty list of measure specs")
    else:
        for i, spec in enumerate(raw_measures):
            try:
                ms.append(parse_measure_spec(spec))
                specs.append(str(spec).strip())
            except (DomainError, IngestionError) as exc:
                errors.append(f"measures[{i}]: {exc}")

    exprs = []
    raw_fns = cfg.get("functions", [])
    if not isinstance(raw_fns, list):
        errors.append("functions: must be a list of expression strings")
        raw_fns = []
    for i, text in enumerate(raw_fns):
        try:
            exprs.append(functions.parse_expression(str(text)))
        except ExpressionError as exc:
            errors.append(f"functions[{i}]: {exc}")

    checks = _parse_checks(cfg.get("checks"), errors)

    pass_tol = _parse_number(cfg, "pass_tol", DEFAULT_PASS_TOL, errors)
    quad_rel = _parse_number(cfg, "quad_rel_tol", DEFAULT_REL_TOL, errors)
    quad_abs = _parse_number(cfg, "quad_abs_tol", DEFAULT_ABS_TOL, errors)
    seed = _parse_number(cfg, "seed", None, errors, integer=True)
    scale = _parse_number(cfg, "debug_rhs_scale", None, errors)

    fmt = cfg.get("output_format", "csv")
    if fmt not in ("csv", "json"):
        errors.append(f"output_format: must be 'csv' or 'json', got {fmt!r}")
        fmt = "csv"
    path = cfg.get("output_path")
    if path is not None and not isinstance(path, str):
        errors.append(f"output_path: must be a string path, got {path!r}")
        path = None

    needs_fn = [c.name for c in checks if CHECKS[c.name].needs_function]
    if needs_fn and not exprs and seed is None:
        errors.append(
            "functions: checks "
            + ", ".join(sorted(set(needs_fn)))
            + " need a function battery but none is configured "
            "(add expressions or a seed)"
        )

    if errors:
        raise ConfigError(errors)
    return RunConfig(
        measures=tuple(ms),
        measure_specs=tuple(specs),
        functions=tuple(exprs),
        checks=tuple(checks),
        pass_tol=pass_tol,
        quad_rel_tol=quad_rel,
        quad_abs_tol=quad_abs,
        seed=seed,
        debug_rhs_scale=scale,
        output_format=fmt,
        output_path=path,
    )


def load_config(path) -> RunConfig:
    """Read a JSON config file and parse it."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError([f"cannot read config file {path!r}: {exc}"])
    return parse_config(text)
