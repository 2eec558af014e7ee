"""Command-line interface.

Subcommands:
    iso            isoperimetric constant (and optionally the ratio profile)
    verify         certificate suite from a config file or ad-hoc flags
    hardy          transform-norm sweep over measures and exponents
    best-constant  ramp-sequence estimate of the optimal l1/linf constant
    sharpness      monomial sharpness sweep for the Poincaré family
    moments        moment-growth / comparison / log-concave suite

Global flags (before the subcommand) override config-file values.  Exit
codes: 0 all executed certificates pass, 1 certificate failure, 2 config
error, 3 numerical failure.  Output is plain text; no environment variable
is consulted except NO_COLOR, which is trivially honored because reports
are never colorized.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import config as config_mod
from . import functions, inequalities, runner
from .certificates import to_csv, to_json
from .errors import (
    ComputationError,
    ConfigError,
    CovineqError,
    DivergentNormError,
    DomainError,
    HypothesisViolatedError,
    IngestionError,
    IntegrationError,
    UnsupportedMeasureError,
)
from .isoperimetry import isoperimetric_constant

__all__ = ["main"]


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="covineq",
        description="Certify one-dimensional covariance, Poincaré, Orlicz, "
        "and moment inequalities against exact isoperimetric constants.",
    )
    ap.add_argument("--seed", type=int, default=None, metavar="N",
                    help="seed for the random piecewise-linear function battery")
    ap.add_argument("--pass-tol", type=float, default=None, metavar="TOL",
                    help="relative pass tolerance for certificates")
    ap.add_argument("--quad-rel-tol", type=float, default=None, metavar="TOL",
                    help="quadrature relative tolerance")
    ap.add_argument("--quad-abs-tol", type=float, default=None, metavar="TOL",
                    help="quadrature absolute tolerance")
    ap.add_argument("--debug-rhs-scale", type=float, default=None, metavar="C",
                    help="scale every certificate rhs by C (negative controls)")
    ap.add_argument("--output", default=None, metavar="PATH",
                    help="write the report to PATH instead of stdout")
    ap.add_argument("--format", choices=("csv", "json"), default=None,
                    help="report format (default csv)")

    sub = ap.add_subparsers(dest="command", metavar="SUBCOMMAND")

    p_iso = sub.add_parser("iso", help="print the isoperimetric constant")
    p_iso.add_argument("--measure", required=True, metavar="SPEC",
                       help="family:params, e.g. laplace:0,1 or tabulated:<path>")
    p_iso.add_argument("--grid-size", type=int, default=1024)
    p_iso.add_argument("--profile-out", default=None, metavar="PATH",
                       help="write the ratio profile CSV to PATH ('-' for stdout)")

    p_verify = sub.add_parser("verify", help="run a certificate suite")
    p_verify.add_argument("--config", default=None, metavar="PATH",
                          help="JSON run configuration")
    p_verify.add_argument("--measure", action="append", default=None,
                          metavar="SPEC")
    p_verify.add_argument("--function", action="append", default=None,
                          metavar="EXPR")
    p_verify.add_argument("--check", action="append", default=None,
                          metavar="NAME")

    p_hardy = sub.add_parser("hardy", help="transform-norm sweep")
    p_hardy.add_argument("--measure", action="append", default=None,
                         metavar="SPEC")
    p_hardy.add_argument("--p", default="1.5,2,3,5", metavar="LIST")
    p_hardy.add_argument("--function", action="append", default=None,
                         metavar="EXPR")

    p_best = sub.add_parser("best-constant",
                            help="ramp-sequence estimate of the l1/linf constant")
    p_best.add_argument("--measure", required=True, metavar="SPEC")
    p_best.add_argument("--g", default=None, metavar="EXPR",
                        help="strictly increasing test function "
                        "(default: steep ramp at the median)")
    p_best.add_argument("--deltas", default="1e-1,1e-2,1e-3", metavar="LIST")

    p_sharp = sub.add_parser("sharpness", help="monomial sharpness sweep")
    p_sharp.add_argument("--measure", default="laplace:0,1", metavar="SPEC")
    p_sharp.add_argument("--p", type=float, default=2.0)
    p_sharp.add_argument("--k", default="1,3,5", metavar="LIST")

    p_mom = sub.add_parser("moments", help="moment-inequality suite")
    p_mom.add_argument("--measure", action="append", default=None,
                       metavar="SPEC")
    p_mom.add_argument("--p", default="1,2,3", metavar="LIST")

    return ap


def _float_list(text, flag):
    try:
        vals = [float(s) for s in str(text).split(",") if s.strip()]
    except ValueError:
        raise ConfigError([f"{flag}: expected a comma-separated number list"])
    if not vals:
        raise ConfigError([f"{flag}: empty list"])
    return vals


def _emit(report, path):
    if path is None:
        sys.stdout.write(report)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(report)


def _overlay(cfg_dict: dict, args) -> dict:
    """Apply global CLI flags on top of a config dict."""
    for key, val in (
        ("pass_tol", args.pass_tol),
        ("quad_rel_tol", args.quad_rel_tol),
        ("quad_abs_tol", args.quad_abs_tol),
        ("seed", args.seed),
        ("debug_rhs_scale", args.debug_rhs_scale),
        ("output_format", args.format),
        ("output_path", args.output),
    ):
        if val is not None:
            cfg_dict[key] = val
    return cfg_dict


def _run_suite(cfg_dict, args) -> int:
    cfg = config_mod.parse_config(_overlay(cfg_dict, args))
    result = runner.run(cfg)
    if cfg.output_path is None:
        sys.stdout.write(result.report)
    n = len(result.statuses)
    fails = sum(s == "fail" for s in result.statuses)
    skips = sum(s.startswith("skip") for s in result.statuses)
    errs = sum(s.startswith("error") for s in result.statuses)
    print(
        f"{n} rows: {n - fails - skips - errs} ok, {fails} fail, "
        f"{skips} skipped, {errs} errors",
        file=sys.stderr,
    )
    return result.exit_code


def _cmd_iso(args) -> int:
    m = config_mod.parse_measure_spec(args.measure)
    prof = isoperimetric_constant(m, grid_size=args.grid_size)
    print(f"{prof.is_value:.6f}")
    if args.profile_out == "-":
        sys.stdout.write(prof.to_csv())
    elif args.profile_out is not None:
        with open(args.profile_out, "w", encoding="utf-8") as fh:
            fh.write(prof.to_csv())
    return 0


def _cmd_verify(args) -> int:
    if args.config is not None:
        if args.measure or args.function or args.check:
            raise ConfigError(
                ["--config cannot be combined with --measure/--function/--check"]
            )
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                cfg_dict = json.load(fh)
        except OSError as exc:
            raise ConfigError([f"cannot read config file: {exc}"])
        except json.JSONDecodeError as exc:
            raise ConfigError([f"config is not valid JSON: {exc}"])
        if not isinstance(cfg_dict, dict):
            raise ConfigError(["config must be a JSON object"])
    else:
        cfg_dict = config_mod.default_config_dict()
        if args.measure:
            cfg_dict["measures"] = args.measure
        if args.function:
            cfg_dict["functions"] = args.function
        if args.check:
            cfg_dict["checks"] = args.check
    return _run_suite(cfg_dict, args)


def _cmd_hardy(args) -> int:
    ps = _float_list(args.p, "--p")
    cfg_dict = {
        "measures": args.measure
        or ["laplace:0,1", "gaussian:0,1", "uniform:0,1", "exponential:1"],
        "functions": args.function or ["x", "x^2", "center(x)"],
        "checks": [{"name": "hardy", "p": ps}],
    }
    return _run_suite(cfg_dict, args)


def _cmd_moments(args) -> int:
    ps = _float_list(args.p, "--p")
    checks: list = [
        {"name": "moment_growth", "p": ps},
        "psi1_bound",
    ]
    if any(p > 1.0 for p in ps):
        checks.append({"name": "moment_comparison", "p": [p for p in ps if p > 1.0]})
    if any(p >= 2.0 for p in ps):
        checks.append(
            {"name": "logconcave_moments", "p": [p for p in ps if p >= 2.0]}
        )
    cfg_dict = {
        "measures": args.measure
        or ["laplace:0,1", "gaussian:0,1", "uniform:0,1", "exponential:1"],
        "functions": [],
        "checks": checks,
    }
    return _run_suite(cfg_dict, args)


def _cmd_sharpness(args) -> int:
    m = config_mod.parse_measure_spec(args.measure)
    ks = [int(v) for v in _float_list(args.k, "--k")]
    certs = inequalities.sharpness_sweep(m, args.p, ks)
    statuses = tuple("ok" if c.passed else "fail" for c in certs)
    serializer = to_csv if (args.format or "csv") == "csv" else to_json
    _emit(serializer(certs, statuses=statuses), args.output)
    return 0 if all(c.passed for c in certs) else runner.EXIT_CERT_FAILURE


def _cmd_best_constant(args) -> int:
    m = config_mod.parse_measure_spec(args.measure)
    if args.g is None:
        g = runner.near_extremal_increasing(m)
    else:
        g = functions.parse_expression(args.g).bind(m)
    deltas = _float_list(args.deltas, "--deltas")
    est = inequalities.estimate_best_constant(m, g, deltas)
    lines = [est.to_csv().rstrip("\n")]
    lines.append(f"# limit={est.limit_estimate:.6f}")
    lines.append(f"# target={est.target:.6f}")
    lines.append(f"# monotone={'true' if est.monotone else 'false'}")
    _emit("\n".join(lines) + "\n", args.output)
    return 0


_HANDLERS = {
    "iso": _cmd_iso,
    "verify": _cmd_verify,
    "hardy": _cmd_hardy,
    "best-constant": _cmd_best_constant,
    "sharpness": _cmd_sharpness,
    "moments": _cmd_moments,
}


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    if args.command is None:
        ap.print_usage(sys.stderr)
        return runner.EXIT_CONFIG_ERROR
    try:
        return _HANDLERS[args.command](args)
    except ConfigError as exc:
        for line in exc.errors:
            print(f"config error: {line}", file=sys.stderr)
        return runner.EXIT_CONFIG_ERROR
    except (DomainError, IngestionError, UnsupportedMeasureError,
            HypothesisViolatedError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return runner.EXIT_CONFIG_ERROR
    except (IntegrationError, ComputationError, DivergentNormError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return runner.EXIT_NUMERICAL
    except CovineqError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return runner.EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
