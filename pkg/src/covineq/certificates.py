"""Inequality certificates: lhs/rhs records with serialization.

Every check in this package reduces to "lhs ≤ rhs within a stated relative
tolerance".  A certificate stores both sides, the ratio, the slack, the
side conditions that were verified numerically, and the tolerance itself,
so a report line is meaningful in isolation.
"""

from __future__ import annotations

import contextlib
import csv
import io
import json
import math
from dataclasses import dataclass, field

DEFAULT_PASS_TOL = 1e-6

CSV_HEADER = ["name", "family", "params", "p", "lhs", "rhs", "ratio", "slack", "pass"]

# negative-control hook: scales every rhs so a forced-failure run can prove
# the failure path works end to end
_RHS_SCALE = [1.0]


@contextlib.contextmanager
def debug_rhs_scale(factor: float):
    """Scale all certificate right-hand sides by ``factor`` (testing only)."""
    _RHS_SCALE.insert(0, float(factor))
    try:
        yield
    finally:
        _RHS_SCALE.pop(0)


# pass tolerance used when certify() is not given an explicit one; the CLI
# runner swaps it for the configured value
_PASS_TOL = [DEFAULT_PASS_TOL]


@contextlib.contextmanager
def pass_tol_override(tol: float):
    """Default pass tolerance for certificates created inside the block."""
    _PASS_TOL.insert(0, float(tol))
    try:
        yield
    finally:
        _PASS_TOL.pop(0)


@dataclass(frozen=True, eq=False)
class InequalityCertificate:
    name: str
    params: dict
    lhs: float
    rhs: float
    ratio: float
    slack: float
    side_conditions: dict = field(default_factory=dict)
    passed: bool = False
    tol: float = DEFAULT_PASS_TOL
    uninformative: bool = False

    def describe(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        if self.uninformative:
            flag += " (uninformative)"
        return (
            f"{self.name}[{_params_text(self.params)}]: "
            f"lhs={self.lhs:.6g} rhs={self.rhs:.6g} ratio={self.ratio:.6g} {flag}"
        )


def certify(
    name: str,
    *,
    lhs: float,
    rhs: float,
    params: dict | None = None,
    side_conditions: dict | None = None,
    tol: float | None = None,
    uninformative: bool = False,
) -> InequalityCertificate:
    tol = _PASS_TOL[0] if tol is None else float(tol)
    lhs, rhs = float(lhs), float(rhs) * _RHS_SCALE[0]
    if math.isinf(rhs):
        ratio = 0.0
    elif rhs > 0.0:
        ratio = lhs / rhs
    else:
        ratio = 0.0 if lhs == 0.0 else math.inf
    return InequalityCertificate(
        name=name,
        params=dict(params or {}),
        lhs=lhs,
        rhs=rhs,
        ratio=ratio,
        slack=rhs - lhs,
        side_conditions={k: float(v) for k, v in (side_conditions or {}).items()},
        passed=bool(lhs <= rhs * (1.0 + tol)),
        tol=float(tol),
        uninformative=uninformative,
    )


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def _params_text(params: dict) -> str:
    """Auxiliary params (family and p get their own CSV columns)."""
    items = sorted((k, v) for k, v in params.items() if k not in ("family", "p"))
    return ";".join(f"{k}={_fmt(v)}" for k, v in items)


def _row(cert: InequalityCertificate) -> list[str]:
    return [
        cert.name,
        str(cert.params.get("family", "")),
        _params_text(cert.params),
        _fmt(cert.params.get("p", "")),
        _fmt(cert.lhs),
        _fmt(cert.rhs),
        _fmt(cert.ratio),
        _fmt(cert.slack),
        "true" if cert.passed else "false",
    ]


def to_csv(certs, statuses=None, quad_tol=None) -> str:
    """CSV report; pass per-certificate ``statuses`` to add a status column.

    The trailing comment lines record the tolerances in force, without which
    a pass/fail column cannot be interpreted.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = list(CSV_HEADER) + (["status"] if statuses is not None else [])
    writer.writerow(header)
    for i, cert in enumerate(certs):
        row = _row(cert)
        if statuses is not None:
            # skipped/errored cells carry no verdict; blank out the pass cell
            if statuses[i].startswith(("skip", "error")):
                row[-1] = ""
            row.append(statuses[i])
        writer.writerow(row)
    tols = sorted({c.tol for c in certs})
    buf.write(f"# pass_tol={','.join(f'{t:g}' for t in tols) or 'n/a'}\n")
    if quad_tol is not None:
        buf.write(f"# quadrature_rel_tol={quad_tol:g}\n")
    return buf.getvalue()


def _json_num(v):
    """Strict-JSON-safe number: NaN -> null, infinities -> strings."""
    if isinstance(v, float) and not math.isfinite(v):
        return None if math.isnan(v) else ("inf" if v > 0 else "-inf")
    return v


def to_json(certs, statuses=None, quad_tol=None) -> str:
    out = []
    for i, cert in enumerate(certs):
        obj = {
            "name": cert.name,
            "params": {k: _json_num(v) for k, v in cert.params.items()},
            "lhs": _json_num(cert.lhs),
            "rhs": _json_num(cert.rhs),
            "ratio": _json_num(cert.ratio),
            "slack": _json_num(cert.slack),
            "side_conditions": {
                k: _json_num(v) for k, v in cert.side_conditions.items()
            },
            "pass": cert.passed,
            "tol": cert.tol,
            "uninformative": cert.uninformative,
        }
        if statuses is not None:
            obj["status"] = statuses[i]
            if statuses[i].startswith(("skip", "error")):
                obj["pass"] = None
        if quad_tol is not None:
            obj["quadrature_rel_tol"] = quad_tol
        out.append(obj)
    return json.dumps(out, indent=2, sort_keys=False, default=float)
