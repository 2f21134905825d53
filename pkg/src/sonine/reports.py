"""Verification report records and their JSON / CSV serialization.

JSON reports carry a top-level ``"schema"`` integer.  Floats are written
with 17 significant digits, complex numbers as ``{"re": .., "im": ..}``,
and non-finite floats as the strings ``"NaN"``, ``"Infinity"``,
``"-Infinity"``.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .integrate import IntegrationSpec

SCHEMA_VERSION = 1

CSV_COLUMNS = (
    "schema",
    "identity",
    "passed",
    "lhs_re",
    "lhs_im",
    "rhs_re",
    "rhs_im",
    "abs_residual",
    "rel_residual",
    "tolerance",
    "method",
    "nodes",
    "samples",
    "seed",
    "runtime_ms",
    "params",
)


class Identity(str, enum.Enum):
    KADELL = "Kadell"
    SONINE_0F1 = "Sonine0F1"
    SONINE_BESSEL_B = "SonineBesselB"
    SELBERG_CLOSED_FORM = "SelbergClosedForm"
    INTEGRABILITY_PROBE = "IntegrabilityProbe"


def residuals(lhs: complex, rhs: complex) -> tuple[float, float]:
    # numpy saturates to inf where builtin abs() raises OverflowError
    with np.errstate(over="ignore", invalid="ignore"):
        diff = float(np.abs(np.complex128(lhs) - np.complex128(rhs)))
        scale = float(np.abs(np.complex128(lhs)))
    if scale == 0:
        return diff, float("inf")
    return diff, diff / scale


def decide(lhs: complex, abs_res: float, rel_res: float, tol: float) -> bool:
    """Relative test, switching to absolute when ``|lhs| < 1``."""
    if np.abs(np.complex128(lhs)) < 1:
        return abs_res <= tol
    return rel_res <= tol


@dataclass
class VerificationReport:
    identity: Identity
    params: dict
    lhs: complex
    rhs: complex
    abs_residual: float
    rel_residual: float
    tolerance: float
    passed: bool
    spec: IntegrationSpec | None = None
    runtime_ms: int = 0
    extra: dict = field(default_factory=dict)

    @classmethod
    def build(cls, identity, params, lhs, rhs, tolerance, spec=None, runtime_ms=0, extra=None):
        lhs, rhs = complex(lhs), complex(rhs)
        a, r = residuals(lhs, rhs)
        return cls(
            Identity(identity), dict(params), lhs, rhs, a, r, float(tolerance),
            decide(lhs, a, r, tolerance), spec, int(runtime_ms), dict(extra or {}),
        )

    def to_dict(self, timestamp: bool = True) -> dict:
        d = {
            "schema": SCHEMA_VERSION,
            "identity": self.identity.value,
            "params": self.params,
            "lhs": complex(self.lhs),
            "rhs": complex(self.rhs),
            "abs_residual": self.abs_residual,
            "rel_residual": self.rel_residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "spec": self.spec.to_dict() if self.spec is not None else None,
            "runtime_ms": self.runtime_ms if timestamp else 0,
        }
        if self.extra:
            d["extra"] = self.extra
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        if d.get("schema") != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema {d.get('schema')}")
        spec = d.get("spec")
        return cls(
            identity=Identity(d["identity"]),
            params=d["params"],
            lhs=_to_complex(d["lhs"]),
            rhs=_to_complex(d["rhs"]),
            abs_residual=_to_float(d["abs_residual"]),
            rel_residual=_to_float(d["rel_residual"]),
            tolerance=_to_float(d["tolerance"]),
            passed=bool(d["passed"]),
            spec=IntegrationSpec.from_dict(spec) if spec else None,
            runtime_ms=int(d["runtime_ms"]),
            extra=d.get("extra", {}),
        )

    def csv_row(self, timestamp: bool = True) -> dict:
        spec = self.spec.to_dict() if self.spec else {}
        return {
            "schema": SCHEMA_VERSION,
            "identity": self.identity.value,
            "passed": self.passed,
            "lhs_re": _fmt(self.lhs.real),
            "lhs_im": _fmt(self.lhs.imag),
            "rhs_re": _fmt(self.rhs.real),
            "rhs_im": _fmt(self.rhs.imag),
            "abs_residual": _fmt(self.abs_residual),
            "rel_residual": _fmt(self.rel_residual),
            "tolerance": _fmt(self.tolerance),
            "method": spec.get("method", ""),
            "nodes": spec.get("nodes", ""),
            "samples": spec.get("samples", ""),
            "seed": spec.get("seed", ""),
            "runtime_ms": self.runtime_ms if timestamp else 0,
            "params": dumps(self.params),
        }


def _to_complex(v) -> complex:
    if isinstance(v, (complex, np.complexfloating)):
        return complex(v)
    if isinstance(v, dict):
        return complex(_to_float(v["re"]), _to_float(v["im"]))
    return complex(_to_float(v))


def _to_float(v) -> float:
    if isinstance(v, str):
        return float({"NaN": "nan", "Infinity": "inf", "-Infinity": "-inf"}[v])
    return float(v)


def _fmt(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    if x == int(x) and abs(x) < 1e16:
        return repr(float(x))
    return format(x, ".17g")


def _plain(obj: Any) -> Any:
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.complexfloating,)):
        return complex(obj)
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    return obj


def _encode(obj: Any, indent: int, level: int) -> str:
    obj = _plain(obj)
    pad = "\n" + " " * (indent * (level + 1)) if indent else ""
    end = "\n" + " " * (indent * level) if indent else ""
    sep = "," + (pad if indent else " ")
    if obj is None or isinstance(obj, (bool, str)):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        s = _fmt(obj)
        return json.dumps(s) if s in ("NaN", "Infinity", "-Infinity") else s
    if isinstance(obj, complex):
        return _encode({"re": obj.real, "im": obj.imag}, indent, level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{" + pad + sep.join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [_encode(v, indent, level + 1) for v in obj]
        return "[" + pad + sep.join(items) + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any, indent: int = 0) -> str:
    """Deterministic JSON with 17-significant-digit floats."""
    return _encode(obj, indent, 0)


def reports_to_csv(reports: list[VerificationReport], timestamp: bool = True) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in reports:
        writer.writerow(r.csv_row(timestamp))
    return buf.getvalue()


def rows_to_csv(rows: list[dict], columns: list[str] | None = None) -> str:
    """CSV for generic tabular records (tables, matrices, scans)."""
    columns = columns or (list(rows[0]) if rows else [])
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _csv_cell(row.get(k, "")) for k in columns})
    return buf.getvalue()


def _csv_cell(v):
    v = _plain(v)
    if isinstance(v, float):
        return _fmt(v)
    if isinstance(v, complex):
        return _fmt(v.real) if v.imag == 0 else f"{_fmt(v.real)}{'+' if v.imag >= 0 else ''}{_fmt(v.imag)}j"
    if isinstance(v, (list, tuple, dict)):
        return dumps(v)
    return v
