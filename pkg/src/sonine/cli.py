"""Command-line front end.

Every subcommand prints one record (JSON by default, or CSV / plain
text).  Exit codes: 0 success or passed check, 1 failed check, 2 usage or
precondition error, 3 numerical-domain error.  ``SONINE_OUTPUT_DIR``
sets the directory for relative ``--output`` paths; when it is set and no
``--output`` is given, output goes to ``<dir>/<subcommand>.<ext>``.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import NumericalDomainError
from .heckmanopdam import (
    MultiplicityBC,
    contraction_check,
    ho_connection,
    ho_family,
    sign_scan,
)
from .hypergeom import DEFAULT_MAX_WEIGHT, MultiplicityB, bessel_B, hyp0f1
from .integrate import IntegrationSpec, Method
from .jackcore import Partition, jack_C
from .rankone import jacobi_connection, sonine_1d, xu_intertwine
from .reports import (
    SCHEMA_VERSION,
    VerificationReport,
    dumps,
    reports_to_csv,
    rows_to_csv,
)
from .selberg import Pole, SelbergParams, pole_set, selberg_In, sigma_classify
from .verify import (
    classify_and_report,
    probe_integrability,
    verify_kadell,
    verify_selberg,
    verify_sonine_0f1,
    verify_sonine_besselB,
)

OUTPUT_DIR_ENV = "SONINE_OUTPUT_DIR"

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3


class UsageError(Exception):
    """A flag violates the precondition of its operation."""


@dataclass
class Outcome:
    """Result of one subcommand: a JSON-ready record, optional CSV rows and a pass flag."""

    record: dict
    rows: list[dict] | None = None
    columns: list[str] | None = None
    passed: bool = True
    report: VerificationReport | None = None


# ---------------------------------------------------------------------------
# flag parsing helpers


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _complexes(text: str) -> list[complex]:
    try:
        return [complex(v.replace(" ", "")) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated complex numbers, got {text!r}") from exc


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _number(text: str) -> complex | float:
    try:
        z = complex(text.replace(" ", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from exc
    return z.real if z.imag == 0 else z


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise UsageError(message)


def _spec(args, default: IntegrationSpec) -> IntegrationSpec:
    method = Method(args.method) if args.method else default.method
    return IntegrationSpec(
        method,
        nodes=args.nodes if args.nodes else default.nodes,
        samples=args.samples if args.samples else default.samples,
        seed=args.seed,
    )


def _report(rep: VerificationReport) -> Outcome:
    return Outcome(record=None, passed=rep.passed, report=rep)


def _value_record(kind: str, params: dict, result: Any) -> dict:
    return {"schema": SCHEMA_VERSION, "kind": kind, "params": params, "result": result}


# ---------------------------------------------------------------------------
# subcommands


def cmd_jack(args) -> Outcome:
    _require(args.alpha > 0, "--alpha must be positive")
    lam = Partition(args.lam)
    _require(len(lam) <= len(args.x), "--lam has more parts than --x has coordinates")
    val = complex(jack_C(lam, args.alpha, np.array(args.x)))
    params = {"lam": list(lam), "alpha": args.alpha, "x": args.x}
    return Outcome(_value_record("jack", params, {"value": val}),
                   [{"lam": list(lam), "alpha": args.alpha, "value": val}])


def cmd_hyp0f1(args) -> Outcome:
    _require(args.alpha > 0, "--alpha must be positive")
    _require(len(args.z) == len(args.w), "--z and --w need the same number of coordinates")
    sv = hyp0f1(args.alpha, args.mu, np.array(args.z), np.array(args.w), args.max_weight)
    params = {"alpha": args.alpha, "mu": args.mu, "z": args.z, "w": args.w}
    result = {"value": complex(sv.value), "max_weight": sv.max_weight,
              "last_shell": sv.last_shell, "diverging": sv.diverging}
    return Outcome(_value_record("hyp0f1", params, result), [dict(result)])


def cmd_bessel_b(args) -> Outcome:
    _require(args.k2 > 0, "--k2 must be positive")
    _require(np.real(args.k1) >= 0, "--k1 must have nonnegative real part")
    _require(len(args.z) == len(args.w), "--z and --w need the same number of coordinates")
    k = MultiplicityB(args.k1, args.k2)
    sv = bessel_B(k, np.array(args.z), np.array(args.w), args.max_weight)
    params = {"k1": args.k1, "k2": args.k2, "z": args.z, "w": args.w}
    result = {"value": complex(sv.value), "max_weight": sv.max_weight,
              "last_shell": sv.last_shell, "diverging": sv.diverging}
    return Outcome(_value_record("bessel-b", params, result), [dict(result)])


def cmd_selberg(args) -> Outcome:
    _require(args.n >= 1, "--n must be >= 1")
    _require(args.kappa >= 0, "--kappa must be >= 0")
    p = SelbergParams(args.n, args.kappa, args.mu, args.nu)
    if args.verify:
        return _report(verify_selberg(p, _spec(args, IntegrationSpec(Method.GAUSS_JACOBI)),
                                      args.tolerance))
    val = selberg_In(p)
    params = {"n": args.n, "kappa": args.kappa, "mu": args.mu, "nu": args.nu}
    if isinstance(val, Pole):
        result = {"value": None, "pole": {"param": val.param, "j": val.j, "m": val.m,
                                          "location": val.location}}
    else:
        result = {"value": val, "pole": None}
    return Outcome(_value_record("selberg", params, result), [{**params, "value": result["value"]}])


def cmd_kadell(args) -> Outcome:
    _require(args.alpha > 0, "--alpha must be positive")
    _require(args.n in (1, 2) or args.method == Method.MONTE_CARLO.value,
             "--n must be 1 or 2 for tensor quadrature")
    rep = verify_kadell(args.alpha, args.mu, args.nu, args.lam, args.n,
                        _spec(args, IntegrationSpec(Method.GAUSS_JACOBI)), args.tolerance,
                        mc_samples=args.mc)
    return _report(rep)


def cmd_sonine_0f1(args) -> Outcome:
    _require(args.alpha > 0, "--alpha must be positive")
    _require(len(args.z) in (1, 2), "--z must have 1 or 2 coordinates")
    rep = verify_sonine_0f1(args.alpha, args.mu, args.nu, np.array(args.z),
                            _spec(args, IntegrationSpec(Method.GAUSS_JACOBI)), args.tolerance,
                            args.max_weight)
    return _report(rep)


def cmd_sonine_b(args) -> Outcome:
    _require(args.k2 > 0, "--k2 must be positive")
    _require(args.k1 >= 0, "--k1 must be >= 0")
    n = len(args.xi)
    _require(n in (1, 2), "--xi must have 1 or 2 coordinates")
    _require(args.h > args.k2 * (n - 1), f"--h must exceed k2(n-1) = {args.k2 * (n - 1)}")
    rep = verify_sonine_besselB(MultiplicityB(args.k1, args.k2), args.h, np.array(args.xi),
                                _spec(args, IntegrationSpec(Method.GAUSS_JACOBI)), args.tolerance,
                                args.max_weight)
    return _report(rep)


def cmd_sigma(args) -> Outcome:
    _require(args.k2 > 0, "--k2 must be positive")
    _require(args.n >= 1, "--n must be >= 1")
    v = sigma_classify(args.h, args.k2, args.n)
    params = {"h": args.h, "k2": args.k2, "n": args.n}
    result = {"membership": v.membership.value, "detail": list(v.detail) if v.detail else None}
    if args.window:
        _require(len(args.window) == 2 and args.window[0] <= args.window[1],
                 "--window needs two increasing numbers")
        result["poles"] = pole_set(args.k2, args.n, tuple(args.window))
    return Outcome(_value_record("sigma", params, result),
                   [{**params, "membership": result["membership"], "detail": result["detail"]}])


def cmd_probe(args) -> Outcome:
    _require(args.k2 > 0, "--k2 must be positive")
    _require(args.layers >= 6, "--layers must be >= 6")
    _require(np.real(args.h) > -np.real(args.k1), "--h must satisfy Re h > -Re k1")
    k = MultiplicityB(args.k1, args.k2)
    res = probe_integrability(k, args.h, args.n, args.layers)
    params = {"k1": args.k1, "k2": args.k2, "h": args.h, "n": args.n, "layers": args.layers}
    rows = [{"epsilon": e, "mass": v, "verdict": res.verdict.value,
             "fitted_exponent": res.fitted_exponent} for e, v in res.layer_integrals]
    return Outcome(_value_record("probe", params, res.to_dict()), rows)


def cmd_classify(args) -> Outcome:
    _require(args.k2 > 0, "--k2 must be positive")
    c = classify_and_report(MultiplicityB(args.k1, args.k2), args.h, args.n)
    d = c.to_dict()
    row = {k: d[k] for k in ("n", "k1", "k2", "h", "membership", "is_pole",
                             "positive_measure_possible", "conclusion")}
    row["probe_verdict"] = d["probe"]["verdict"] if d["probe"] else None
    return Outcome(_value_record("classify", {"k1": args.k1, "k2": args.k2, "h": args.h, "n": args.n}, d),
                   [row])


def cmd_rank1_sonine(args) -> Outcome:
    _require(args.a > -1, "--a must exceed -1")
    _require(args.b > 0, "--b must be positive")
    spec = IntegrationSpec(Method.GAUSS_JACOBI, nodes=args.nodes or 64)
    return _report(sonine_1d(args.a, args.b, args.z, spec,
                             args.tolerance if args.tolerance is not None else 1e-8))


def cmd_xu(args) -> Outcome:
    _require(args.kp > args.k >= 0, "need --kp > --k >= 0")
    _require(args.degree >= 0, "--degree must be >= 0")
    x = np.array(args.x)
    spec = IntegrationSpec(Method.GAUSS_JACOBI, nodes=args.nodes or 64)
    vals = xu_intertwine(lambda y: y**args.degree, args.k, args.kp, x, spec)
    rows = [{"x": float(xi), "value": float(v)} for xi, v in zip(x, np.atleast_1d(vals))]
    params = {"k": args.k, "kp": args.kp, "degree": args.degree}
    return Outcome(_value_record("xu", params, rows), rows)


def cmd_jacobi_connect(args) -> Outcome:
    _require(args.a_src > -1 and args.a_dst > -1 and args.b > -1, "Jacobi parameters must exceed -1")
    _require(0 <= args.degree <= 30, "--degree must lie in 0..30")
    C, res = jacobi_connection(args.a_src, args.b, args.a_dst, args.degree, return_residuals=True)
    rows = [{"n": i, "j": j, "coefficient": float(C[i, j])}
            for i in range(args.degree + 1) for j in range(i + 1)]
    params = {"a_src": args.a_src, "b": args.b, "a_dst": args.a_dst, "degree": args.degree}
    result = {"coefficients": C, "residuals": res, "min_coefficient": float(C[np.tril_indices_from(C)].min()),
              "max_row_sum_error": float(np.max(np.abs(C.sum(axis=1) - 1)))}
    return Outcome(_value_record("jacobi-connect", params, result), rows)


def _bc(args, prefix: str = "k") -> MultiplicityBC:
    vals = getattr(args, prefix)
    _require(len(vals) in (2, 3), f"--{prefix} needs 2 (rank 1) or 3 (rank 2) values")
    _require(min(vals) >= 0, f"--{prefix} entries must be >= 0")
    return MultiplicityBC(*vals)


def _torus(args) -> IntegrationSpec | None:
    return IntegrationSpec(Method.TRAPEZOID, nodes=args.nodes) if args.nodes else None


def cmd_ho_polys(args) -> Outcome:
    k = _bc(args)
    _require(args.n in (1, 2), "--n must be 1 or 2")
    _require(args.n == 2 or len(args.k) == 2, "rank 1 takes --k k1,k2")
    _require(args.cutoff <= (40 if args.n == 1 else 12), "--cutoff too large for this rank")
    fam = ho_family(k, args.n, args.cutoff, _torus(args), levels=args.levels)
    return Outcome(_value_record("ho-polys", {"k": args.k, "n": args.n, "cutoff": args.cutoff},
                                 fam.to_dict()), fam.to_rows())


def cmd_ho_connect(args) -> Outcome:
    k, kp = _bc(args), _bc(args, "kp")
    _require(len(args.k) == len(args.kp), "--k and --kp must have the same length")
    _require(args.n in (1, 2), "--n must be 1 or 2")
    conn = ho_connection(k, kp, args.n, args.cutoff, _torus(args), levels=args.levels)
    params = {"k": args.k, "kp": args.kp, "n": args.n, "cutoff": args.cutoff}
    return Outcome(_value_record("ho-connect", params, conn.to_dict()), conn.to_rows())


def cmd_sign_scan(args) -> Outcome:
    k, kp = _bc(args), _bc(args, "kp")
    _require(len(args.k) == 3 and len(args.kp) == 3, "sign-scan runs at rank 2: give three values")
    _require(1 <= args.max_m <= 8, "--max-m must lie in 1..8")
    scan = sign_scan(k, kp, 2, args.max_m, _torus(args), args.levels)
    params = {"k": args.k, "kp": args.kp, "max_m": args.max_m}
    return Outcome(_value_record("sign-scan", params, scan.to_dict()), scan.rows)


def cmd_contract(args) -> Outcome:
    k = _bc(args)
    n = len(args.lam)
    _require(n in (1, 2) and len(args.t) == n, "--lam and --t need the same length, 1 or 2")
    _require(n == 2 or len(args.k) == 2, "rank 1 takes --k k1,k2")
    _require(n == 1 or k.k3 > 0, "the rank-two limit needs k3 > 0")
    _require(min(args.m) >= 1, "--m values must be positive")
    tab = contraction_check(k, tuple(args.lam), args.t, args.m, _torus(args), args.levels)
    params = {"k": args.k, "lam": args.lam, "t": args.t, "m": args.m}
    return Outcome(_value_record("contract", params, tab.to_dict()), tab.rows)


# ---------------------------------------------------------------------------
# parser


def _common(p: argparse.ArgumentParser, integration: bool = False) -> None:
    p.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    p.add_argument("--output", help="output file (default: standard output)")
    p.add_argument("--no-timestamp", action="store_true",
                   help="omit the timestamp and zero runtimes for byte-stable output")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=None)
    p.add_argument("--nodes", type=int, default=None)
    if integration:
        p.add_argument("--method", choices=[m.value for m in Method], default=None)
        p.add_argument("--samples", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sonine", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_, integration=False):
        p = sub.add_parser(name, help=help_)
        _common(p, integration)
        p.set_defaults(func=func)
        return p

    p = add("jack", cmd_jack, "evaluate C_lam^alpha(x)")
    p.add_argument("--lam", type=_ints, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--x", type=_floats, required=True)

    p = add("hyp0f1", cmd_hyp0f1, "partial sum of 0F1^alpha(mu; z, w)")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--mu", type=_number, required=True)
    p.add_argument("--z", type=_complexes, required=True)
    p.add_argument("--w", type=_complexes, required=True)
    p.add_argument("--max-weight", type=int, default=DEFAULT_MAX_WEIGHT)

    p = add("bessel-b", cmd_bessel_b, "Bessel function of type B")
    p.add_argument("--k1", type=_number, required=True)
    p.add_argument("--k2", type=float, required=True)
    p.add_argument("--z", type=_complexes, required=True)
    p.add_argument("--w", type=_complexes, required=True)
    p.add_argument("--max-weight", type=int, default=DEFAULT_MAX_WEIGHT)

    p = add("selberg", cmd_selberg, "Selberg integral closed form", integration=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--mu", type=_number, required=True)
    p.add_argument("--nu", type=_number, required=True)
    p.add_argument("--verify", action="store_true", help="compare against quadrature")

    p = add("kadell", cmd_kadell, "check the Jack moment of the Selberg density", integration=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--lam", type=_ints, default=[])
    p.add_argument("--mc", type=int, default=None, help="Monte Carlo cross-check samples")

    p = add("sonine-0f1", cmd_sonine_0f1, "check the 0F1 Sonine formula", integration=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--z", type=_complexes, required=True)
    p.add_argument("--max-weight", type=int, default=DEFAULT_MAX_WEIGHT)

    p = add("sonine-b", cmd_sonine_b, "check the type-B Bessel Sonine formula", integration=True)
    p.add_argument("--k1", type=float, required=True)
    p.add_argument("--k2", type=float, required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--xi", type=_floats, required=True)
    p.add_argument("--max-weight", type=int, default=DEFAULT_MAX_WEIGHT)

    p = add("sigma", cmd_sigma, "classify h against the admissible set")
    p.add_argument("--h", type=_number, required=True)
    p.add_argument("--k2", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--window", type=_floats, default=None, help="also list poles in lo,hi")

    p = add("probe", cmd_probe, "boundary-layer integrability probe")
    p.add_argument("--k1", type=_number, default=0.0)
    p.add_argument("--k2", type=float, required=True)
    p.add_argument("--h", type=_number, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--layers", type=int, default=8)

    p = add("classify", cmd_classify, "combined verdict on a parameter shift")
    p.add_argument("--k1", type=_number, default=0.0)
    p.add_argument("--k2", type=float, required=True)
    p.add_argument("--h", type=_number, required=True)
    p.add_argument("--n", type=int, required=True)

    p = add("rank1-sonine", cmd_rank1_sonine, "classical one-variable Sonine formula")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--z", type=_number, required=True)

    p = add("xu", cmd_xu, "rank-one intertwiner applied to x^degree")
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--kp", type=float, required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--x", type=_floats, required=True)

    p = add("jacobi-connect", cmd_jacobi_connect, "Jacobi connection coefficients")
    p.add_argument("--a-src", type=float, required=True)
    p.add_argument("--a-dst", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--degree", type=int, required=True)

    for name, func, help_ in (("ho-polys", cmd_ho_polys, "Heckman-Opdam polynomials"),
                              ("ho-connect", cmd_ho_connect, "Heckman-Opdam connection coefficients"),
                              ("sign-scan", cmd_sign_scan, "sign report on the rows (m, m)"),
                              ("contract", cmd_contract, "contraction limit towards Bessel functions")):
        p = add(name, func, help_)
        p.add_argument("--k", type=_floats, required=True, help="k1,k2[,k3]")
        p.add_argument("--levels", type=int, default=None, help="Richardson levels")
        if name in ("ho-polys", "ho-connect"):
            p.add_argument("--n", type=int, required=True)
            p.add_argument("--cutoff", type=int, required=True)
        if name in ("ho-connect", "sign-scan"):
            p.add_argument("--kp", type=_floats, required=True)
        if name == "sign-scan":
            p.add_argument("--max-m", type=int, default=6)
        if name == "contract":
            p.add_argument("--lam", type=_ints, required=True)
            p.add_argument("--t", type=_floats, required=True)
            p.add_argument("--m", type=_ints, required=True)

    p = sub.add_parser("batch", help="run a JSON list of subcommands")
    p.add_argument("config")
    p.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    p.add_argument("--output")
    p.add_argument("--no-timestamp", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=None)
    return parser


# ---------------------------------------------------------------------------
# execution and rendering


def _execute(args) -> tuple[int, Outcome | None, str | None]:
    try:
        out = args.func(args)
    except UsageError as exc:
        return EXIT_USAGE, None, f"usage: {exc}"
    except NumericalDomainError as exc:
        return EXIT_DOMAIN, None, f"{type(exc).__name__}: {exc}"
    except (ValueError, TypeError) as exc:
        return EXIT_USAGE, None, f"{type(exc).__name__}: {exc}"
    return (EXIT_OK if out.passed else EXIT_FAIL), out, None


def _record(out: Outcome, timestamp: bool) -> dict:
    if out.report is not None:
        return out.report.to_dict(timestamp=timestamp)
    return out.record


def _stamp(record: dict, timestamp: bool) -> dict:
    if timestamp:
        record = dict(record)
        record["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return record


def _pretty(record: Any, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(record, dict):
        for key, val in record.items():
            if isinstance(val, (dict, list)) and val and not _flat_list(val):
                lines.append(f"{pad}{key}:")
                lines.append(_pretty(val, indent + 1))
            else:
                lines.append(f"{pad}{key}: {dumps(val)}")
    elif isinstance(record, list):
        for item in record:
            flag = "  <-- NEGATIVE" if isinstance(item, dict) and item.get("negative") else ""
            lines.append(f"{pad}- {dumps(item)}{flag}")
    else:
        lines.append(f"{pad}{dumps(record)}")
    return "\n".join(lines)


def _flat_list(val) -> bool:
    return isinstance(val, list) and all(not isinstance(v, (dict, list)) for v in val)


def render(out: Outcome, fmt: str, timestamp: bool) -> str:
    if fmt == "csv":
        if out.report is not None:
            return reports_to_csv([out.report], timestamp)
        return rows_to_csv(out.rows or [], out.columns)
    record = _stamp(_record(out, timestamp), timestamp)
    if fmt == "pretty":
        return _pretty(record) + "\n"
    return dumps(record, indent=2) + "\n"


def _destination(path: str | None, command: str, fmt: str) -> str | None:
    base = os.environ.get(OUTPUT_DIR_ENV)
    if path is None:
        if not base:
            return None
        ext = {"json": "json", "csv": "csv", "pretty": "txt"}[fmt]
        path = f"{command}.{ext}"
    if base and not os.path.isabs(path):
        path = os.path.join(base, path)
    return path


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


_NEGATIVE_VALUE = re.compile(r"^-[0-9.]")


def _attach_negative_values(argv: list[str]) -> list[str]:
    """Glue values such as ``-0.25,-0.5`` to their flag so argparse does not read them as options."""
    out: list[str] = []
    for tok in argv:
        if out and _NEGATIVE_VALUE.match(tok) and out[-1].startswith("--") and "=" not in out[-1]:
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = _attach_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if args.command == "batch":
        return batch(args.config, fmt=args.format, output=args.output,
                     timestamp=not args.no_timestamp, jobs=args.jobs)
    code, out, err = _execute(args)
    if err:
        print(err, file=sys.stderr)
        return code
    _emit(render(out, args.format, not args.no_timestamp),
          _destination(args.output, args.command, args.format))
    return code


# ---------------------------------------------------------------------------
# batch


class ConfigError(Exception):
    pass


def _argv_for(entry: dict) -> list[str]:
    if not isinstance(entry, dict) or "subcommand" not in entry:
        raise ConfigError("each run needs a 'subcommand'")
    if entry["subcommand"] == "batch":
        raise ConfigError("batch runs cannot nest")
    argv = [str(entry["subcommand"])]
    params = entry.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError("'params' must be an object")
    for key in ("seed", "tolerance"):
        if key in entry:
            params = {**params, key: entry[key]}
    for key, val in params.items():
        flag = "--" + key.replace("_", "-")
        if isinstance(val, bool):
            if val:
                argv.append(flag)
        elif isinstance(val, list):
            argv += [flag, ",".join(str(v) for v in val)]
        else:
            argv += [flag, str(val)]
    return argv


def load_config(path: str) -> list[list[str]]:
    """Parse a batch file: ``{"runs": [{"subcommand": .., "params": {..}}, ..]}`` or a bare list."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    runs = data.get("runs") if isinstance(data, dict) else data
    if not isinstance(runs, list):
        raise ConfigError("config must hold a list of runs")
    return [_argv_for(entry) for entry in runs]


def _run_one(argv: list[str]) -> dict:
    parser = build_parser()
    try:
        args = parser.parse_args(_attach_negative_values(argv))
    except SystemExit:
        return {"argv": argv, "exit_code": EXIT_USAGE, "passed": False, "error": "invalid arguments"}
    code, out, err = _execute(args)
    entry = {"argv": argv, "exit_code": code, "passed": code == EXIT_OK}
    if err:
        entry["error"] = err
    else:
        entry["outcome"] = out
    return entry


def batch(path: str, fmt: str = "json", output: str | None = None, timestamp: bool = True,
          jobs: int = 1) -> int:
    """Run every configured subcommand; exit 0 iff all pass, 2 on a malformed config."""
    try:
        runs = load_config(path)
    except ConfigError as exc:
        print(f"usage: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, runs))
    else:
        results = [_run_one(argv) for argv in runs]
    passed = sum(r["passed"] for r in results)
    if fmt == "csv":
        reps = []
        for r in results:
            out = r.get("outcome")
            if out is not None and out.report is not None:
                reps.append(out.report)
        text = reports_to_csv(reps, timestamp)
    else:
        entries = []
        for r in results:
            e = {k: v for k, v in r.items() if k != "outcome"}
            if "outcome" in r:
                e["record"] = _record(r["outcome"], timestamp)
            entries.append(e)
        agg = _stamp({"schema": SCHEMA_VERSION, "kind": "batch", "total": len(results),
                      "passed": passed, "failed": len(results) - passed, "runs": entries}, timestamp)
        text = _pretty(agg) + "\n" if fmt == "pretty" else dumps(agg, indent=2) + "\n"
    _emit(text, _destination(output, "batch", fmt))
    return EXIT_OK if passed == len(results) else EXIT_FAIL


def main() -> None:  # pragma: no cover - console entry point
    sys.exit(run())
