"""Command-line front end.

Every subcommand prints a human-readable table by default, or CSV / JSON with
``--format``.  Floats are written with 17 significant digits in CSV and JSON
and 6 in tables.  Exit status: 0 success, 1 domain error (or an invalid frieze
in ``frieze verify``), 2 usage error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .core import LynessParams, iterate, iterate_normalized_infinite
from .errors import LynessError
from .frieze import build_from_diagonal, parse_staggered, render_staggered, verify_pattern
from .invariant import (
    exceptional_levels,
    hessian_min_check,
    interval_bounds,
    invariant_V,
    level_curve,
    sample_level_curve,
)
from .periodic import orbit_points, period_set, special_level, tangency_residual, verify_closure
from .rotation import (
    default_workers,
    estimate_rotation,
    log_grid,
    rho_asymptotic,
    rho_limit_at_minimum,
    scan_rho,
)

SCHEMA_VERSION = 1

# Pinned CSV headers, one per command that emits CSV.  Bump SCHEMA_VERSION on change.
CSV_HEADERS: dict[str, tuple[str, ...]] = {
    "iterate": ("k", "x", "y"),
    "invariant": ("alpha", "v", "v_min", "diag_near", "diag_far", "interval_lo", "interval_hi"),
    "invariant-samples": ("theta", "x", "y"),
    "rotation": ("alpha", "v", "rho", "n_iters", "stderr_bound"),
    "scan-rho": ("alpha", "v", "rho", "n_iters", "stderr_bound"),
    "periods": ("q", "p_list"),
    "special-level": ("period", "alpha", "v_bar", "v_min", "valid", "lambda_far", "closure_residual"),
    "exceptional": ("alpha", "v_zero", "v_infinity", "v_line_conic", "v_min", "v_prime"),
}

COMMANDS = (
    "iterate",
    "invariant",
    "rotation",
    "scan-rho",
    "periods",
    "special-level",
    "frieze-build",
    "frieze-verify",
    "exceptional",
)


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    alpha: float | Fraction | None = None
    v: float | None = None
    n_iters: int = 1_000_000
    seed: tuple[Any, Any] | None = None
    output_format: str = "table"
    output_path: Path | None = None
    rng_seed: int = 0
    threads: int | None = None
    options: dict[str, Any] = field(default_factory=dict)

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.n_iters < 1:
            raise UsageError("n_iters must be at least 1")
        if self.output_format not in ("table", "csv", "json"):
            raise UsageError(f"unknown format {self.output_format!r}")
        needs_alpha = {"iterate", "invariant", "rotation", "scan-rho", "special-level", "exceptional"}
        if self.command in needs_alpha and self.alpha is None:
            raise UsageError(f"{self.command} requires --alpha")
        if self.command in ("invariant", "rotation") and self.v is None and self.seed is None:
            raise UsageError(f"{self.command} requires --v or --seed")


# --------------------------------------------------------------------------
# formatting helpers

def _num(value: Any, digits: int) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, f".{digits}g")
    if value is None:
        return ""
    return str(value)


def _json(value: Any) -> str:
    """JSON text with floats at 17 significant digits and Fractions as strings."""
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g") if math.isfinite(value) else "null"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, (Fraction, str)):
        import json

        return json.dumps(_num(value, 17))
    if isinstance(value, dict):
        return "{" + ", ".join(f"{_json(str(k))}: {_json(v)}" for k, v in value.items()) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_json(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(v, 17) for v in row])
    return buf.getvalue()


def _table(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    cells = [list(header)] + [[_num(v, 6) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "".join("  ".join(c.rjust(w) for c, w in zip(r, widths)) + "\n" for r in cells)


def _emit(cfg: RunConfig, key: str, rows: list[list[Any]], payload: dict[str, Any], footer: str = "") -> str:
    if cfg.output_format == "json":
        return _json({"schema_version": SCHEMA_VERSION, "command": cfg.command, **payload}) + "\n"
    header = CSV_HEADERS[key]
    if cfg.output_format == "csv":
        return _csv(header, rows)
    return _table(header, rows) + footer


# --------------------------------------------------------------------------
# commands

def _cmd_iterate(cfg: RunConfig) -> tuple[str, int]:
    n = int(cfg.options.get("n", 10))
    exact = bool(cfg.options.get("exact", False))
    seed = cfg.seed
    if seed is None:
        rng = random.Random(cfg.rng_seed)
        seed = (Fraction(rng.randint(1, 99), rng.randint(1, 99)), Fraction(rng.randint(1, 99), rng.randint(1, 99)))
        if not exact:
            seed = (float(seed[0]), float(seed[1]))
    elif not exact:
        seed = (float(seed[0]), float(seed[1]))
    if isinstance(cfg.alpha, float) and math.isinf(cfg.alpha):
        rec = iterate_normalized_infinite(seed, n)
    else:
        rec = iterate(seed, n, LynessParams(cfg.alpha), exact=exact)
    period = rec.first_return() if exact else rec.first_return(rel_tol=1e-12)
    rows = [[k, p.x, p.y] for k, p in enumerate(rec.iterates)]
    if period is None:
        closure = f"no return within {n} steps"
    else:
        closure = f"period={period} exact" if exact else f"period={period} (float, rel tol 1e-12)"
    payload = {
        "alpha": cfg.alpha if not isinstance(cfg.alpha, float) or math.isfinite(cfg.alpha) else "infinity",
        "exact": exact,
        "iterates": [[p.x, p.y] for p in rec.iterates],
        "period": period,
    }
    return _emit(cfg, "iterate", rows, payload, footer=closure + "\n"), 0


def _cmd_invariant(cfg: RunConfig) -> tuple[str, int]:
    params = LynessParams(cfg.alpha)
    v = float(invariant_V(cfg.seed, params)) if cfg.seed is not None else float(cfg.v)
    samples = int(cfg.options.get("samples") or 0)
    if samples:
        pts = sample_level_curve(params, v, samples)
        rows = [[theta, p.x, p.y] for theta, p in pts]
        payload = {"alpha": params.alpha, "v": v, "samples": [[theta, p.x, p.y] for theta, p in pts]}
        return _emit(cfg, "invariant-samples", rows, payload), 0
    curve = level_curve(params, v)
    box = interval_bounds(params, v)
    row = [params.alpha, v, params.v_min, curve.diag_near, curve.diag_far, box.lo, box.hi]
    payload = dict(zip(CSV_HEADERS["invariant"], row))
    payload["omega"] = params.omega
    payload["hessian_det"] = hessian_min_check(params).determinant
    return _emit(cfg, "invariant", [row], payload), 0


def _cmd_rotation(cfg: RunConfig) -> tuple[str, int]:
    params = LynessParams(cfg.alpha)
    seed = None if cfg.seed is None else (float(cfg.seed[0]), float(cfg.seed[1]))
    est = estimate_rotation(params, cfg.v, cfg.n_iters, seed, refine=bool(cfg.options.get("refine")))
    row = [est.alpha, est.v, est.rho, est.iterations, est.stderr_bound]
    payload = dict(zip(CSV_HEADERS["rotation"], row))
    payload["rho_limit_at_minimum"] = rho_limit_at_minimum(params)
    payload["rational"] = est.rational
    if params.alpha > 0 and est.v > max(params.v_min, 1.0):
        payload["rho_asymptotic"] = rho_asymptotic(params, est.v)
    return _emit(cfg, "rotation", [row], payload), 0


def _cmd_scan_rho(cfg: RunConfig) -> tuple[str, int]:
    params = LynessParams(cfg.alpha)
    opts = cfg.options
    lo = params.v_min * float(opts.get("v_min_mult", 1.001))
    hi = float(opts.get("v_max", 1e4))
    steps = int(opts.get("steps", 50))
    if not hi > lo:
        raise UsageError(f"--v-max {hi} must exceed the grid start {lo}")
    workers = cfg.threads if cfg.threads is not None else default_workers()
    scan = scan_rho(params, log_grid(lo, hi, steps), cfg.n_iters, workers=workers)
    rows = [[e.alpha, e.v, e.rho, e.iterations, e.stderr_bound] for e in scan.estimates]
    rep = scan.report
    summary = {
        "expected": rep.expected,
        "verdict": rep.verdict,
        "increasing_pairs": rep.n_increasing,
        "decreasing_pairs": rep.n_decreasing,
        "indistinguishable_pairs": rep.indistinguishable,
        "violations": [[p.index, p.diff, p.margin] for p in rep.violations],
        "min_margin": rep.min_margin,
    }
    payload = {"alpha": params.alpha, "estimates": [dict(zip(CSV_HEADERS["scan-rho"], r)) for r in rows], "monotonicity": summary}
    footer = (
        f"monotonicity: {rep.verdict} (expected {rep.expected}); "
        f"violations={len(rep.violations)} indistinguishable={len(rep.indistinguishable)} "
        f"min_margin={_num(rep.min_margin, 6)}\n"
    )
    return _emit(cfg, "scan-rho", rows, payload, footer=footer), 0


def _cmd_periods(cfg: RunConfig) -> tuple[str, int]:
    q_max = int(cfg.options.get("q_max", 60))
    table = period_set(q_max)
    if cfg.output_format == "json":
        payload = {
            "q_max": q_max,
            "rows": [{"q": w.q, "p_list": list(w.p_list)} for w in table],
            "periods": [w.q for w in table if w.achievable],
        }
        return _emit(cfg, "periods", [], payload), 0
    if cfg.output_format == "csv":
        return _csv(CSV_HEADERS["periods"], [[w.q, ";".join(map(str, w.p_list))] for w in table]), 0
    rows = [[w.q, ",".join(map(str, w.p_list)) or "-"] for w in table]
    return _table(CSV_HEADERS["periods"], rows), 0


def _cmd_special_level(cfg: RunConfig) -> tuple[str, int]:
    period = int(cfg.options["period"])
    tol = float(cfg.options.get("tolerance", 1e-8))
    level = special_level(period, float(cfg.alpha))
    payload: dict[str, Any] = {
        "period": period,
        "alpha": level.alpha,
        "v_bar": level.v_bar,
        "v_min": level.v_min,
        "valid": level.valid,
        "lambda_far": level.lambda_far,
        "closure_residual": None,
    }
    if level.valid:
        rep = verify_closure(level, tol)
        pts = orbit_points((level.lambda_far, level.lambda_far), period, level.alpha)
        k_tan = (period - 1) // 2
        payload.update(
            closure_residual=rep.residual,
            closed=rep.closed,
            principal=rep.principal,
            min_early_residual=min(rep.early_residuals),
            tangency_step=k_tan,
            tangency_residual=tangency_residual(pts[k_tan], level.params),
        )
    row = [payload[k] for k in CSV_HEADERS["special-level"]]
    return _emit(cfg, "special-level", [row], payload), 0


def _cmd_exceptional(cfg: RunConfig) -> tuple[str, int]:
    lv = exceptional_levels(LynessParams(cfg.alpha))
    row = [lv.alpha, lv.v_zero, "infinity", lv.v_line_conic, lv.v_min, lv.v_prime]
    payload = dict(zip(CSV_HEADERS["exceptional"], row))
    payload["outside_dynamic_range"] = lv.outside_dynamic_range()
    return _emit(cfg, "exceptional", [row], payload), 0


def _cmd_frieze_build(cfg: RunConfig) -> tuple[str, int]:
    diag = cfg.options["diagonal"]
    exact = bool(cfg.options.get("exact", False))
    pattern = build_from_diagonal(diag, integer=not exact)
    periods = int(cfg.options.get("periods", 2))
    if cfg.output_format == "table":
        return render_staggered(pattern, periods), 0
    width = pattern.order * periods
    rows = pattern.rows(0, width)
    if cfg.output_format == "json":
        payload = {"order": pattern.order, "diagonal": list(pattern.f_seed), "rows": rows}
        return _json({"schema_version": SCHEMA_VERSION, "command": cfg.command, **payload}) + "\n", 0
    # CSV: one line per row k, entries (r, r + k) for r = 0..width-1
    return _csv(["k"] + [f"r{r}" for r in range(width)], [[k] + row for k, row in enumerate(rows)]), 0


def _cmd_frieze_verify(cfg: RunConfig) -> tuple[str, int]:
    path = Path(cfg.options["file"])
    text = path.read_text(encoding="utf-8")
    report = verify_pattern(parse_staggered(text))
    status = 0 if report.valid else 1
    if cfg.output_format == "json":
        payload = {
            "valid": report.valid,
            "rows": report.rows,
            "columns": report.columns,
            "violations": [{"kind": v.kind, "row": v.row, "col": v.col, "detail": v.detail} for v in report.violations],
        }
        return _json({"schema_version": SCHEMA_VERSION, "command": cfg.command, **payload}) + "\n", status
    if cfg.output_format == "csv":
        return _csv(("kind", "row", "col", "detail"), [[v.kind, v.row, v.col, v.detail] for v in report.violations]), status
    if report.valid:
        return f"valid ({report.rows} rows, {report.columns} columns)\n", 0
    lines = [f"{v.kind} at row {v.row}, col {v.col}: {v.detail}" for v in report.violations]
    return f"invalid: {len(lines)} violation(s)\n" + "\n".join(lines) + "\n", status


HANDLERS = {
    "iterate": _cmd_iterate,
    "invariant": _cmd_invariant,
    "rotation": _cmd_rotation,
    "scan-rho": _cmd_scan_rho,
    "periods": _cmd_periods,
    "special-level": _cmd_special_level,
    "exceptional": _cmd_exceptional,
    "frieze-build": _cmd_frieze_build,
    "frieze-verify": _cmd_frieze_verify,
}


def run(config: RunConfig, stdout=None) -> int:
    """Execute one command; returns the process exit status."""
    stdout = stdout or sys.stdout
    try:
        config.validate()
        text, status = HANDLERS[config.command](config)
    except UsageError as exc:
        print(f"lyness: usage error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"lyness: I/O error: {exc}", file=sys.stderr)
        return 3
    except (LynessError, ValueError, ZeroDivisionError, OverflowError) as exc:
        print(f"lyness: error: {exc}", file=sys.stderr)
        return 1
    try:
        if config.output_path is not None:
            config.output_path.write_text(text, encoding="utf-8")
        else:
            stdout.write(text)
    except OSError as exc:
        print(f"lyness: I/O error: {exc}", file=sys.stderr)
        return 3
    return status


# --------------------------------------------------------------------------
# argument parsing

def _real(text: str):
    """Number, fraction ("3/2") or "inf"."""
    t = text.strip().lower()
    if t in ("inf", "infinity"):
        return math.inf
    try:
        if "/" in t:
            return Fraction(t)
        value = Fraction(t)
        return int(value) if value.denominator == 1 and "." not in t and "e" not in t else float(t)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _count(text: str) -> int:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a count: {text!r}") from None
    if not value.is_integer() or value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return int(value)


def _pair(text: str) -> tuple[Fraction, Fraction]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected x,y, got {text!r}")
    try:
        return Fraction(parts[0].strip()), Fraction(parts[1].strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a point: {text!r}") from None


def _int_list(text: str) -> list[Fraction]:
    try:
        return [Fraction(t.strip()) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a comma-separated list: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=("table", "csv", "json"), default="table")
    common.add_argument("--output", dest="output_path", type=Path, default=None, help="write to this file instead of stdout")
    common.add_argument("--rng-seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=None, help="worker processes (overrides LYNESS_THREADS)")

    parser = argparse.ArgumentParser(prog="lyness", description="Lyness map dynamics and frieze patterns")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("iterate", parents=[common], help="orbit of a seed")
    p.add_argument("--alpha", type=_real, required=True, help="parameter; 'inf' selects the normalized limit map")
    p.add_argument("--seed", type=_pair, default=None, help="x,y (fractions allowed); random if omitted")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--exact", action="store_true", help="rational arithmetic")

    p = sub.add_parser("invariant", parents=[common], help="level-curve geometry")
    p.add_argument("--alpha", type=_real, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--v", type=float)
    g.add_argument("--seed", type=_pair)
    p.add_argument("--samples", type=int, default=0, help="emit this many curve points instead")

    p = sub.add_parser("rotation", parents=[common], help="rotation number on one level curve")
    p.add_argument("--alpha", type=_real, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--v", type=float)
    g.add_argument("--seed", type=_pair)
    p.add_argument("--iters", dest="n_iters", type=_count, default=1_000_000)
    p.add_argument("--refine", action="store_true")

    p = sub.add_parser("scan-rho", parents=[common], help="rotation numbers over a log grid of levels")
    p.add_argument("--alpha", type=_real, required=True)
    p.add_argument("--v-min-mult", type=float, default=1.001)
    p.add_argument("--v-max", type=float, default=1e4)
    p.add_argument("--steps", type=_count, default=50)
    p.add_argument("--iters", dest="n_iters", type=_count, default=1_000_000)

    p = sub.add_parser("periods", parents=[common], help="achievable periods with witnesses")
    p.add_argument("--q-max", type=_count, default=60)

    p = sub.add_parser("special-level", parents=[common], help="period-9/11 level and closure check")
    p.add_argument("--period", type=int, choices=(9, 11), required=True)
    p.add_argument("--alpha", type=_real, required=True)
    p.add_argument("--tolerance", type=float, default=1e-8)

    p = sub.add_parser("exceptional", parents=[common], help="the five exceptional level values")
    p.add_argument("--alpha", type=_real, required=True)

    def add_build(sp):
        sp.add_argument("--diagonal", type=_int_list, required=True, help="f_0,...,f_{n-2}, starting and ending with 1")
        sp.add_argument("--periods", type=_count, default=2)
        sp.add_argument("--exact", action="store_true", help="allow rational (non-integer) patterns")

    def add_verify(sp):
        sp.add_argument("file", type=Path)

    frieze = sub.add_parser("frieze", help="frieze patterns")
    fsub = frieze.add_subparsers(dest="frieze_command", required=True)
    add_build(fsub.add_parser("build", parents=[common], help="render the pattern of a diagonal"))
    add_verify(fsub.add_parser("verify", parents=[common], help="check a staggered table"))
    add_build(sub.add_parser("frieze-build", parents=[common]))
    add_verify(sub.add_parser("frieze-verify", parents=[common]))
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    command = ns.command
    if command == "frieze":
        command = f"frieze-{ns.frieze_command}"
    skip = {"command", "frieze_command", "alpha", "v", "n_iters", "seed", "output_format", "output_path", "rng_seed", "threads"}
    options = {k: v for k, v in vars(ns).items() if k not in skip}
    return RunConfig(
        command=command,
        alpha=getattr(ns, "alpha", None),
        v=getattr(ns, "v", None),
        n_iters=getattr(ns, "n_iters", 1_000_000),
        seed=getattr(ns, "seed", None),
        output_format=ns.output_format,
        output_path=ns.output_path,
        rng_seed=ns.rng_seed,
        threads=ns.threads,
        options=options,
    )


def main(argv: Sequence[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
