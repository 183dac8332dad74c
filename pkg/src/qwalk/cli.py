"""Command line interface.

Subcommands: simulate, exact, oracle, limit, approx, verify, figure, sweep.
Exit codes: 0 success, 1 verification failure, 2 invalid arguments, 3 I/O
failure. QWALK_THREADS overrides sweep parallelism.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import harness
from .asymptotics import DensityKind, LimitDensity, cdf_at, density_at
from .closed_form import (
    ExactParams,
    FormulaDomainError,
    Precision,
    PRECISION_WARN_T,
    PrecisionError,
    line_exact,
)
from .core import Coin, WalkKind, make_coin, make_coin_pi
from .evolution import distribution, evolve
from .harness import OutputTable, emit, figure_data, run_checks, table_from_exact
from .qfield import OracleLimitError, q2_oracle_distribution

_PI_FORM = re.compile(r"^(\d*)pi(?:/(\d+))?$")

_PRECISIONS = {
    "double": Precision.DOUBLE,
    "dd": Precision.DOUBLE_DOUBLE,
    "exact": Precision.EXACT_Q2,
}


class UsageError(ValueError):
    """Bad argument values discovered after parsing."""


def parse_theta(text: str) -> Coin:
    """Angle in radians, or an exact pi fraction like 'pi/4' or '2pi/5'."""
    text = text.strip().lower().replace(" ", "")
    m = _PI_FORM.match(text)
    if m:
        num = int(m.group(1)) if m.group(1) else 1
        den = int(m.group(2)) if m.group(2) else 1
        return make_coin_pi(Fraction(num, den))
    try:
        return make_coin(float(text))
    except ValueError as exc:
        raise UsageError(
            f"cannot parse theta {text!r}: use radians or a pi fraction"
        ) from exc


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v != ""]
    except ValueError as exc:
        raise UsageError(f"cannot parse integer list {text!r}") from exc


def _add_common(p: argparse.ArgumentParser, steps: bool = True) -> None:
    p.add_argument("--theta", default="pi/4",
                   help="coin angle: radians or pi fraction (default pi/4)")
    if steps:
        p.add_argument("--steps", type=int, required=True, help="time t")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default="-", help="output path, '-' for stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qwalk",
        description="coined walk on the half line and its line-walk copy",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="evolve the walk and emit probabilities")
    p.add_argument("--walk", choices=("halfline", "line"), default="halfline")
    _add_common(p)

    p = sub.add_parser("exact", help="closed-form probabilities")
    p.add_argument("--walk", choices=("halfline", "line"), default="halfline")
    p.add_argument("--precision", choices=tuple(_PRECISIONS), default="dd")
    _add_common(p)

    p = sub.add_parser("oracle", help="exact rational walk at theta = pi/4")
    p.add_argument("--walk", choices=("halfline", "line"), default="halfline")
    p.add_argument("--theta", default="pi/4",
                   help="must be pi/4 (the oracle's fixed angle)")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default="-")

    p = sub.add_parser("limit", help="limit density or CDF samples")
    p.add_argument("--kind", choices=tuple(k.value for k in DensityKind),
                   default="halfTotal")
    p.add_argument("--quantity", choices=("density", "cdf"), default="density")
    p.add_argument("--points", type=int, default=512)
    p.add_argument("--theta", default="pi/4")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default="-")

    p = sub.add_parser("approx", help="large-t approximation of the half-line walk")
    _add_common(p)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", choices=harness.SUITES + ("all",), default="all")
    p.add_argument("--thetas", default="pi/6,pi/4,pi/3,1.0",
                   help="comma-separated angles")
    p.add_argument("--ts", default="1,2,14,15,30,60",
                   help="comma-separated times")
    p.add_argument("--out", default="", help="optional JSON report path")

    p = sub.add_parser("figure", help="emit the numeric content of one figure")
    p.add_argument("--id", choices=harness.FIGURES, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("sweep", help="run many configurations concurrently")
    p.add_argument("--walk", choices=("halfline", "line"), default="halfline")
    p.add_argument("--route", choices=("evolve", "exact", "approx"),
                   default="evolve")
    p.add_argument("--thetas", required=True)
    p.add_argument("--ts", required=True)
    p.add_argument("--precision", choices=tuple(_PRECISIONS), default="dd")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", required=True, help="output directory")
    return ap


def _walk_kind(name: str) -> WalkKind:
    return WalkKind.HALF_LINE if name == "halfline" else WalkKind.LINE


def _warn_precision(t: int, precision: Precision) -> None:
    if t > PRECISION_WARN_T and precision is not Precision.EXACT_Q2:
        print(
            f"warning: t={t} exceeds {PRECISION_WARN_T}; the alternating sums "
            "lose accuracy at this range, treat values as plot-quality only",
            file=sys.stderr,
        )


def _exact_table(coin: Coin, walk: WalkKind, t: int,
                 precision: Precision) -> OutputTable:
    params = ExactParams.for_coin(coin, t, precision)
    if walk is WalkKind.LINE:
        dist = line_exact(coin, t, params)
        return harness.table_from_distribution(dist, "exact", coin.theta)
    return harness.half_line_exact_table(coin, t, "")


def _cmd_simulate(args) -> int:
    coin = parse_theta(args.theta)
    state = evolve(_walk_kind(args.walk), coin, args.steps)
    table = harness.table_from_distribution(
        distribution(state), "evolve", coin.theta)
    emit(table, args.format, args.out)
    return 0


def _cmd_exact(args) -> int:
    coin = parse_theta(args.theta)
    precision = _PRECISIONS[args.precision]
    if args.steps < 1:
        raise UsageError("closed forms need --steps >= 1")
    _warn_precision(args.steps, precision)
    table = _exact_table(coin, _walk_kind(args.walk), args.steps, precision)
    emit(table, args.format, args.out)
    return 0


def _cmd_oracle(args) -> int:
    coin = parse_theta(args.theta)
    if coin.pi_fraction is None or (coin.pi_fraction % 2) != Fraction(1, 4):
        raise UsageError("the exact oracle is defined at theta = pi/4 only")
    dist = q2_oracle_distribution(_walk_kind(args.walk), args.steps)
    emit(table_from_exact(dist, coin.theta), args.format, args.out)
    return 0


def _cmd_limit(args) -> int:
    coin = parse_theta(args.theta)
    if coin.is_degenerate():
        raise UsageError("limit densities need theta away from multiples of pi/2")
    if args.points < 2:
        raise UsageError("--points must be >= 2")
    d = LimitDensity(coin=coin, kind=DensityKind(args.kind))
    lo, hi = d.support
    span = hi - lo
    lo -= 0.05 * span
    hi += 0.05 * span
    n = args.points
    if args.quantity == "density":
        rows = []
        for i in range(n):
            y = lo + (hi - lo) * i / (n - 1)
            rows.append((y, density_at(d, y)))
        columns = ("y", "density")
    else:
        rows = []
        for i in range(n):
            x = lo + (hi - lo) * i / (n - 1)
            rows.append((x, cdf_at(d, x)))
        columns = ("x", "cdf")
    table = OutputTable(
        kind=args.kind, theta=coin.theta, t=None, route="limit",
        columns=columns, rows=tuple(rows),
    )
    emit(table, args.format, args.out)
    return 0


def _cmd_approx(args) -> int:
    coin = parse_theta(args.theta)
    if args.steps < 1:
        raise UsageError("--steps must be >= 1")
    table = harness.approx_table(coin, args.steps, "")
    emit(table, args.format, args.out)
    return 0


def _cmd_verify(args) -> int:
    coins = [parse_theta(v) for v in args.thetas.split(",") if v]
    ts = _parse_int_list(args.ts)
    report = run_checks(args.suite, coins, ts)
    for check in report.checks:
        print(check.line())
    if args.out:
        doc = [
            {
                "name": c.name, "theta": c.theta, "t": c.t,
                "max_residual": c.max_residual, "tolerance": c.tolerance,
                "pass": c.passed, "error": c.error,
            }
            for c in report.checks
        ]
        Path(args.out).write_text(json.dumps(doc, indent=2) + "\n",
                                  encoding="utf-8")
    return 0 if report.all_passed else 1


def _cmd_figure(args) -> int:
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for table in figure_data(args.id):
        emit(table, args.format, outdir / f"{table.label}.{args.format}")
    return 0


def _sweep_one(coin: Coin, walk: WalkKind, t: int, route: str,
               precision: Precision, fmt: str, path: Path) -> None:
    if route == "evolve":
        table = harness.table_from_distribution(
            distribution(evolve(walk, coin, t)), "evolve", coin.theta)
    elif route == "exact":
        table = _exact_table(coin, walk, t, precision)
    else:
        table = harness.approx_table(coin, t, "")
    emit(table, fmt, path)


def _cmd_sweep(args) -> int:
    theta_texts = [v for v in args.thetas.split(",") if v]
    coins = [(text, parse_theta(text)) for text in theta_texts]
    ts = _parse_int_list(args.ts)
    walk = _walk_kind(args.walk)
    precision = _PRECISIONS[args.precision]
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    workers = int(os.environ.get("QWALK_THREADS") or os.cpu_count() or 1)
    jobs = []
    for text, coin in coins:
        tag = re.sub(r"[^0-9a-zA-Z._-]", "_", text)
        for t in ts:
            name = f"{args.route}_{args.walk}_theta-{tag}_t-{t}.{args.format}"
            jobs.append(((coin.theta, t), name, coin, t))
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        futures = [
            pool.submit(_sweep_one, coin, walk, t, args.route, precision,
                        args.format, outdir / name)
            for _, name, coin, t in jobs
        ]
        for fut in futures:
            fut.result()
    manifest = "\n".join(name for _, name, _, _ in
                         sorted(jobs, key=lambda j: j[0])) + "\n"
    (outdir / "manifest.txt").write_text(manifest, encoding="utf-8")
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "exact": _cmd_exact,
    "oracle": _cmd_oracle,
    "limit": _cmd_limit,
    "approx": _cmd_approx,
    "verify": _cmd_verify,
    "figure": _cmd_figure,
    "sweep": _cmd_sweep,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (UsageError, FormulaDomainError, OracleLimitError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PrecisionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        target = getattr(exc, "filename", None)
        where = f" ({target})" if target else ""
        print(f"i/o error: {exc}{where}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
