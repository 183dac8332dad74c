"""Verification suites, plot-ready output tables, and figure data.

The verification suites re-derive the distribution identities numerically:
mirror symmetries of the line walk (lemma1), the amplitude copy between the
two walks (lemma2), the probability copy (theorem1), closed form versus
simulation (exactVsSim), the inner-state split of the half-line closed form
(innerSplit), limit-density normalization (limitNorm), and the KS convergence
diagnostic (ksConvergence).
"""
from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from . import asymptotics
from .asymptotics import ApproxKind, DensityKind, LimitDensity
from .closed_form import (
    ExactParams,
    FormulaDomainError,
    Precision,
    half_line_exact_by_inner,
    half_line_exact_total,
    line_exact,
)
from .core import Coin, Distribution, WalkKind, make_coin, make_coin_pi
from .evolution import distribution, evolve, iter_states, probability_arrays
from .qfield import ExactDistribution

SUITES = (
    "lemma1",
    "lemma2",
    "theorem1",
    "exactVsSim",
    "innerSplit",
    "limitNorm",
    "ksConvergence",
)

TOLERANCES = {
    "lemma1": 1e-12,
    "lemma2": 1e-12,
    "theorem1": 1e-12,
    "exactVsSim": 1e-9,
    "innerSplit": 1e-12,
    "limitNorm": 1e-8,
}

# double-double route equivalence is only claimed out to t = 60; inside the
# 'all' suite larger requested times are skipped rather than reported red
EXACT_VS_SIM_MAX_T = 60

# KS thresholds frozen from a calibration sweep over the canonical angles:
# worst observed 0.046 at t = 1000 and 0.124 at t = 100, decaying roughly
# like t^-0.43; the pre-1000 curve carries a margin on top of that
KS_TOL_AT_1000 = 0.05
_KS_ANCHOR = 0.052
_KS_DECAY = 0.45


def ks_tolerance(t: int) -> float:
    if t >= 1000:
        return KS_TOL_AT_1000
    return _KS_ANCHOR * (1000.0 / t) ** _KS_DECAY


def canonical_coins() -> tuple[Coin, ...]:
    """The four angles used throughout the verification grids."""
    return (
        make_coin_pi(Fraction(1, 6)),
        make_coin_pi(Fraction(1, 4)),
        make_coin_pi(Fraction(1, 3)),
        make_coin(1.0),
    )


@dataclass(frozen=True)
class CheckResult:
    """One executed check; ``passed`` is exactly residual <= tolerance."""

    name: str
    theta: float
    t: int
    max_residual: float
    tolerance: float
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        msg = f" [{self.error}]" if self.error else ""
        return (
            f"{status} {self.name} theta={self.theta:.12g} t={self.t} "
            f"residual={self.max_residual:.3e} tol={self.tolerance:.1e}{msg}"
        )


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[CheckResult, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> tuple[CheckResult, ...]:
        return tuple(c for c in self.checks if not c.passed)

    def __add__(self, other: "VerificationReport") -> "VerificationReport":
        return VerificationReport(checks=self.checks + other.checks)


def _as_coin(theta: Union[Coin, float]) -> Coin:
    return theta if isinstance(theta, Coin) else make_coin(float(theta))


def _error_check(name: str, coin: Coin, t: int, tol: float, msg: str) -> CheckResult:
    return CheckResult(
        name=name, theta=coin.theta, t=t, max_residual=math.nan,
        tolerance=tol, error=msg,
    )


def _sin_zero(coin: Coin) -> bool:
    # identity angles (multiples of pi) break the mirror/copy identities
    if coin.pi_fraction is not None:
        return (coin.pi_fraction % 1) == 0
    return abs(coin.s) < 1e-12


def _line_probs(state) -> np.ndarray:
    p0, p1 = probability_arrays(state)
    return p0 + p1


def _suite_lemma1(coins, ts) -> list[CheckResult]:
    tol = TOLERANCES["lemma1"]
    out = []
    for coin in coins:
        if _sin_zero(coin):
            out.extend(
                _error_check("lemma1", coin, t, tol, "theta excluded (sin = 0)")
                for t in ts
            )
            continue
        wanted = set(ts)
        for t, state in iter_states(WalkKind.LINE, coin, max(ts)):
            if t not in wanted:
                continue
            out.append(CheckResult(
                name="lemma1", theta=coin.theta, t=t,
                max_residual=_lemma1_residual(state, coin), tolerance=tol,
            ))
    return out


def _padded_line(state) -> tuple[np.ndarray, np.ndarray, int]:
    """Line amplitudes padded with zeros; position p sits at index p + shift."""
    g = state.amps[:, 0]
    d = state.amps[:, 1]
    pad = 3
    gp = np.concatenate([np.zeros(pad, dtype=complex), g,
                         np.zeros(pad, dtype=complex)])
    dp = np.concatenate([np.zeros(pad, dtype=complex), d,
                         np.zeros(pad, dtype=complex)])
    return gp, dp, pad - state.offset


def _lemma1_residual(state, coin: Coin) -> float:
    """Mirror identities of the line amplitudes at one time."""
    t = state.t
    gp, dp, shift = _padded_line(state)
    x = np.arange(0, t + 1)
    ia = x - 1 + shift
    ib = -x + shift
    ic = -x - 2 + shift
    sgn = 1.0 if t % 2 == 0 else -1.0
    c, s = coin.c, coin.s
    res1 = np.abs(dp[ia] - sgn * dp[ib])
    lhs = s * gp[ia] - c * dp[ia]
    rhs = s * gp[ic] - c * dp[ic]
    res2 = np.abs(lhs + sgn * rhs)
    return float(max(res1.max(), res2.max()))


def _suite_lemma2(coins, ts) -> list[CheckResult]:
    tol = TOLERANCES["lemma2"]
    out = []
    for coin in coins:
        if _sin_zero(coin):
            out.extend(
                _error_check("lemma2", coin, t, tol, "theta excluded (sin = 0)")
                for t in ts
            )
            continue
        wanted = set(ts)
        line_iter = iter_states(WalkKind.LINE, coin, max(ts))
        half_iter = iter_states(WalkKind.HALF_LINE, coin, max(ts))
        for (t, line_state), (_, half_state) in zip(line_iter, half_iter):
            if t not in wanted:
                continue
            out.append(CheckResult(
                name="lemma2", theta=coin.theta, t=t,
                max_residual=_lemma2_residual(half_state, line_state),
                tolerance=tol,
            ))
    return out


def _lemma2_residual(half_state, line_state) -> float:
    """Amplitude copy identities between the two walks at one time."""
    t = half_state.t
    a = half_state.amps[:, 0]
    b = half_state.amps[:, 1]
    gp, dp, shift = _padded_line(line_state)
    x = np.arange(0, t + 1)
    even_pos = x % 2 == 0
    ix = x + shift
    im = -x - 1 + shift
    g_x, d_x = gp[ix], dp[ix]
    g_m, d_m = gp[im], dp[im]
    if t % 2 == 0:
        exp_a = np.where(even_pos, g_x - 1j * d_x, d_x + 1j * g_x)
        exp_b = np.where(even_pos, d_m + 1j * g_m, -g_m + 1j * d_m)
    else:
        exp_a = np.where(even_pos, d_x + 1j * g_x, g_x - 1j * d_x)
        exp_b = np.where(even_pos, g_m - 1j * d_m, -d_m - 1j * g_m)
    return float(max(np.abs(a - exp_a).max(), np.abs(b - exp_b).max()))


def _suite_theorem1(coins, ts) -> list[CheckResult]:
    tol = TOLERANCES["theorem1"]
    out = []
    for coin in coins:
        if _sin_zero(coin):
            out.extend(
                _error_check("theorem1", coin, t, tol, "theta excluded (sin = 0)")
                for t in ts
            )
            continue
        wanted = set(ts)
        line_iter = iter_states(WalkKind.LINE, coin, max(ts))
        half_iter = iter_states(WalkKind.HALF_LINE, coin, max(ts))
        for (t, line_state), (_, half_state) in zip(line_iter, half_iter):
            if t not in wanted:
                continue
            out.append(CheckResult(
                name="theorem1", theta=coin.theta, t=t,
                max_residual=_theorem1_residual(half_state, line_state),
                tolerance=tol,
            ))
    return out


def _theorem1_residual(half_state, line_state) -> float:
    """Probability copy: inner 0 matches x >= 0, inner 1 matches -x-1."""
    t = half_state.t
    p0, p1 = probability_arrays(half_state)
    pl = _line_probs(line_state)
    right = pl[t + 1:]
    left_rev = pl[t::-1]
    return float(max(np.abs(p0 - right).max(), np.abs(p1 - left_rev).max()))


def _suite_exact_vs_sim(coins, ts, precision=Precision.DOUBLE_DOUBLE
                        ) -> list[CheckResult]:
    tol = TOLERANCES["exactVsSim"]
    out = []
    for coin in coins:
        for t in ts:
            if t < 1:
                continue
            try:
                params = ExactParams.for_coin(coin, t, precision)
                cf_line = line_exact(coin, t, params).as_dict()
                cf_half = half_line_exact_total(coin, t, params).as_dict()
            except FormulaDomainError as exc:
                out.append(_error_check("exactVsSim", coin, t, tol, str(exc)))
                continue
            sim_line = distribution(evolve(WalkKind.LINE, coin, t)).as_dict()
            sim_half = distribution(evolve(WalkKind.HALF_LINE, coin, t)).as_dict()
            res = 0.0
            for table, sim in ((cf_line, sim_line), (cf_half, sim_half)):
                for x in set(table) | set(sim):
                    res = max(res, abs(table.get(x, 0.0) - sim.get(x, 0.0)))
            out.append(CheckResult(
                name="exactVsSim", theta=coin.theta, t=t,
                max_residual=res, tolerance=tol,
            ))
    return out


def _suite_inner_split(coins, ts) -> list[CheckResult]:
    tol = TOLERANCES["innerSplit"]
    out = []
    for coin in coins:
        for t in ts:
            if t < 1:
                continue
            try:
                params = ExactParams.for_coin(coin, t)
                total = half_line_exact_total(coin, t, params).as_dict()
                i0 = half_line_exact_by_inner(coin, t, 0, params).as_dict()
                i1 = half_line_exact_by_inner(coin, t, 1, params).as_dict()
            except FormulaDomainError as exc:
                out.append(_error_check("innerSplit", coin, t, tol, str(exc)))
                continue
            res = max(
                abs(total.get(x, 0.0) - i0.get(x, 0.0) - i1.get(x, 0.0))
                for x in set(total) | set(i0) | set(i1)
            )
            out.append(CheckResult(
                name="innerSplit", theta=coin.theta, t=t,
                max_residual=res, tolerance=tol,
            ))
    return out


def _suite_limit_norm(coins, ts) -> list[CheckResult]:
    tol = TOLERANCES["limitNorm"]
    out = []
    for coin in coins:
        if coin.is_degenerate():
            out.append(_error_check(
                "limitNorm", coin, 0, tol, "theta excluded (degenerate coin)"
            ))
            continue
        for name, mass in (
            ("limitNorm[lineTotal]",
             asymptotics.total_mass(LimitDensity(coin, DensityKind.LINE_TOTAL))),
            ("limitNorm[halfTotal]",
             asymptotics.total_mass(LimitDensity(coin, DensityKind.HALF_TOTAL))),
            ("limitNorm[halfInner0+halfInner1]",
             asymptotics.total_mass(LimitDensity(coin, DensityKind.HALF_INNER0))
             + asymptotics.total_mass(LimitDensity(coin, DensityKind.HALF_INNER1))),
        ):
            out.append(CheckResult(
                name=name, theta=coin.theta, t=0,
                max_residual=abs(mass - 1.0), tolerance=tol,
            ))
    return out


def _suite_ks(coins, ts) -> list[CheckResult]:
    out = []
    for coin in coins:
        for t in ts:
            if coin.is_degenerate():
                out.append(_error_check(
                    "ksConvergence[halfTotal]", coin, t, ks_tolerance(t),
                    "theta excluded (degenerate coin)",
                ))
                continue
            report = asymptotics.ks_distance(coin, t, DensityKind.HALF_TOTAL)
            out.append(CheckResult(
                name="ksConvergence[halfTotal]", theta=coin.theta, t=t,
                max_residual=report.ks, tolerance=ks_tolerance(t),
            ))
    return out


def run_checks(suite: str, thetas: Sequence[Union[Coin, float]],
               ts: Sequence[int]) -> VerificationReport:
    """Execute one verification suite (or 'all') over a theta and time grid."""
    coins = [_as_coin(th) for th in thetas]
    ts = sorted(set(int(t) for t in ts))
    if not ts:
        raise ValueError("at least one time is required")
    if suite == "all":
        checks: list[CheckResult] = []
        checks += _suite_lemma1(coins, ts)
        checks += _suite_lemma2(coins, ts)
        checks += _suite_theorem1(coins, ts)
        checks += _suite_exact_vs_sim(
            coins, [t for t in ts if t <= EXACT_VS_SIM_MAX_T])
        checks += _suite_inner_split(
            coins, [t for t in ts if t <= EXACT_VS_SIM_MAX_T])
        checks += _suite_limit_norm(coins, ts)
        # the KS diagnostic only means something once the law has started to
        # settle; small times are skipped inside the combined run
        checks += _suite_ks(coins, [t for t in ts if t >= 100])
        return VerificationReport(checks=tuple(checks))
    if suite == "lemma1":
        return VerificationReport(tuple(_suite_lemma1(coins, ts)))
    if suite == "lemma2":
        return VerificationReport(tuple(_suite_lemma2(coins, ts)))
    if suite == "theorem1":
        return VerificationReport(tuple(_suite_theorem1(coins, ts)))
    if suite == "exactVsSim":
        return VerificationReport(tuple(_suite_exact_vs_sim(coins, ts)))
    if suite == "innerSplit":
        return VerificationReport(tuple(_suite_inner_split(coins, ts)))
    if suite == "limitNorm":
        return VerificationReport(tuple(_suite_limit_norm(coins, ts)))
    if suite == "ksConvergence":
        return VerificationReport(tuple(_suite_ks(coins, ts)))
    raise ValueError(f"unknown suite {suite!r}; expected one of {SUITES + ('all',)}")


# ---------------------------------------------------------------------------
# output tables


@dataclass(frozen=True)
class OutputTable:
    """Rows plus the metadata needed to reproduce them."""

    kind: str
    theta: float
    t: Optional[int]
    route: str
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    label: str = ""
    exact_columns: tuple[str, ...] = ()
    exact_rows: tuple[tuple, ...] = ()


def table_from_distribution(dist: Distribution, route: str, theta: float,
                            label: str = "") -> OutputTable:
    rows = tuple((r.x, r.p0, r.p1, r.p) for r in dist.rows)
    return OutputTable(
        kind=dist.kind.value, theta=theta, t=dist.t, route=route,
        columns=("x", "p0", "p1", "p"), rows=rows, label=label,
    )


def table_from_exact(dist: ExactDistribution, theta: float,
                     label: str = "") -> OutputTable:
    rows = tuple(
        (r.x, float(r.p0), float(r.p1), float(r.p)) for r in dist.rows
    )
    exact_rows = tuple(
        (str(r.p0), str(r.p1), str(r.p)) for r in dist.rows
    )
    return OutputTable(
        kind=dist.kind.value, theta=theta, t=dist.t, route="oracle",
        columns=("x", "p0", "p1", "p"), rows=rows, label=label,
        exact_columns=("p0_exact", "p1_exact", "p_exact"),
        exact_rows=exact_rows,
    )


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    f = float(v)
    if f == 0.0:
        return "0"
    return repr(f)


def render_csv(table: OutputTable) -> str:
    lines = [",".join(table.columns)]
    for row in table.rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def render_json(table: OutputTable) -> str:
    rows = []
    for i, row in enumerate(table.rows):
        obj = dict(zip(table.columns, row))
        if table.exact_rows:
            obj.update(zip(table.exact_columns, table.exact_rows[i]))
        rows.append(obj)
    doc = {
        "meta": {
            "kind": table.kind,
            "theta": table.theta,
            "t": table.t,
            "route": table.route,
        },
        "columns": list(table.columns),
        "rows": rows,
    }
    return json.dumps(doc, indent=None, separators=(",", ":")) + "\n"


def emit(table: OutputTable, format: str, destination) -> None:
    """Write one table as CSV or JSON; '-' writes to stdout."""
    if format == "csv":
        text = render_csv(table)
    elif format == "json":
        text = render_json(table)
    else:
        raise ValueError(f"unknown format {format!r}")
    if destination == "-":
        sys.stdout.write(text)
        return
    Path(destination).write_text(text, encoding="utf-8", newline="\n")


def read_table_json(path) -> OutputTable:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    meta = doc["meta"]
    columns = tuple(doc["columns"])
    base_cols = [c for c in columns]
    rows = []
    exact_rows = []
    exact_columns: tuple[str, ...] = ()
    for obj in doc["rows"]:
        rows.append(tuple(obj[c] for c in base_cols))
        extras = tuple(k for k in obj if k not in base_cols)
        if extras:
            exact_columns = extras
            exact_rows.append(tuple(obj[k] for k in extras))
    return OutputTable(
        kind=meta["kind"], theta=meta["theta"], t=meta["t"],
        route=meta["route"], columns=columns, rows=tuple(rows),
        exact_columns=exact_columns, exact_rows=tuple(exact_rows),
    )


def read_rows_csv(path) -> tuple[tuple[str, ...], tuple[tuple, ...]]:
    """Header and typed rows of an emitted CSV (no metadata in this format)."""
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.split("\n") if ln != ""]
    header = tuple(lines[0].split(","))
    rows = []
    for ln in lines[1:]:
        vals = []
        for i, cell in enumerate(ln.split(",")):
            if cell == "":
                vals.append(None)
            elif header[i] in ("x", "t"):
                vals.append(int(cell))
            else:
                vals.append(float(cell))
        rows.append(tuple(vals))
    return header, tuple(rows)


# ---------------------------------------------------------------------------
# figure data

FIGURES = tuple(f"fig{i}" for i in range(1, 10))

_PI4 = Fraction(1, 4)
_PI3 = Fraction(1, 3)


def _evolve_table(coin: Coin, kind: WalkKind, t: int, label: str) -> OutputTable:
    dist = distribution(evolve(kind, coin, t))
    return table_from_distribution(dist, "evolve", coin.theta, label)


def half_line_exact_table(coin: Coin, t: int, label: str) -> OutputTable:
    """Half-line closed-form table with both inner columns and the total."""
    params = ExactParams.for_coin(coin, t)
    i0 = half_line_exact_by_inner(coin, t, 0, params).inner_dict(0)
    i1 = half_line_exact_by_inner(coin, t, 1, params).inner_dict(1)
    tot = half_line_exact_total(coin, t, params).as_dict()
    rows = tuple(
        (x, i0.get(x, 0.0), i1.get(x, 0.0), tot[x]) for x in sorted(tot)
    )
    return OutputTable(
        kind=WalkKind.HALF_LINE.value, theta=coin.theta, t=t, route="exact",
        columns=("x", "p0", "p1", "p"), rows=rows, label=label,
    )


def approx_table(coin: Coin, t: int, label: str) -> OutputTable:
    rows = tuple(
        (
            x,
            asymptotics.approx_prob(coin, t, x, ApproxKind.INNER0),
            asymptotics.approx_prob(coin, t, x, ApproxKind.INNER1),
            asymptotics.approx_prob(coin, t, x, ApproxKind.TOTAL),
        )
        for x in range(0, t + 1)
    )
    return OutputTable(
        kind=WalkKind.HALF_LINE.value, theta=coin.theta, t=t, route="approx",
        columns=("x", "p0", "p1", "p"), rows=rows, label=label,
    )


def _series_tables(coin: Coin, t_max: int, step: int) -> list[OutputTable]:
    """Long-format (t, x, p) time series of the half-line walk, per column."""
    selectors = (("inner0", 1), ("inner1", 2), ("total", 3))
    collected: dict[str, list[tuple]] = {name: [] for name, _ in selectors}
    for t, state in iter_states(WalkKind.HALF_LINE, coin, t_max):
        if t % step != 0:
            continue
        p0, p1 = probability_arrays(state)
        for x in range(len(p0)):
            row = (t, x, float(p0[x]), float(p1[x]), float(p0[x] + p1[x]))
            for name, col in selectors:
                collected[name].append((t, x, row[col + 1]))
    return [
        OutputTable(
            kind=WalkKind.HALF_LINE.value, theta=coin.theta, t=None,
            route="evolve", columns=("t", "x", "p"),
            rows=tuple(collected[name]),
            label=f"fig2_{name}_series",
        )
        for name, _ in selectors
    ]


def figure_data(figure: str) -> list[OutputTable]:
    """Numeric content behind one of the nine reproduction figures."""
    pi4 = make_coin_pi(_PI4)
    pi3 = make_coin_pi(_PI3)
    if figure == "fig1":
        return [_evolve_table(pi4, WalkKind.HALF_LINE, 500,
                              "fig1_halfline_theta_pi4_t500_evolve")]
    if figure == "fig2":
        return _series_tables(pi4, 500, 10)
    if figure == "fig3":
        coins = (
            make_coin_pi(Fraction(1, 6)),
            pi4,
            pi3,
            make_coin_pi(Fraction(2, 5)),
        )
        return [
            _evolve_table(
                coin, WalkKind.HALF_LINE, 150,
                f"fig3_halfline_theta_{_theta_tag(coin)}_t150_evolve",
            )
            for coin in coins
        ]
    pairs = {
        "fig4": (pi4, 14),
        "fig5": (pi4, 15),
        "fig6": (pi3, 14),
        "fig7": (pi3, 15),
    }
    if figure in pairs:
        coin, t = pairs[figure]
        tag = _theta_tag(coin)
        return [
            _evolve_table(coin, WalkKind.HALF_LINE, t,
                          f"{figure}_halfline_theta_{tag}_t{t}_evolve"),
            half_line_exact_table(coin, t,
                         f"{figure}_halfline_theta_{tag}_t{t}_exact"),
        ]
    approx_pairs = {"fig8": pi4, "fig9": pi3}
    if figure in approx_pairs:
        coin = approx_pairs[figure]
        tag = _theta_tag(coin)
        return [
            _evolve_table(coin, WalkKind.HALF_LINE, 500,
                          f"{figure}_halfline_theta_{tag}_t500_evolve"),
            approx_table(coin, 500,
                          f"{figure}_halfline_theta_{tag}_t500_approx"),
        ]
    raise ValueError(f"unknown figure {figure!r}; expected one of {FIGURES}")


def _theta_tag(coin: Coin) -> str:
    if coin.pi_fraction is not None:
        f = coin.pi_fraction
        num = "" if f.numerator == 1 else str(f.numerator)
        return f"{num}pi{f.denominator}" if f.denominator != 1 else f"{num}pi"
    return f"{coin.theta:.6g}".replace(".", "_").replace("-", "m")
