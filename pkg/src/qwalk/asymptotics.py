"""Weak-limit densities of X_t/t, their CDFs, finite-time approximations,
and a Kolmogorov-Smirnov convergence diagnostic.

The rescaled position converges in law to a density supported on
(-|c|, |c|) for the line walk and on [0, |c|) for the half-line walk:

    line total:    |s| / (pi (1 + y) sqrt(c^2 - y^2))
    half, inner 0: |s| / (pi (1 + y) sqrt(c^2 - y^2))   on [0, |c|)
    half, inner 1: |s| / (pi (1 - y) sqrt(c^2 - y^2))   on [0, |c|)
    half, total:  2|s| / (pi (1 - y^2) sqrt(c^2 - y^2)) on [0, |c|)

CDFs are integrated after the substitution y = |c| sin(phi), which removes
the inverse-square-root endpoint singularity and leaves a smooth bounded
integrand on [-pi/2, pi/2].
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .core import Coin, WalkKind
from .evolution import evolve, probability_arrays

CDF_ABS_TOL = 1e-10


class DensityKind(str, Enum):
    LINE_TOTAL = "lineTotal"
    HALF_INNER0 = "halfInner0"
    HALF_INNER1 = "halfInner1"
    HALF_TOTAL = "halfTotal"


def _cs2(coin: Coin) -> tuple[float, float]:
    """(cos^2, sin^2), exact at the canonical angles.

    Near the support edge the density amplifies the last-ulp difference
    between cos(theta)^2 and the exact rational square, so prefer the latter
    and never re-square a rounded root.
    """
    cos2 = coin.cos2_exact()
    if cos2 is not None:
        return float(cos2), float(1 - cos2)
    return coin.c * coin.c, coin.s * coin.s


def _cs(coin: Coin) -> tuple[float, float]:
    """|c|, |s| consistent with the squares returned by _cs2."""
    c2, s2 = _cs2(coin)
    return math.sqrt(c2), math.sqrt(s2)


@dataclass(frozen=True)
class LimitDensity:
    """Closed-form limit density of X_t/t for one walk/inner-state choice."""

    coin: Coin
    kind: DensityKind

    @property
    def support(self) -> tuple[float, float]:
        c, _ = _cs(self.coin)
        if self.kind is DensityKind.LINE_TOTAL:
            return (-c, c)
        return (0.0, c)


def density_at(d: LimitDensity, y: float) -> float:
    """Density value at y; zero outside the (half-)open support."""
    c, s = _cs(d.coin)
    c2, _ = _cs2(d.coin)
    if d.kind is DensityKind.LINE_TOTAL:
        if not (-c < y < c):
            return 0.0
    else:
        if not (0.0 <= y < c):
            return 0.0
    root = math.sqrt(c2 - y * y)
    if d.kind is DensityKind.LINE_TOTAL or d.kind is DensityKind.HALF_INNER0:
        return s / (math.pi * (1.0 + y) * root)
    if d.kind is DensityKind.HALF_INNER1:
        return s / (math.pi * (1.0 - y) * root)
    return 2.0 * s / (math.pi * (1.0 - y * y) * root)


def _adaptive_simpson(f, a: float, b: float, tol: float) -> float:
    """Adaptive Simpson with Richardson correction, absolute tolerance."""
    fa, fm, fb = f(a), f((a + b) / 2), f(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def rec(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        err = left + right - whole
        if depth >= 50 or abs(err) <= 15.0 * tol:
            return left + right + err / 15.0
        return rec(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) + rec(
            m, b, fm, frm, fb, right, 0.5 * tol, depth + 1
        )

    if a == b:
        return 0.0
    return rec(a, b, fa, fm, fb, whole, tol, 0)


def _phi_integrand(d: LimitDensity):
    """Density transformed by y = |c| sin(phi); bounded and smooth."""
    c, s = _cs(d.coin)
    c2, _ = _cs2(d.coin)
    kind = d.kind
    if kind is DensityKind.LINE_TOTAL or kind is DensityKind.HALF_INNER0:
        return lambda phi: s / (math.pi * (1.0 + c * math.sin(phi)))
    if kind is DensityKind.HALF_INNER1:
        return lambda phi: s / (math.pi * (1.0 - c * math.sin(phi)))
    return lambda phi: 2.0 * s / (math.pi * (1.0 - c2 * math.sin(phi) ** 2))


def _phi_of(d: LimitDensity, x: float) -> float:
    c, _ = _cs(d.coin)
    return math.asin(min(max(x / c, -1.0), 1.0))


def cdf_at(d: LimitDensity, x: float) -> float:
    """Limit of P(X_t/t <= x [; inner]) by adaptive quadrature.

    The two per-inner kinds describe joint (sub-probability) laws, so their
    CDFs saturate at the inner-state mass rather than at 1.
    """
    lo, hi = d.support
    if x <= lo:
        return 0.0
    if x >= hi:
        return total_mass(d) if _is_sub_law(d.kind) else 1.0
    phi_lo = -0.5 * math.pi if d.kind is DensityKind.LINE_TOTAL else 0.0
    val = _adaptive_simpson(_phi_integrand(d), phi_lo, _phi_of(d, x),
                            0.01 * CDF_ABS_TOL)
    return min(max(val, 0.0), 1.0)


def _is_sub_law(kind: DensityKind) -> bool:
    return kind in (DensityKind.HALF_INNER0, DensityKind.HALF_INNER1)


def cdf_grid(d: LimitDensity, xs: np.ndarray) -> np.ndarray:
    """CDF at many sorted points, integrating each panel once."""
    xs = np.asarray(xs, dtype=float)
    if np.any(np.diff(xs) < 0):
        raise ValueError("grid must be sorted ascending")
    lo, hi = d.support
    phi_lo = -0.5 * math.pi if d.kind is DensityKind.LINE_TOTAL else 0.0
    f = _phi_integrand(d)
    saturation = total_mass(d) if _is_sub_law(d.kind) else 1.0
    out = np.empty(len(xs))
    acc = 0.0
    prev_phi = phi_lo
    for i, x in enumerate(xs):
        if x <= lo:
            out[i] = 0.0
            continue
        if x >= hi:
            out[i] = saturation
            continue
        phi = _phi_of(d, x)
        acc += _adaptive_simpson(f, prev_phi, phi, 0.01 * CDF_ABS_TOL)
        prev_phi = phi
        out[i] = min(max(acc, 0.0), 1.0)
    return out


@lru_cache(maxsize=256)
def total_mass(d: LimitDensity) -> float:
    """Integral of the density over its whole support."""
    phi_lo = -0.5 * math.pi if d.kind is DensityKind.LINE_TOTAL else 0.0
    return _adaptive_simpson(_phi_integrand(d), phi_lo, 0.5 * math.pi,
                             0.01 * CDF_ABS_TOL)


class ApproxKind(str, Enum):
    INNER0 = "inner0"
    INNER1 = "inner1"
    TOTAL = "total"


def approx_prob(coin: Coin, t: int, x: int, kind: ApproxKind) -> float:
    """Large-t approximation of the half-line probability at position x.

    Zero outside 0 <= x < |c| t.
    """
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    kind = ApproxKind(kind)
    c, s = _cs(coin)
    c2, _ = _cs2(coin)
    if not (0 <= x < c * t):
        return 0.0
    root = math.sqrt(c2 * t * t - x * x)
    if kind is ApproxKind.INNER0:
        return s * t / (math.pi * (t + x) * root)
    if kind is ApproxKind.INNER1:
        return s * t / (math.pi * (t - x) * root)
    return 2.0 * s * t * t / (math.pi * (t * t - x * x) * root)


@dataclass(frozen=True)
class KSReport:
    """Sup-distance between the empirical law of X_t/t and the limit CDF."""

    t: int
    theta: float
    ks: float


def ks_distance(coin: Coin, t: int,
                kind: DensityKind = DensityKind.HALF_TOTAL) -> KSReport:
    """Kolmogorov-Smirnov distance of the evolved walk at time t.

    The empirical CDF is right-continuous with jumps at x/t for every
    support position; the sup is attained at a jump, so both sides of every
    jump are inspected.
    """
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    d = LimitDensity(coin=coin, kind=kind)
    walk = WalkKind.LINE if kind is DensityKind.LINE_TOTAL else WalkKind.HALF_LINE
    state = evolve(walk, coin, t)
    p0, p1 = probability_arrays(state)
    if kind is DensityKind.HALF_INNER0:
        weights = p0
    elif kind is DensityKind.HALF_INNER1:
        weights = p1
    else:
        weights = p0 + p1
    # normalize by the full state norm so the per-inner kinds stay on the
    # joint (sub-probability) scale their limit laws use
    norm = float((p0 + p1).sum())
    xs = (np.arange(len(weights)) + state.offset) / t
    cum = np.cumsum(weights) / norm
    limit = cdf_grid(d, xs)
    below = np.concatenate(([0.0], cum[:-1]))
    ks = float(np.max(np.maximum(np.abs(limit - cum), np.abs(limit - below))))
    return KSReport(t=t, theta=coin.theta, ks=ks)
