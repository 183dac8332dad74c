"""Domain types for the coined walk: coins, walk states, distributions.

Positions on the half line are 0, 1, 2, ...; positions on the line are all
integers. A state stores one complex amplitude pair per position of its
support window (inner components 0 and 1); everything outside the window is
implicitly zero. States are immutable value objects.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

import numpy as np

SQRT1_2 = math.sqrt(0.5)

# cos^2 of pi*p/q is rational only for these denominators (after reduction)
_RATIONAL_COS2 = {
    1: Fraction(1),
    2: Fraction(0),
    3: Fraction(1, 4),
    4: Fraction(1, 2),
    6: Fraction(3, 4),
}


class WalkKind(str, Enum):
    """Which lattice the walker moves on."""

    HALF_LINE = "halfline"
    LINE = "line"


@dataclass(frozen=True)
class Coin:
    """Real reflection coin [[c, s], [s, -c]] with c = cos(theta), s = sin(theta).

    ``pi_fraction`` is set when the angle was given as an exact rational
    multiple of pi; exact-arithmetic code paths key off it to avoid the
    round-off of float cos/sin at the canonical angles.
    """

    theta: float
    c: float
    s: float
    pi_fraction: Optional[Fraction] = None

    def matrix(self) -> np.ndarray:
        return np.array([[self.c, self.s], [self.s, -self.c]])

    def cos2_exact(self) -> Optional[Fraction]:
        """Exact cos^2(theta) when the angle is a nice pi-fraction, else None."""
        if self.pi_fraction is None:
            return None
        return _RATIONAL_COS2.get((self.pi_fraction % 2).denominator)

    def is_degenerate(self, tol: float = 1e-12) -> bool:
        """True for angles where the coin is diagonal/antidiagonal (multiples of pi/2)."""
        if self.pi_fraction is not None:
            return (self.pi_fraction % Fraction(1, 2)) == 0
        return min(abs(self.c), abs(self.s)) < tol


def make_coin(theta: float) -> Coin:
    """Build the coin for an angle in radians."""
    theta = float(theta)
    if not math.isfinite(theta):
        raise ValueError(f"coin angle must be finite, got {theta!r}")
    return Coin(theta=theta, c=math.cos(theta), s=math.sin(theta))


def make_coin_pi(fraction: Union[Fraction, int, str]) -> Coin:
    """Build the coin for theta = fraction * pi, keeping the fraction exact.

    The float c, s stay the ordinary cos/sin of the float angle (any other
    rounding choice compounds into a visible norm drift over 10^4 steps);
    the fraction is what lets exact code paths bypass them entirely.
    """
    frac = Fraction(fraction)
    theta = float(frac) * math.pi
    return Coin(theta=theta, c=math.cos(theta), s=math.sin(theta),
                pi_fraction=frac)


@dataclass(frozen=True)
class AmplitudePair:
    """Complex amplitudes of the two inner components at one position."""

    a0: complex
    a1: complex

    @property
    def weight(self) -> float:
        return abs(self.a0) ** 2 + abs(self.a1) ** 2


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class HalfLineState:
    """Walk state on positions 0..t at time t; amps has shape (t+1, 2)."""

    t: int
    amps: np.ndarray

    def __post_init__(self) -> None:
        if self.t < 0:
            raise ValueError("time must be >= 0")
        if self.amps.shape != (self.t + 1, 2):
            raise ValueError(
                f"support window must cover 0..t: expected {(self.t + 1, 2)}, "
                f"got {self.amps.shape}"
            )
        _freeze(self.amps)

    @property
    def offset(self) -> int:
        return 0

    def positions(self) -> range:
        return range(0, self.t + 1)

    def pair(self, x: int) -> AmplitudePair:
        if 0 <= x <= self.t:
            return AmplitudePair(complex(self.amps[x, 0]), complex(self.amps[x, 1]))
        return AmplitudePair(0j, 0j)

    def amplitude(self, x: int, inner: int) -> complex:
        if 0 <= x <= self.t:
            return complex(self.amps[x, inner])
        return 0j

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))


@dataclass(frozen=True)
class LineState:
    """Walk state on positions -t-1..t at time t; amps has shape (2t+2, 2).

    Array index 0 holds the amplitude pair of position ``offset`` = -t-1.
    """

    t: int
    amps: np.ndarray

    def __post_init__(self) -> None:
        if self.t < 0:
            raise ValueError("time must be >= 0")
        if self.amps.shape != (2 * self.t + 2, 2):
            raise ValueError(
                f"support window must cover -t-1..t: expected "
                f"{(2 * self.t + 2, 2)}, got {self.amps.shape}"
            )
        _freeze(self.amps)

    @property
    def offset(self) -> int:
        return -self.t - 1

    def positions(self) -> range:
        return range(-self.t - 1, self.t + 1)

    def pair(self, x: int) -> AmplitudePair:
        i = x - self.offset
        if 0 <= i < self.amps.shape[0]:
            return AmplitudePair(complex(self.amps[i, 0]), complex(self.amps[i, 1]))
        return AmplitudePair(0j, 0j)

    def amplitude(self, x: int, inner: int) -> complex:
        i = x - self.offset
        if 0 <= i < self.amps.shape[0]:
            return complex(self.amps[i, inner])
        return 0j

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))


def initial_half_line(coin: Coin) -> HalfLineState:
    """State at t=0: position 0 carries e^{-i theta} (1, i)/sqrt(2)."""
    phase = complex(coin.c, -coin.s)
    amps = np.zeros((1, 2), dtype=np.complex128)
    amps[0, 0] = phase * SQRT1_2
    amps[0, 1] = 1j * phase * SQRT1_2
    return HalfLineState(t=0, amps=amps)


def initial_line(coin: Coin) -> LineState:
    """Delocalized state at t=0: positions -1 and 0 carry (c, s)/sqrt(2), all real."""
    amps = np.zeros((2, 2), dtype=np.complex128)
    amps[:, 0] = coin.c * SQRT1_2
    amps[:, 1] = coin.s * SQRT1_2
    return LineState(t=0, amps=amps)


@dataclass(frozen=True)
class DistributionRow:
    """Probabilities at one position; p0/p1 are None for total-only routes."""

    x: int
    p0: Optional[float]
    p1: Optional[float]
    p: float


@dataclass(frozen=True)
class Distribution:
    """Per-position probability table of a walk at one time."""

    kind: WalkKind
    t: int
    rows: tuple[DistributionRow, ...]

    def total(self) -> float:
        return sum(r.p for r in self.rows)

    def prob(self, x: int) -> float:
        for r in self.rows:
            if r.x == x:
                return r.p
        return 0.0

    def as_dict(self) -> dict[int, float]:
        return {r.x: r.p for r in self.rows}

    def inner_dict(self, inner: int) -> dict[int, float]:
        out = {}
        for r in self.rows:
            v = r.p0 if inner == 0 else r.p1
            if v is not None:
                out[r.x] = v
        return out

    def argmax(self) -> int:
        return max(self.rows, key=lambda r: r.p).x
