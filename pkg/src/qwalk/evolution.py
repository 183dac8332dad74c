"""Unitary time evolution for both walks and probability extraction.

One step applies the coin at every site and then the shift. On the line the
shift is homogeneous (inner 0 moves left, inner 1 moves right); on the half
line a left-mover at the boundary is turned into a right-mover in place.
Steps allocate a fresh window, so states are shareable values and identical
inputs give bit-identical outputs.
"""
from __future__ import annotations

from typing import Union

import numpy as np

from .core import (
    Coin,
    Distribution,
    DistributionRow,
    HalfLineState,
    LineState,
    WalkKind,
    initial_half_line,
    initial_line,
)

State = Union[HalfLineState, LineState]

# probabilities below this are emitted as exact zero to keep subnormal noise
# out of output files
_PROB_FLOOR = 1e-300


def step_half_line(state: HalfLineState, coin: Coin) -> HalfLineState:
    """Advance one step: coin everywhere, then the boundary-respecting shift.

    Post-coin inner 0 at x >= 1 moves to x-1; at x = 0 it becomes inner 1 in
    place; inner 1 moves from x to x+1.
    """
    a0 = coin.c * state.amps[:, 0] + coin.s * state.amps[:, 1]
    a1 = coin.s * state.amps[:, 0] - coin.c * state.amps[:, 1]
    n = state.t + 2
    amps = np.zeros((n, 2), dtype=np.complex128)
    amps[: n - 2, 0] = a0[1:]
    amps[0, 1] = a0[0]
    amps[1:, 1] = a1
    return HalfLineState(t=state.t + 1, amps=amps)


def step_line(state: LineState, coin: Coin) -> LineState:
    """Advance one step: coin everywhere, then the homogeneous shift."""
    a0 = coin.c * state.amps[:, 0] + coin.s * state.amps[:, 1]
    a1 = coin.s * state.amps[:, 0] - coin.c * state.amps[:, 1]
    old = state.amps.shape[0]
    amps = np.zeros((old + 2, 2), dtype=np.complex128)
    # new window starts one position further left: new_index = old_index for
    # the left-movers, old_index + 2 for the right-movers
    amps[:old, 0] = a0
    amps[2 : old + 2, 1] = a1
    return LineState(t=state.t + 1, amps=amps)


def evolve(kind: WalkKind, coin: Coin, steps: int) -> State:
    """Evolve the appropriate initial state for the given number of steps."""
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    kind = WalkKind(kind)
    if kind is WalkKind.HALF_LINE:
        state: State = initial_half_line(coin)
        for _ in range(steps):
            state = step_half_line(state, coin)
    else:
        state = initial_line(coin)
        for _ in range(steps):
            state = step_line(state, coin)
    return state


def iter_states(kind: WalkKind, coin: Coin, steps: int):
    """Yield (t, state) for t = 0..steps without re-evolving from scratch."""
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    kind = WalkKind(kind)
    if kind is WalkKind.HALF_LINE:
        state: State = initial_half_line(coin)
        yield 0, state
        for t in range(1, steps + 1):
            state = step_half_line(state, coin)
            yield t, state
    else:
        state = initial_line(coin)
        yield 0, state
        for t in range(1, steps + 1):
            state = step_line(state, coin)
            yield t, state


def probability_arrays(state: State) -> tuple[np.ndarray, np.ndarray]:
    """(|a0|^2, |a1|^2) over the support window, index 0 at state.offset."""
    p = np.abs(state.amps) ** 2
    return p[:, 0], p[:, 1]


def distribution(state: State) -> Distribution:
    """Probability table over the state's support window."""
    p0, p1 = probability_arrays(state)
    p0 = np.where(p0 < _PROB_FLOOR, 0.0, p0)
    p1 = np.where(p1 < _PROB_FLOOR, 0.0, p1)
    off = state.offset
    rows = tuple(
        DistributionRow(x=off + i, p0=float(p0[i]), p1=float(p1[i]),
                        p=float(p0[i] + p1[i]))
        for i in range(state.amps.shape[0])
    )
    kind = WalkKind.HALF_LINE if isinstance(state, HalfLineState) else WalkKind.LINE
    return Distribution(kind=kind, t=state.t, rows=rows)
