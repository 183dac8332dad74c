import math

import pytest

from qwalk import make_coin, make_coin_pi


def _spread_grid(n: int) -> tuple[float, ...]:
    """n angles spread over (0, 2*pi), nudged away from multiples of pi/2."""
    out = []
    step = (2 * math.pi - 0.24) / (n - 1)
    for k in range(n):
        th = 0.12 + k * step
        frac = th % (math.pi / 2)
        if min(frac, math.pi / 2 - frac) < 0.1:
            th += 0.13
        out.append(th)
    return tuple(out)


THETA_GRID_20 = _spread_grid(20)

ROUTE_THETAS = (
    math.pi / 6,
    math.pi / 4,
    math.pi / 3,
    1.0,
    0.3,
    2.0,
)


@pytest.fixture(scope="session")
def canonical_coins():
    from fractions import Fraction

    return (
        make_coin_pi(Fraction(1, 6)),
        make_coin_pi(Fraction(1, 4)),
        make_coin_pi(Fraction(1, 3)),
        make_coin(1.0),
    )


@pytest.fixture(scope="session")
def pi4_coin():
    from fractions import Fraction

    return make_coin_pi(Fraction(1, 4))


@pytest.fixture(scope="session")
def pi3_coin():
    from fractions import Fraction

    return make_coin_pi(Fraction(1, 3))
