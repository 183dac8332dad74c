import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from pytest import approx

from qwalk import (
    ApproxKind,
    DensityKind,
    LimitDensity,
    approx_prob,
    cdf_at,
    density_at,
    ks_distance,
    make_coin,
    total_mass,
)
from qwalk.asymptotics import cdf_grid

from conftest import THETA_GRID_20

ADMISSIBLE = st.sampled_from(THETA_GRID_20)


class TestDensity:
    def test_half_total_at_zero_pi4(self, pi4_coin):
        d = LimitDensity(pi4_coin, DensityKind.HALF_TOTAL)
        assert density_at(d, 0.0) == approx(2.0 / math.pi, abs=1e-12)

    def test_line_total_at_zero_pi4(self, pi4_coin):
        d = LimitDensity(pi4_coin, DensityKind.LINE_TOTAL)
        assert density_at(d, 0.0) == approx(1.0 / math.pi, abs=1e-12)

    def test_half_kinds_zero_below_origin(self):
        coin = make_coin(1.1)
        for kind in (DensityKind.HALF_INNER0, DensityKind.HALF_INNER1,
                     DensityKind.HALF_TOTAL):
            assert density_at(LimitDensity(coin, kind), -0.1) == 0.0

    def test_endpoint_returns_zero_not_infinity(self):
        coin = make_coin(0.9)
        c = abs(coin.c)
        for kind in DensityKind:
            d = LimitDensity(coin, kind)
            assert density_at(d, c) == 0.0
            assert density_at(d, -c) == 0.0
            assert density_at(d, c + 0.2) == 0.0

    def test_inner_split_pointwise(self):
        coin = make_coin(0.8)
        d0 = LimitDensity(coin, DensityKind.HALF_INNER0)
        d1 = LimitDensity(coin, DensityKind.HALF_INNER1)
        dt = LimitDensity(coin, DensityKind.HALF_TOTAL)
        for y in np.linspace(0.0, abs(coin.c) * 0.999, 500):
            total = density_at(dt, float(y))
            split = density_at(d0, float(y)) + density_at(d1, float(y))
            assert split == approx(total, rel=1e-14)

    def test_mirror_relation_to_line_density(self):
        """Inner-1 density equals the line density reflected through 0."""
        for theta in (math.pi / 4, math.pi / 3, 1.0, 2.0):
            coin = make_coin(theta)
            d1 = LimitDensity(coin, DensityKind.HALF_INNER1)
            dl = LimitDensity(coin, DensityKind.LINE_TOTAL)
            ys = np.linspace(0.0, abs(coin.c) * 0.9999, 10_000)
            worst = max(
                abs(density_at(d1, float(y)) - density_at(dl, float(-y)))
                for y in ys
            )
            assert worst <= 1e-14

    def test_pi4_corollary_closed_form(self, pi4_coin):
        """At pi/4 the total density reduces to 2/(pi (1-y^2) sqrt(1-2y^2))."""
        d = LimitDensity(pi4_coin, DensityKind.HALF_TOTAL)
        ys = np.linspace(0.0, 1 / math.sqrt(2) - 1e-9, 10_000)
        for y in ys:
            ref = 2.0 / (math.pi * (1 - y * y) * math.sqrt(1 - 2 * y * y))
            assert abs(density_at(d, float(y)) - ref) <= 1e-14 * max(1.0, ref)


class TestCdf:
    def test_saturates_at_support_edge(self):
        for theta in (0.6, math.pi / 4, 2.4):
            coin = make_coin(theta)
            for kind in (DensityKind.HALF_TOTAL, DensityKind.LINE_TOTAL):
                d = LimitDensity(coin, kind)
                assert cdf_at(d, abs(coin.c)) == approx(1.0, abs=1e-8)
                assert cdf_at(d, 5.0) == 1.0
                assert cdf_at(d, d.support[0] - 0.01) == 0.0

    def test_inner_masses_partition(self):
        for theta in THETA_GRID_20:
            coin = make_coin(theta)
            m0 = total_mass(LimitDensity(coin, DensityKind.HALF_INNER0))
            m1 = total_mass(LimitDensity(coin, DensityKind.HALF_INNER1))
            assert m0 + m1 == approx(1.0, abs=1e-8)

    def test_line_total_mass(self):
        for theta in THETA_GRID_20:
            coin = make_coin(theta)
            assert total_mass(LimitDensity(coin, DensityKind.LINE_TOTAL)) \
                == approx(1.0, abs=1e-8)

    def test_left_mass_vs_riemann_oracle(self, pi4_coin):
        """cdf at 0 for the line law, against a 10^7-point Riemann sum.

        The flat sum under-collects ~sqrt(h) of mass at the singular left
        endpoint, so the whole-interval comparison carries that resolution;
        the interior slice away from the singularity is checked tightly.
        """
        d = LimitDensity(pi4_coin, DensityKind.LINE_TOTAL)
        c = math.sqrt(0.5)
        s = c
        n = 10_000_000
        h = c / n
        mids = np.linspace(-c + h / 2, 0.0 - h / 2, n)
        f = s / (math.pi * (1.0 + mids) * np.sqrt(0.5 - mids * mids))
        riemann = float(np.sum(f) * h)
        got = cdf_at(d, 0.0)
        assert got == approx(riemann, abs=5e-4)
        assert 0.0 < got < 1.0

        inner_lo = -c / 2
        m = 1_000_000
        hh = (0.0 - inner_lo) / m
        mids = np.linspace(inner_lo + hh / 2, 0.0 - hh / 2, m)
        f = s / (math.pi * (1.0 + mids) * np.sqrt(0.5 - mids * mids))
        slice_riemann = float(np.sum(f) * hh)
        slice_quad = cdf_at(d, 0.0) - cdf_at(d, inner_lo)
        assert slice_quad == approx(slice_riemann, abs=1e-8)

    def test_cdf_monotone_on_grid(self):
        coin = make_coin(1.234)
        for kind in DensityKind:
            d = LimitDensity(coin, kind)
            xs = np.linspace(-1.0, 1.0, 10_000)
            vals = cdf_grid(d, xs)
            assert np.all(np.diff(vals) >= -1e-12)

    @settings(max_examples=25, deadline=None)
    @given(ADMISSIBLE, st.lists(st.floats(-1.2, 1.2), min_size=2, max_size=40))
    def test_cdf_monotone_property(self, theta, xs):
        coin = make_coin(theta)
        d = LimitDensity(coin, DensityKind.HALF_TOTAL)
        xs = sorted(xs)
        vals = [cdf_at(d, x) for x in xs]
        assert all(b - a >= -1e-10 for a, b in zip(vals, vals[1:]))

    def test_grid_requires_sorted(self, pi4_coin):
        d = LimitDensity(pi4_coin, DensityKind.HALF_TOTAL)
        with pytest.raises(ValueError):
            cdf_grid(d, np.array([0.3, 0.1]))

    def test_cdf_consistent_with_pointwise(self, pi3_coin):
        d = LimitDensity(pi3_coin, DensityKind.HALF_INNER1)
        xs = np.linspace(-0.1, 0.6, 53)
        grid = cdf_grid(d, xs)
        for x, v in zip(xs[::7], grid[::7]):
            assert cdf_at(d, float(x)) == approx(float(v), abs=1e-9)


class TestApprox:
    def test_total_at_origin_t500_pi4(self, pi4_coin):
        # 2|s| t^2 / (pi t^2 sqrt(c^2 t^2)) = 2/(pi t) when s = c
        got = approx_prob(pi4_coin, 500, 0, ApproxKind.TOTAL)
        assert got == approx(2.0 / (500.0 * math.pi), rel=1e-12)

    def test_outside_support_is_zero(self):
        coin = make_coin(1.0)
        t = 100
        cutoff = abs(coin.c) * t
        for kind in ApproxKind:
            assert approx_prob(coin, t, int(cutoff) + 1, kind) == 0.0
            assert approx_prob(coin, t, -1, kind) == 0.0

    def test_partial_fraction_partition(self):
        """1/(t+x) + 1/(t-x) = 2t/(t^2-x^2) keeps the split exact."""
        coin = make_coin(0.7)
        t = 300
        for x in range(0, int(abs(coin.c) * t)):
            i0 = approx_prob(coin, t, x, ApproxKind.INNER0)
            i1 = approx_prob(coin, t, x, ApproxKind.INNER1)
            tot = approx_prob(coin, t, x, ApproxKind.TOTAL)
            assert i0 + i1 == approx(tot, rel=1e-15)

    def test_bad_t_rejected(self, pi4_coin):
        with pytest.raises(ValueError):
            approx_prob(pi4_coin, 0, 0, ApproxKind.TOTAL)


class TestKS:
    def test_bounds(self, pi4_coin):
        for t in (3, 17, 64):
            report = ks_distance(pi4_coin, t)
            assert 0.0 <= report.ks <= 1.0
            assert report.t == t
            assert report.theta == pi4_coin.theta

    def test_t1000_under_frozen_threshold(self, pi4_coin):
        assert ks_distance(pi4_coin, 1000).ks <= 0.05

    def test_line_kind_uses_line_walk(self, pi4_coin):
        report = ks_distance(pi4_coin, 200, DensityKind.LINE_TOTAL)
        assert 0.0 <= report.ks <= 0.2

    def test_inner_kinds_sub_law_scale(self, pi4_coin):
        r0 = ks_distance(pi4_coin, 400, DensityKind.HALF_INNER0)
        r1 = ks_distance(pi4_coin, 400, DensityKind.HALF_INNER1)
        assert r0.ks <= 0.2 and r1.ks <= 0.2

    def test_bad_t(self, pi4_coin):
        with pytest.raises(ValueError):
            ks_distance(pi4_coin, 0)
