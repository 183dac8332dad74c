import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from pytest import approx

from qwalk import (
    BinomialTable,
    ExactParams,
    FormulaDomainError,
    Precision,
    WalkKind,
    binomial_table,
    distribution,
    evolve,
    half_line_exact_by_inner,
    half_line_exact_total,
    half_line_exact_values,
    iter_states,
    line_exact,
    line_exact_values,
    make_coin,
    make_coin_pi,
    q2_oracle_series,
)
from qwalk import dd

from conftest import ROUTE_THETAS, THETA_GRID_20


class TestBinomialTable:
    def test_small_values(self):
        t = BinomialTable(6)
        assert t.binom(6, 3) == 20
        assert t.binom(5, 0) == 1
        assert t.binom(4, 7) == 0
        assert t.binom(3, -1) == 0

    def test_grows_on_demand(self):
        t = BinomialTable()
        assert t.binom(40, 20) == 137846528820

    @given(st.integers(min_value=1, max_value=120),
           st.integers(min_value=0, max_value=120))
    def test_pascal_identity(self, n, k):
        t = binomial_table(n)
        assert t.binom(n, k) == t.binom(n - 1, k - 1) + t.binom(n - 1, k)


class TestLineExact:
    def test_t1_edge_only(self, pi4_coin):
        dist = line_exact(pi4_coin, 1)
        assert {r.x: r.p for r in dist.rows} == approx({-2: 0.5, -1: 0.5})
        assert all(r.p0 is None and r.p1 is None for r in dist.rows)

    def test_t2_pi4(self, pi4_coin):
        dist = line_exact(pi4_coin, 2)
        expected = {-3: 0.25, -2: 0.25, -1: 0.25, 0: 0.25}
        assert dist.as_dict() == approx(expected, abs=1e-15)

    def test_t2_general_theta(self):
        coin = make_coin(0.7)
        c2 = coin.c**2
        s2 = coin.s**2
        dist = line_exact(coin, 2)
        assert dist.prob(-3) == approx(c2 / 2, abs=1e-15)
        assert dist.prob(-2) == approx(c2 / 2, abs=1e-15)
        assert dist.prob(-1) == approx(s2 / 2, abs=1e-15)
        assert dist.prob(0) == approx(s2 / 2, abs=1e-15)

    def test_edge_formula_any_theta(self):
        for theta in ROUTE_THETAS:
            coin = make_coin(theta)
            for t in (1, 5, 20):
                dist = line_exact(coin, t)
                edge = coin.c ** (2 * (t - 1)) / 2
                assert dist.prob(-t - 1) == approx(edge, abs=1e-15)
                assert dist.prob(-t) == approx(edge, abs=1e-15)

    def test_sums_to_one_on_grid(self):
        for theta in THETA_GRID_20:
            coin = make_coin(theta)
            for t in range(1, 61):
                dist = line_exact(coin, t)
                assert dist.total() == approx(1.0, abs=1e-9), (theta, t)
                assert all(r.p >= 0.0 for r in dist.rows)

    def test_even_time_branch_overlap_consistent(self):
        # at even t the m = t/2 pair is indexed by both branches; the
        # weights coincide there and the values must agree bit-for-bit
        coin = make_coin(0.8)
        for t in (2, 6, 14):
            vals = line_exact_values(coin, t)
            assert vals[0] == vals[-1]

    def test_t0_rejected(self, pi4_coin):
        with pytest.raises(ValueError):
            line_exact(pi4_coin, 0)

    @pytest.mark.parametrize("frac", [0, Fraction(1, 2), 1, Fraction(3, 2)])
    def test_excluded_angles_raise(self, frac):
        with pytest.raises(FormulaDomainError):
            line_exact(make_coin_pi(frac), 5)


class TestHalfLineExact:
    def test_time1_odd_branch(self, pi4_coin):
        by1 = half_line_exact_by_inner(pi4_coin, 1, 1)
        assert by1.inner_dict(1) == approx({0: 0.5, 1: 0.5})
        by0 = half_line_exact_by_inner(pi4_coin, 1, 0)
        assert by0.rows == ()

    def test_time2_even_branch(self, pi4_coin):
        by1 = half_line_exact_by_inner(pi4_coin, 2, 1)
        got = by1.inner_dict(1)
        assert got[2] == approx(0.25, abs=1e-15)
        assert got[1] == approx(0.25, abs=1e-15)

    def test_time2_origin_split(self, pi4_coin):
        by0 = half_line_exact_by_inner(pi4_coin, 2, 0)
        by1 = half_line_exact_by_inner(pi4_coin, 2, 1)
        assert by0.inner_dict(0)[0] == approx(by1.inner_dict(1)[0], abs=1e-16)
        sim = distribution(evolve(WalkKind.HALF_LINE, pi4_coin, 2))
        assert by0.inner_dict(0)[0] == approx(sim.inner_dict(0)[0], abs=1e-12)

    def test_time1_total(self, pi4_coin):
        total = half_line_exact_total(pi4_coin, 1)
        assert total.as_dict() == approx({0: 0.5, 1: 0.5})

    def test_frontier_values(self):
        for theta in ROUTE_THETAS:
            coin = make_coin(theta)
            for half_t in (0, 1, 3, 10):
                t = 2 * half_t + 1
                by1 = half_line_exact_by_inner(coin, t, 1)
                expected = coin.c ** (4 * half_t) / 2
                assert by1.inner_dict(1)[t] == approx(expected, abs=1e-15)
                assert by1.inner_dict(1)[t - 1] == approx(expected, abs=1e-15)

    def test_even_time_pairing(self):
        """Interior positions 2k and 2k-1 carry one shared value."""
        coin = make_coin(0.9)
        total = half_line_exact_total(coin, 14).as_dict()
        for m in range(1, 7):
            assert total[2 * (7 - m)] == total[2 * (7 - m) - 1]

    def test_positions_partition(self):
        """Every position is produced by exactly one branch formula."""
        coin = make_coin(1.0)
        for t in (1, 2, 3, 4, 9, 10, 15, 16):
            vals = half_line_exact_values(coin, t)
            assert sorted(vals) == list(range(0, t + 1))

    def test_figures_grid_matches_evolution(self, pi4_coin, pi3_coin):
        for coin in (pi4_coin, pi3_coin):
            for t in (14, 15):
                sim = distribution(evolve(WalkKind.HALF_LINE, coin, t))
                tot = half_line_exact_total(coin, t).as_dict()
                i0 = half_line_exact_by_inner(coin, t, 0).inner_dict(0)
                i1 = half_line_exact_by_inner(coin, t, 1).inner_dict(1)
                for x in range(0, t + 1):
                    assert tot.get(x, 0.0) == approx(sim.prob(x), abs=1e-12)
                    assert i0.get(x, 0.0) == approx(
                        sim.inner_dict(0)[x], abs=1e-12)
                    assert i1.get(x, 0.0) == approx(
                        sim.inner_dict(1)[x], abs=1e-12)

    def test_inner_split_consistency(self):
        for theta in ROUTE_THETAS:
            coin = make_coin(theta)
            for t in (7, 12, 31):
                tot = half_line_exact_total(coin, t).as_dict()
                i0 = half_line_exact_by_inner(coin, t, 0).inner_dict(0)
                i1 = half_line_exact_by_inner(coin, t, 1).inner_dict(1)
                for x, p in tot.items():
                    assert p == approx(i0.get(x, 0.0) + i1.get(x, 0.0),
                                       abs=1e-12)

    def test_bad_inner_rejected(self, pi4_coin):
        with pytest.raises(ValueError):
            half_line_exact_by_inner(pi4_coin, 3, 2)


class TestRouteEquivalence:
    def test_double_path_to_t30(self):
        params_for = lambda coin, t: ExactParams.for_coin(coin, t, Precision.DOUBLE)
        for theta in ROUTE_THETAS:
            coin = make_coin(theta)
            line_states = dict(iter_states(WalkKind.LINE, coin, 30))
            half_states = dict(iter_states(WalkKind.HALF_LINE, coin, 30))
            for t in range(1, 31):
                cf = line_exact(coin, t, params_for(coin, t)).as_dict()
                sim = distribution(line_states[t]).as_dict()
                worst = max(
                    abs(cf.get(x, 0.0) - sim.get(x, 0.0))
                    for x in set(cf) | set(sim)
                )
                assert worst <= 1e-12, (theta, t, "line")
                cf = half_line_exact_total(coin, t, params_for(coin, t)).as_dict()
                sim = distribution(half_states[t]).as_dict()
                worst = max(
                    abs(cf.get(x, 0.0) - sim.get(x, 0.0))
                    for x in set(cf) | set(sim)
                )
                assert worst <= 1e-12, (theta, t, "half")

    def test_dd_path_to_t60(self):
        for theta in ROUTE_THETAS:
            coin = make_coin(theta)
            line_states = dict(iter_states(WalkKind.LINE, coin, 60))
            for t in range(1, 61):
                cf = line_exact(coin, t).as_dict()
                sim = distribution(line_states[t]).as_dict()
                worst = max(
                    abs(cf.get(x, 0.0) - sim.get(x, 0.0))
                    for x in set(cf) | set(sim)
                )
                assert worst <= 1e-9, (theta, t)


class TestExactRationalPath:
    def test_requires_pi4(self, pi3_coin, pi4_coin):
        with pytest.raises(ValueError):
            line_exact(pi3_coin, 4,
                       ExactParams.for_coin(pi3_coin, 4, Precision.EXACT_Q2))
        coin = make_coin(math.pi / 4)  # float angle, no exact fraction
        with pytest.raises(ValueError):
            line_exact(coin, 4, ExactParams.for_coin(coin, 4, Precision.EXACT_Q2))
        line_exact(pi4_coin, 4,
                   ExactParams.for_coin(pi4_coin, 4, Precision.EXACT_Q2))

    def test_line_matches_oracle_exactly(self, pi4_coin):
        oracle = {d.t: d for d in q2_oracle_series(WalkKind.LINE, 100)}
        for t in range(1, 101):
            params = ExactParams.for_coin(pi4_coin, t, Precision.EXACT_Q2)
            vals = line_exact_values(pi4_coin, t, params)
            ora = oracle[t].as_dict()
            for x, v in vals.items():
                assert v == ora.get(x, Fraction(0)), (t, x)

    def test_half_matches_oracle_exactly(self, pi4_coin):
        oracle = {d.t: d for d in q2_oracle_series(WalkKind.HALF_LINE, 100)}
        for t in range(1, 101):
            params = ExactParams.for_coin(pi4_coin, t, Precision.EXACT_Q2)
            vals = half_line_exact_values(pi4_coin, t, params)
            ex = oracle[t]
            e0 = ex.inner_dict(0)
            e1 = ex.inner_dict(1)
            et = ex.as_dict()
            for x, (v0, v1, vt) in vals.items():
                if v0 is not None:
                    assert v0 == e0.get(x, Fraction(0)), (t, x, 0)
                assert v1 == e1.get(x, Fraction(0)), (t, x, 1)
                assert vt == et.get(x, Fraction(0)), (t, x, "tot")

    def test_inner_split_exact(self, pi4_coin):
        for t in (6, 11, 24):
            params = ExactParams.for_coin(pi4_coin, t, Precision.EXACT_Q2)
            vals = half_line_exact_values(pi4_coin, t, params)
            for x, (v0, v1, vt) in vals.items():
                assert vt == (v0 or Fraction(0)) + v1


class TestDDPathAccuracy:
    def test_dd_vs_exact_rational_spot(self, pi4_coin):
        for t in (10, 35, 70):
            params_dd = ExactParams.for_coin(pi4_coin, t, Precision.DOUBLE_DOUBLE)
            params_ex = ExactParams.for_coin(pi4_coin, t, Precision.EXACT_Q2)
            got = line_exact_values(pi4_coin, t, params_dd)
            exact = line_exact_values(pi4_coin, t, params_ex)
            for x, v in got.items():
                assert abs(dd.to_fraction(v) - exact[x]) < Fraction(1, 10**28)

    def test_collapse_raises_instead_of_emitting_garbage(self, pi4_coin):
        # the combo form is positive semidefinite, so a collapsed table is
        # hugely positive rather than negative; the completeness guard
        # must catch it on every backend and both walks
        from qwalk import PrecisionError

        with pytest.raises(PrecisionError):
            line_exact(pi4_coin, 300)
        with pytest.raises(PrecisionError):
            half_line_exact_total(pi4_coin, 300)
        with pytest.raises(PrecisionError):
            line_exact(pi4_coin, 200,
                       ExactParams.for_coin(pi4_coin, 200, Precision.DOUBLE))
        # exact rationals are immune
        params = ExactParams.for_coin(pi4_coin, 150, Precision.EXACT_Q2)
        assert line_exact(pi4_coin, 150, params).total() == approx(1.0)


class TestParams:
    def test_mismatched_params_rejected(self, pi4_coin):
        with pytest.raises(ValueError):
            line_exact(pi4_coin, 5, ExactParams(theta=pi4_coin.theta, t=6))
        with pytest.raises(ValueError):
            line_exact(pi4_coin, 5, ExactParams(theta=1.0, t=5))
