import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import gammaln

from eavhill import (
    DeviationTable,
    Exact,
    MonteCarlo,
    abs_gamma_cdf,
    build_deviation_table,
    exact_quantile,
    explicit_grid,
    geometric_grid,
    mc_quantile,
    r_bound,
    v_tilde,
)


def gamma_kk_pdf(k, x):
    # density of Gamma(shape k, rate k)
    return np.exp(k * math.log(k) + (k - 1) * np.log(x) - k * x - gammaln(k))


def exp1_abs_quantile(delta):
    # independent oracle for k=1: P(|E - 1| <= y) from the Exp(1) law
    target = 1 - delta / 2

    def cdf(y):
        if y <= 1:
            return math.exp(-(1 - y)) - math.exp(-(1 + y))
        return 1 - math.exp(-(1 + y))

    lo, hi = 0.0, 50.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if cdf(mid) >= target:
            hi = mid
        else:
            lo = mid
    return hi


class TestAbsGammaCdf:
    def test_zero_width(self):
        assert abs_gamma_cdf(1, 0.0) == 0.0

    def test_exponential_case(self):
        # Z_1 ~ Exp(1): P(|Z_1 - 1| <= 1) = P(Z_1 <= 2) = 1 - e^-2
        assert abs_gamma_cdf(1, 1.0) == pytest.approx(1 - math.exp(-2), abs=1e-12)

    def test_against_quadrature(self):
        expected, err = quad(lambda x: gamma_kk_pdf(50, x), 0.7, 1.3, epsabs=1e-12)
        assert err < 1e-10
        got = abs_gamma_cdf(50, 0.3)
        assert 0 < got < 1
        assert got == pytest.approx(expected, abs=1e-8)

    @pytest.mark.parametrize("k", [1, 3, 20, 400])
    def test_monotone_in_y_and_limits(self, k):
        ys = np.linspace(0, 6, 80)
        vals = [abs_gamma_cdf(k, y) for y in ys]
        assert all(0 <= v <= 1 for v in vals)
        assert all(b >= a - 1e-14 for a, b in zip(vals, vals[1:]))
        assert abs_gamma_cdf(k, 80.0) == pytest.approx(1.0, abs=1e-12)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            abs_gamma_cdf(0, 0.5)
        with pytest.raises(ValueError):
            abs_gamma_cdf(3, -0.1)

    def test_gammainc_against_mpmath(self):
        mp = pytest.importorskip("mpmath")
        from scipy.special import gammainc

        for k, x in [(1, 0.5), (7, 9.0), (50, 35.0), (500, 520.0), (5000, 5000.0)]:
            expected = float(mp.gammainc(k, 0, x, regularized=True))
            assert gammainc(k, x) == pytest.approx(expected, rel=1e-12)


class TestExactQuantile:
    def test_exponential_oracle(self):
        expected = exp1_abs_quantile(0.9)  # about 0.6912
        assert exact_quantile(1, 0.9) == pytest.approx(expected, abs=1e-9)

    def test_vanishes_for_huge_k(self):
        assert exact_quantile(10**6, 0.5) < 0.01

    def test_below_closed_form_envelope(self):
        assert exact_quantile(100, 0.4) <= v_tilde(100, 0.2)
        assert v_tilde(100, 0.2) == pytest.approx(0.23762245355887518, rel=1e-12)

    def test_envelope_on_lattice(self):
        ks = [1, 2, 5, 10, 30, 80, 200, 600, 2000, 10000]
        deltas = np.linspace(0.02, 0.98, 20)
        for k in ks:
            for d in deltas:
                assert exact_quantile(k, d) <= v_tilde(k, d / 2) + 1e-12

    def test_cdf_value_at_quantile(self):
        for k, d in [(1, 0.9), (5, 0.5), (50, 0.1), (500, 0.9), (5000, 0.01)]:
            q = exact_quantile(k, d)
            c = abs_gamma_cdf(k, q)
            assert 1 - d / 2 <= c <= 1 - d / 2 + 1e-8

    def test_monotone_in_k_and_delta(self):
        for d in (0.1, 0.5, 0.9):
            qs = [exact_quantile(k, d) for k in (1, 2, 4, 8, 16, 64, 256)]
            assert all(b <= a + 1e-12 for a, b in zip(qs, qs[1:]))
        for k in (1, 10, 100):
            qs = [exact_quantile(k, d) for d in (0.05, 0.2, 0.5, 0.8, 0.95)]
            assert all(b <= a + 1e-12 for a, b in zip(qs, qs[1:]))


class TestMcQuantile:
    def test_converges_to_exact_for_exponential(self):
        got = mc_quantile(1, 0.9, draws=200000, seed=7)
        assert got == pytest.approx(exact_quantile(1, 0.9), abs=0.01)

    def test_deterministic(self):
        a = mc_quantile(5, 0.5, draws=2000, seed=1)
        b = mc_quantile(5, 0.5, draws=2000, seed=1)
        assert a == b

    def test_within_quantile_estimator_error(self):
        # asymptotic sd of the empirical quantile: sqrt(q(1-q)/N) / f(Q)
        k, delta, draws = 50, 0.9, 2000
        q = 1 - delta / 2
        truth = exact_quantile(k, delta)
        eps = 1e-6
        density = (abs_gamma_cdf(k, truth + eps) - abs_gamma_cdf(k, truth - eps)) / (2 * eps)
        se = math.sqrt(q * (1 - q) / draws) / density
        assert abs(mc_quantile(k, delta, draws, seed=3) - truth) <= 3 * se

    def test_large_shape_uses_gamma_sampler(self):
        got = mc_quantile(500, 0.5, draws=200000, seed=11)
        assert got == pytest.approx(exact_quantile(500, 0.5), abs=0.01)

    def test_rejects_tiny_draws(self):
        with pytest.raises(ValueError):
            mc_quantile(3, 0.5, draws=1, seed=0)


class TestEnvelopes:
    def test_v_tilde_unit_log(self):
        # log(2/delta) = 1 at delta = 2/e
        assert v_tilde(2, 2 / math.e) == pytest.approx(1.5, rel=1e-12)

    def test_v_tilde_vanishes(self):
        assert v_tilde(10**9, 0.5) < 1e-4

    def test_v_tilde_leading_term(self):
        k, d = 10**6, 0.3
        lead = math.sqrt(2 * math.log(2 / d))
        assert v_tilde(k, d) * math.sqrt(k) == pytest.approx(lead, rel=1e-3)

    def test_r_bound_unit_log(self):
        assert r_bound(3, 1 / math.e) == pytest.approx(2.0, rel=1e-12)
        assert r_bound(12, 1 / math.e) == pytest.approx(0.75, rel=1e-12)

    def test_r_bound_value(self):
        expected = math.sqrt(3 * math.log(5)) + 3 * math.log(5)
        assert r_bound(1, 0.2) == pytest.approx(expected, rel=1e-12)
        assert expected == pytest.approx(7.0256, abs=1e-4)

    @pytest.mark.parametrize("fn", [v_tilde, r_bound])
    def test_decreasing_in_k(self, fn):
        vals = [fn(k, 0.3) for k in (1, 2, 5, 20, 100, 1000)]
        assert all(b < a for a, b in zip(vals, vals[1:]))


class TestDeviationTable:
    def test_exact_geometric_table(self):
        grid = geometric_grid(10000, 1.1)
        assert grid.nominal_size == 96
        table = build_deviation_table(grid, 0.9, Exact())
        assert len(table.values) == len(grid.points)
        vals = table.as_array()
        assert (vals > 0).all()
        assert table.monotone
        assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))
        assert table.delta_grid == pytest.approx(0.9 / 96)

    def test_singleton_grid_keeps_delta(self):
        grid = explicit_grid([100])
        table = build_deviation_table(grid, 0.5, Exact())
        assert table.value_at(100) == pytest.approx(exact_quantile(100, 0.5), rel=1e-12)

    def test_mc_table_deterministic(self):
        grid = geometric_grid(2000, 1.5)
        mode = MonteCarlo(draws=500, seed=42)
        t1 = build_deviation_table(grid, 0.9, mode)
        t2 = build_deviation_table(grid, 0.9, mode)
        assert t1.values == t2.values

    def test_mc_table_tracks_exact(self):
        grid = explicit_grid([10, 100, 1000])
        mc = build_deviation_table(grid, 0.5, MonteCarlo(draws=100000, seed=5))
        ex = build_deviation_table(grid, 0.5, Exact())
        for k in grid.points:
            assert mc.value_at(k) == pytest.approx(ex.value_at(k), rel=0.05)

    def test_rejects_bad_delta(self):
        grid = explicit_grid([10])
        for bad in (0.0, 1.0, -0.3, 2.0):
            with pytest.raises(ValueError):
                build_deviation_table(grid, bad, Exact())

    def test_csv_round_trip(self, tmp_path):
        grid = explicit_grid([3, 17, 60])
        table = build_deviation_table(grid, 0.7, Exact())
        path = tmp_path / "table.csv"
        table.to_csv(path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "k,V"
        for line, k in zip(lines[1:], grid.points):
            name, value = line.split(",")
            assert int(name) == k
            assert float(value) == table.value_at(k)

    def test_monte_carlo_draw_floor(self):
        with pytest.raises(ValueError):
            MonteCarlo(draws=1, seed=0)
