import json
import math

import numpy as np
import pytest

from eavhill import (
    EavConfig,
    Exact,
    MonteCarlo,
    NoAdmissibleCandidate,
    NoAdmissibleK,
    Pareto,
    build_deviation_table,
    estimate,
    explicit_grid,
    generator,
    geometric_grid,
    hill_sweep,
    order_sample,
    select_k_eav,
    stopping_indicator,
)


def constant_hill_sample(c, n):
    """Log order statistics t_1 > t_2 > ... with gamma_hat(k) = c for every k.

    The recursion t_{k+1} = mean(t_1..t_k) - c telescopes to
    t_{k+1} = t_k - c/k, i.e. harmonic decrements.
    """
    t = np.empty(n)
    t[0] = c
    for k in range(1, n):
        t[k] = t[k - 1] - c / k
    return np.exp(t)


def two_block_sample(n_top, c_top, n_rest, c_rest):
    """Constant-Hill block spliced on top of a much steeper lower block."""
    top = constant_hill_sample(c_top, n_top)
    rest = constant_hill_sample(c_rest, n_rest)
    rest *= top[-1] / (rest[0] * math.e)  # log-gap of 1 keeps the order strict
    return np.concatenate([top, rest])


class TestStoppingIndicator:
    def test_self_comparison_never_fires(self):
        # one grid point: the only comparison is j = k with zero difference
        grid = explicit_grid([200])
        table = build_deviation_table(grid, 0.5, Exact())
        sample = order_sample(Pareto(1.0).sample(1000, generator(3)))
        sweep = hill_sweep(sample, grid)
        check = stopping_indicator(sweep, table, 200)
        assert not check.fired
        assert check.violating_j is None
        assert check.margin < 0

    def test_constant_hill_never_fires(self):
        data = constant_hill_sample(0.7, 3000)
        sample = order_sample(data)
        grid = geometric_grid(3000, 1.2)
        table = build_deviation_table(grid, 0.9, Exact())
        sweep = hill_sweep(sample, grid)
        for k in grid.points:
            if table.value_at(k) < 0.5 and k <= sample.n - 1:
                assert not stopping_indicator(sweep, table, k).fired

    def test_two_block_jump_fires_with_witness(self):
        data = two_block_sample(400, 0.1, 4600, 3.0)
        sample = order_sample(data)
        grid = geometric_grid(5000, 1.2)
        table = build_deviation_table(grid, 0.9, Exact())
        sweep = hill_sweep(sample, grid)
        fired_at = None
        for k in grid.points:
            if table.value_at(k) >= 0.5 or k > sample.n - 1:
                continue
            check = stopping_indicator(sweep, table, k)
            if check.fired:
                fired_at = k
                assert check.violating_j is not None
                assert check.violating_j < k
                assert check.margin > 0
                # the inequality really is violated at the witness
                g_k = sweep.gamma_at(k)
                g_j = sweep.gamma_at(check.violating_j)
                v_k = table.value_at(k)
                v_j = table.value_at(check.violating_j)
                budget = g_k / (1 - 2 * v_k) * (v_j + 3 * v_k)
                assert abs(g_k - g_j) > budget
                break
        assert fired_at is not None and fired_at > 400

    def test_rejects_k_below_k0(self):
        grid = explicit_grid([1, 1000])
        table = build_deviation_table(grid, 0.9, Exact())
        sample = order_sample(Pareto(1.0).sample(2000, generator(4)))
        sweep = hill_sweep(sample, grid)
        assert table.value_at(1) >= 0.5
        with pytest.raises(ValueError, match="1/2"):
            stopping_indicator(sweep, table, 1)


class TestSelectKEav:
    def test_constant_hill_hits_grid_max(self):
        data = constant_hill_sample(0.5, 4000)
        sample = order_sample(data)
        grid = geometric_grid(4000, 1.2)
        config = EavConfig(grid=grid, delta=0.9, mode=Exact())
        result = select_k_eav(sample, config)
        admissible = [k for k in grid.points if k >= result.k0 and k <= sample.n - 1]
        assert result.k_hat == max(admissible)
        assert result.hit_grid_max
        assert result.gamma_hat == pytest.approx(0.5, abs=1e-9)

    def test_two_block_stops_before_max(self):
        data = two_block_sample(400, 0.1, 4600, 3.0)
        sample = order_sample(data)
        grid = geometric_grid(5000, 1.2)
        config = EavConfig(grid=grid, delta=0.9, mode=Exact())
        result = select_k_eav(sample, config)
        assert not result.hit_grid_max
        assert result.trace[-1].s == 1
        assert all(t.s == 0 for t in result.trace[:-1])
        assert result.k_hat == result.trace[-2].k

    def test_structural_invariants(self):
        sample = order_sample(Pareto(2.0).sample(5000, generator(8)))
        grid = geometric_grid(5000, 1.1)
        config = EavConfig(grid=grid, delta=0.9, mode=MonteCarlo(draws=2000, seed=1))
        result = select_k_eav(sample, config)
        assert result.k_hat in grid.points
        assert result.k_hat >= result.k0
        visited = [t.k for t in result.trace]
        assert visited == sorted(visited)
        assert all(t.s == 0 for t in result.trace if t.k <= result.k_hat)

    def test_depends_only_on_order_statistics(self):
        values = Pareto(2.0).sample(3000, generator(21))
        shuffled = values.copy()
        generator(22).shuffle(shuffled)
        grid = geometric_grid(3000, 1.1)
        config = EavConfig(grid=grid, mode=Exact())
        a = select_k_eav(order_sample(values), config)
        b = select_k_eav(order_sample(shuffled), config)
        assert (a.k_hat, a.gamma_hat) == (b.k_hat, b.gamma_hat)

    def test_scale_invariance(self):
        values = Pareto(2.0).sample(4000, generator(23))
        grid = geometric_grid(4000, 1.1)
        config = EavConfig(grid=grid, delta=0.9, mode=MonteCarlo(draws=2000, seed=5))
        base = select_k_eav(order_sample(values), config)
        scaled = select_k_eav(order_sample(3.7e4 * values), config)
        assert scaled.k_hat == base.k_hat
        assert scaled.gamma_hat == pytest.approx(base.gamma_hat, rel=1e-10)

    def test_deterministic_given_seed(self):
        values = Pareto(1.0).sample(3000, generator(30))
        grid = geometric_grid(3000, 1.1)
        config = EavConfig(grid=grid, mode=MonteCarlo(draws=2000, seed=9))
        a = select_k_eav(order_sample(values), config)
        b = select_k_eav(order_sample(values), config)
        assert a == b

    def test_exact_mode_needs_no_seed(self):
        values = Pareto(1.0).sample(3000, generator(31))
        grid = geometric_grid(3000, 1.1)
        config = EavConfig(grid=grid, mode=Exact())
        assert select_k_eav(order_sample(values), config) == select_k_eav(
            order_sample(values), config
        )

    def test_no_admissible_candidate_for_tiny_sample(self):
        sample = order_sample([3.0, 2.0, 1.0])
        config = EavConfig(grid=explicit_grid([1, 2]), delta=0.9, mode=Exact())
        with pytest.raises((NoAdmissibleCandidate, NoAdmissibleK)):
            select_k_eav(sample, config)

    def test_restricted_comparators_never_stop_earlier(self):
        values = Pareto(2.0).sample(4000, generator(33))
        grid = geometric_grid(4000, 1.1)
        sample = order_sample(values)
        base = select_k_eav(sample, EavConfig(grid=grid, mode=Exact()))
        restricted = select_k_eav(
            sample, EavConfig(grid=grid, mode=Exact(), compare_from_k0=True)
        )
        assert restricted.k_hat >= base.k_hat

    def test_prebuilt_table_reuse(self):
        values = Pareto(2.0).sample(3000, generator(34))
        grid = geometric_grid(3000, 1.1)
        config = EavConfig(grid=grid, mode=Exact())
        table = build_deviation_table(grid, config.delta, config.mode)
        assert select_k_eav(order_sample(values), config, table) == select_k_eav(
            order_sample(values), config
        )

    def test_prebuilt_table_validated(self):
        values = Pareto(2.0).sample(3000, generator(35))
        grid = geometric_grid(3000, 1.1)
        wrong = build_deviation_table(grid, 0.5, Exact())
        with pytest.raises(ValueError, match="delta_grid"):
            select_k_eav(order_sample(values), EavConfig(grid=grid, mode=Exact()), wrong)


class TestEstimate:
    def test_pareto_recovers_tail_index(self):
        # aggregate coverage over independent seeds
        spec = Pareto(2.0)
        grid = geometric_grid(10000, 1.1)
        config = EavConfig(grid=grid, delta=0.9, mode=MonteCarlo(draws=2000, seed=3))
        table = build_deviation_table(grid, config.delta, config.mode)
        hits = 0
        reps = 40
        for i in range(reps):
            sample = order_sample(spec.sample(10000, generator(1000 + i)))
            est = estimate(sample, config, table)
            hits += 0.4 <= est.gamma_hat <= 0.6
        assert hits >= 0.95 * reps

    def test_diagnostics_exposed(self):
        sample = order_sample(Pareto(2.0).sample(3000, generator(41)))
        grid = geometric_grid(3000, 1.1)
        est = estimate(sample, EavConfig(grid=grid, mode=Exact()))
        assert est.k_hat == est.result.k_hat
        assert est.gamma_hat == est.result.gamma_hat
        assert est.k0 == est.result.k0
        assert est.table.grid_points == grid.points
        assert len(est.sweep.ks) > 0
        assert len(est.result.trace) >= 1

    def test_result_serializes_to_json(self):
        sample = order_sample(Pareto(2.0).sample(2000, generator(42)))
        grid = geometric_grid(2000, 1.2)
        result = select_k_eav(sample, EavConfig(grid=grid, mode=Exact()))
        doc = json.loads(json.dumps(result.to_dict()))
        assert set(doc) >= {"k_hat", "gamma_hat", "k0", "delta", "grid", "trace"}
        assert doc["k_hat"] == result.k_hat
        assert doc["grid"]["spec"] == "geometric:1.2"
        assert all(set(t) == {"k", "s", "margin", "violating_j"} for t in doc["trace"])

    def test_rejects_bad_delta(self):
        grid = explicit_grid([10])
        with pytest.raises(ValueError):
            EavConfig(grid=grid, delta=1.2)
