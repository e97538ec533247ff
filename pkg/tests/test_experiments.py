import math

import numpy as np
import pytest

from eavhill import (
    Exact,
    ExperimentConfig,
    MonteCarlo,
    Pareto,
    SymmetricStable,
    explicit_grid,
    geometric_grid,
    k_range_summary,
    rmse_curve,
    run_mse_experiment,
)
from eavhill.experiments import MSE_CSV_HEADER, RMSE_CSV_HEADER, mse_csv_row

SMALL = dict(n=2000, replications=12, mode=MonteCarlo(draws=500, seed=2), root_seed=7)


def small_cfg(**overrides):
    params = {**SMALL, "spec": Pareto(2.0), **overrides}
    return ExperimentConfig(**params)


class TestRunMseExperiment:
    def test_forced_constant_estimator_gives_zero(self):
        cfg = small_cfg()
        summary = run_mse_experiment(cfg, estimator=lambda s: (10, cfg.spec.gamma))
        assert summary.mse_hat == 0.0
        assert summary.stderr == 0.0
        assert summary.k_min == summary.k_max == summary.k_mean == 10

    def test_summary_reproducible_from_replications(self):
        summary = run_mse_experiment(small_cfg())
        gamma = 0.5
        d2 = np.array([(g / gamma - 1.0) ** 2 for _, _, g in summary.per_replication])
        assert summary.mse_hat == pytest.approx(d2.mean(), rel=1e-15)
        stderr = math.sqrt(((d2 - d2.mean()) ** 2).sum()) / len(d2)
        assert summary.stderr == pytest.approx(stderr, rel=1e-15)
        ks = [k for _, k, _ in summary.per_replication]
        assert summary.k_min == min(ks)
        assert summary.k_max == max(ks)
        assert summary.k_mean == pytest.approx(np.mean(ks))

    def test_bitwise_deterministic(self):
        a = run_mse_experiment(small_cfg())
        b = run_mse_experiment(small_cfg())
        assert a == b

    def test_independent_of_job_count(self):
        serial = run_mse_experiment(small_cfg())
        parallel = run_mse_experiment(small_cfg(jobs=2))
        assert serial == parallel

    def test_symmetric_family_uses_magnitudes(self):
        # a symmetric sample has about half its values negative, yet every
        # replication must still see close to n usable observations
        cfg = small_cfg(spec=SymmetricStable(1.5), n=4000, replications=4)
        summary = run_mse_experiment(cfg)
        assert summary.k_max > 2200  # impossible from the positive part alone

    def test_failed_replication_aborts_with_index(self):
        cfg = ExperimentConfig(
            spec=Pareto(2.0),
            n=5,
            replications=3,
            grid=explicit_grid([1, 2]),
            mode=Exact(),
            root_seed=1,
        )
        with pytest.raises(RuntimeError, match="replication 0"):
            run_mse_experiment(cfg)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            small_cfg(replications=1)
        with pytest.raises(ValueError):
            small_cfg(n=2)

    def test_csv_row_schema(self):
        cfg = small_cfg()
        summary = run_mse_experiment(cfg)
        header_fields = MSE_CSV_HEADER.split(",")
        row_fields = mse_csv_row(cfg, summary).split(",")
        assert len(row_fields) == len(header_fields)
        assert row_fields[0] == "pareto:2"
        assert float(row_fields[header_fields.index("mse_x100")]) == summary.mse_hat * 100


class TestKRangeSummary:
    def test_matches_mse_run(self):
        cfg = small_cfg()
        summary = run_mse_experiment(cfg)
        assert k_range_summary(cfg) == (summary.k_min, summary.k_max, summary.k_mean)

    def test_deterministic_exact_pipeline_on_affine_seeds(self):
        cfg = small_cfg(mode=Exact())
        k_min, k_max, k_mean = k_range_summary(cfg)
        assert k_min <= k_mean <= k_max


class TestRmseCurve:
    def test_matches_gamma_moment_oracle(self):
        # for exact Pareto data gamma_hat(k)/gamma is a Gamma(k, k) variable:
        # MSE(k) = 1/k exactly and Var((Z_k-1)^2) = 2/k^2 + 6/k^3
        n, reps = 2000, 300
        grid = explicit_grid([5, 20, 100, 500, 1999])
        curve = rmse_curve(Pareto(2.0), n, reps, grid, root_seed=11)
        assert [k for k, _ in curve] == list(grid.points)
        for k, rmse in curve:
            truth = 1.0 / math.sqrt(k)
            var_d2 = 2.0 / k**2 + 6.0 / k**3
            se_mse = math.sqrt(var_d2 / reps)
            se_rmse = se_mse / (2.0 * truth)
            assert abs(rmse - truth) <= 3.0 * se_rmse

    def test_reproducible(self):
        grid = explicit_grid([10, 100])
        a = rmse_curve(Pareto(1.0), 500, 25, grid, root_seed=3)
        b = rmse_curve(Pareto(1.0), 500, 25, grid, root_seed=3)
        assert a == b

    def test_job_count_invariance(self):
        grid = explicit_grid([10, 100])
        serial = rmse_curve(Pareto(1.0), 500, 16, grid, root_seed=3, jobs=1)
        threaded = rmse_curve(Pareto(1.0), 500, 16, grid, root_seed=3, jobs=2)
        assert serial == threaded

    def test_clips_to_sample_size(self):
        grid = explicit_grid([10, 100, 900])
        curve = rmse_curve(Pareto(1.0), 500, 5, grid, root_seed=3)
        assert [k for k, _ in curve] == [10, 100]

    def test_header_constant(self):
        assert RMSE_CSV_HEADER == "k,rmse"
