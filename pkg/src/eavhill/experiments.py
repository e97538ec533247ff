"""Seeded Monte-Carlo harness for the adaptive Hill pipeline.

Each replication draws a fresh sample from its own deterministic stream
(derived from the root seed and the replication index), runs the adaptive
selection, and contributes one standardized error

    d_i = gamma_hat_i(k_hat_i) / gamma - 1.

Reported are the Monte-Carlo mean squared error, its standard error

    mse_hat = mean(d_i^2)
    stderr  = (1/N) * sqrt(sum_i (d_i^2 - mse_hat)^2),

and the range and mean of the selected k.  The deviation table depends only
on (grid, delta, mode), so it is built once and shared by all replications;
results are identical regardless of how many worker processes run them.

Symmetric families are estimated from magnitudes: the tail index of |X|
equals that of X for a symmetric law, and the Hill estimator needs positive
data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from joblib import Parallel, delayed

from .deviation import MonteCarlo, QuantileMode, build_deviation_table
from .distributions import DistributionSpec
from .grids import Grid, geometric_grid
from .hill import OrderedSample, hill_sweep, order_sample
from .seeding import REPLICATION_STREAM, derive_seed, generator
from .selection import EavConfig, select_k_eav

__all__ = [
    "ExperimentConfig",
    "McSummary",
    "run_mse_experiment",
    "rmse_curve",
    "k_range_summary",
    "MSE_CSV_HEADER",
    "RMSE_CSV_HEADER",
    "mse_csv_row",
]

MSE_CSV_HEADER = "distribution,gamma,n,N,delta,grid,mode,mse_x100,stderr_x100,k_min,k_max,k_mean"
RMSE_CSV_HEADER = "k,rmse"


@dataclass(frozen=True)
class ExperimentConfig:
    spec: DistributionSpec
    n: int
    replications: int = 500
    delta: float = 0.9
    grid: Grid | None = None  # default: geometric grid with ratio 1.1 on n
    mode: QuantileMode = MonteCarlo(draws=2000, seed=0)
    root_seed: int = 0
    jobs: int = 1

    def __post_init__(self) -> None:
        if self.n < 3:
            raise ValueError(f"n must be >= 3, got {self.n}")
        if self.replications < 2:
            raise ValueError(f"need at least 2 replications, got {self.replications}")

    def resolved_grid(self) -> Grid:
        return self.grid if self.grid is not None else geometric_grid(self.n, 1.1)


@dataclass(frozen=True)
class McSummary:
    mse_hat: float
    stderr: float
    k_min: float
    k_max: float
    k_mean: float
    gamma_true: float
    per_replication: tuple[tuple[int, int, float], ...] = field(repr=False, default=())

    def to_dict(self) -> dict:
        return {
            "mse_hat": self.mse_hat,
            "stderr": self.stderr,
            "k_min": self.k_min,
            "k_max": self.k_max,
            "k_mean": self.k_mean,
            "gamma_true": self.gamma_true,
        }


def _prepare_sample(spec: DistributionSpec, n: int, seed: int) -> OrderedSample:
    raw = spec.sample(n, generator(seed))
    if spec.symmetric:
        raw = np.abs(raw)
    return order_sample(raw)


def _one_replication(index, seed, spec, n, config, table, estimator):
    try:
        sample = _prepare_sample(spec, n, seed)
        if estimator is None:
            result = select_k_eav(sample, config, table)
            return index, seed, result.k_hat, result.gamma_hat
        k_hat, gamma_hat = estimator(sample)
        return index, seed, int(k_hat), float(gamma_hat)
    except Exception as exc:
        raise RuntimeError(f"replication {index} (seed {seed}) failed: {exc}") from exc


def run_mse_experiment(
    cfg: ExperimentConfig,
    estimator: Callable[[OrderedSample], tuple[int, float]] | None = None,
) -> McSummary:
    """Standardized MSE of the adaptively selected Hill estimate.

    `estimator`, when given, replaces the adaptive selection per replication
    (test hook); it receives the ordered sample and returns (k_hat, gamma_hat).
    A failed replication aborts the whole run with its index in the message.
    """
    grid = cfg.resolved_grid()
    table = build_deviation_table(grid, cfg.delta, cfg.mode)
    config = EavConfig(grid=grid, delta=cfg.delta, mode=cfg.mode)
    seeds = [derive_seed(cfg.root_seed, REPLICATION_STREAM, i) for i in range(cfg.replications)]
    args = [(i, seeds[i], cfg.spec, cfg.n, config, table, estimator) for i in range(cfg.replications)]
    if cfg.jobs > 1:
        rows = Parallel(n_jobs=cfg.jobs)(delayed(_one_replication)(*a) for a in args)
    else:
        rows = [_one_replication(*a) for a in args]
    rows = sorted(rows)  # replication order, independent of scheduling
    gamma = cfg.spec.gamma
    k_values = np.array([r[2] for r in rows], dtype=float)
    d2 = np.array([(r[3] / gamma - 1.0) ** 2 for r in rows])
    mse = float(d2.mean())
    stderr = float(np.sqrt(((d2 - mse) ** 2).sum()) / cfg.replications)
    return McSummary(
        mse_hat=mse,
        stderr=stderr,
        k_min=float(k_values.min()),
        k_max=float(k_values.max()),
        k_mean=float(k_values.mean()),
        gamma_true=gamma,
        per_replication=tuple((r[1], r[2], r[3]) for r in rows),
    )


def k_range_summary(cfg: ExperimentConfig) -> tuple[float, float, float]:
    """(k_min, k_max, k_mean) from the same replication set as the MSE run."""
    summary = run_mse_experiment(cfg)
    return summary.k_min, summary.k_max, summary.k_mean


def _sweep_replication(index, seed, spec, n, grid):
    try:
        sample = _prepare_sample(spec, n, seed)
        sweep = hill_sweep(sample, grid)
        return index, sweep.ks, sweep.gammas
    except Exception as exc:
        raise RuntimeError(f"replication {index} (seed {seed}) failed: {exc}") from exc


def rmse_curve(
    spec: DistributionSpec,
    n: int,
    replications: int,
    grid: Grid | None = None,
    root_seed: int = 0,
    jobs: int = 1,
) -> list[tuple[int, float]]:
    """Standardized RMSE of the fixed-k Hill estimator along the grid.

    For each grid point k, sqrt of the Monte-Carlo mean of
    (gamma_hat(k)/gamma - 1)^2 over fresh samples.  Grid points exceeding a
    replication's usable n-1 simply do not contribute to that replication.
    """
    if replications < 1:
        raise ValueError("need at least 1 replication")
    grid = grid if grid is not None else geometric_grid(n, 1.1)
    pts = grid.points_array()
    gamma = spec.gamma
    seeds = [derive_seed(root_seed, REPLICATION_STREAM, i) for i in range(replications)]
    args = [(i, seeds[i], spec, n, grid) for i in range(replications)]
    if jobs > 1:
        rows = Parallel(n_jobs=jobs)(delayed(_sweep_replication)(*a) for a in args)
    else:
        rows = [_sweep_replication(*a) for a in args]
    sums = np.zeros(len(pts))
    counts = np.zeros(len(pts), dtype=np.int64)
    for _, ks, gammas in sorted(rows, key=lambda r: r[0]):
        m = len(ks)  # swept points form a prefix of the grid
        sums[:m] += (gammas / gamma - 1.0) ** 2
        counts[:m] += 1
    covered = counts > 0
    return [
        (int(k), float(np.sqrt(s / c)))
        for k, s, c in zip(pts[covered], sums[covered], counts[covered])
    ]


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def mse_csv_row(cfg: ExperimentConfig, summary: McSummary) -> str:
    grid = cfg.resolved_grid()
    return ",".join(
        [
            cfg.spec.describe(),
            _fmt(summary.gamma_true),
            str(cfg.n),
            str(cfg.replications),
            _fmt(cfg.delta),
            grid.describe(),
            cfg.mode.describe(),
            _fmt(summary.mse_hat * 100.0),
            _fmt(summary.stderr * 100.0),
            _fmt(summary.k_min),
            _fmt(summary.k_max),
            _fmt(summary.k_mean),
        ]
    )
