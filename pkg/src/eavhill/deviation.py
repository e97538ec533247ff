"""Deviation term of the Hill error decomposition.

For ``Z_k ~ Gamma(shape=k, rate=k)`` (the mean of k unit exponentials), the
deviation term ``V(k, delta)`` is the ``1 - delta/2`` quantile of ``|Z_k - 1|``.
Writing ``G_k`` for the CDF of ``Gamma(shape=k, rate=1)``,

    P(|Z_k - 1| <= y) = G_k(k * (1 + y)) - G_k(k * max(1 - y, 0)),

which this module evaluates through the regularized lower incomplete gamma
function and inverts by bisection.  A Monte-Carlo estimate of the same
quantile is provided as an alternative, together with the closed-form
envelopes

    v_tilde(k, delta) = sqrt(2 log(2/delta) / k) + log(2/delta) / k
    r_bound(k, delta) = sqrt(3 log(1/delta) / k) + 3 log(1/delta) / k

which bound, respectively, the deviation quantile (at level delta/2) and the
relative overshoot of the (k+1)-th uniform order statistic.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy.special import gammainc

from .seeding import TABLE_STREAM, derive_seed, generator

__all__ = [
    "Exact",
    "MonteCarlo",
    "QuantileMode",
    "DeviationTable",
    "abs_gamma_cdf",
    "exact_quantile",
    "mc_quantile",
    "v_tilde",
    "r_bound",
    "build_deviation_table",
]

# Largest shape for which Z_k is drawn as an explicit mean of exponentials;
# beyond this the rejection-based Gamma sampler is used instead.
_EXPONENTIAL_SUM_MAX_SHAPE = 64

# Cap on exponential draws materialized at once inside mc_quantile.
_CHUNK_BUDGET = 1 << 22


@dataclass(frozen=True)
class Exact:
    """Quantiles computed by bisecting the Gamma deviation CDF."""

    def describe(self) -> str:
        return "exact"


@dataclass(frozen=True)
class MonteCarlo:
    """Quantiles estimated from `draws` simulated values of ``|Z_k - 1|``.

    The per-k random stream is derived from ``(seed, k)``, so tables are
    reproducible and independent of evaluation order.
    """

    draws: int = 2000
    seed: int = 0

    def __post_init__(self) -> None:
        if self.draws < 2:
            raise ValueError(f"Monte-Carlo quantiles need draws >= 2, got {self.draws}")

    def describe(self) -> str:
        return f"mc:{self.draws}"


QuantileMode = Union[Exact, MonteCarlo]


def _check_k_delta(k: int, delta: float) -> None:
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")


def v_tilde(k: int, delta: float) -> float:
    """Closed-form envelope of the deviation of ``Z_k`` at confidence 1-delta."""
    _check_k_delta(k, delta)
    log_term = math.log(2.0 / delta)
    return math.sqrt(2.0 * log_term / k) + log_term / k


def r_bound(k: int, delta: float) -> float:
    """Relative concentration bound for the (k+1)-th uniform order statistic."""
    _check_k_delta(k, delta)
    log_term = math.log(1.0 / delta)
    return math.sqrt(3.0 * log_term / k) + 3.0 * log_term / k


def abs_gamma_cdf(k: int, y: float) -> float:
    """P(|Z_k - 1| <= y) for ``Z_k ~ Gamma(shape=k, rate=k)``.

    Total on k >= 1, y >= 0; non-decreasing in y with limit 1.
    """
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    if y < 0:
        raise ValueError(f"y must be nonnegative, got {y}")
    upper = gammainc(k, k * (1.0 + y))
    lower = gammainc(k, k * max(1.0 - y, 0.0))
    return float(max(upper - lower, 0.0))


def exact_quantile(k: int, delta: float) -> float:
    """Smallest y >= 0 with ``abs_gamma_cdf(k, y) >= 1 - delta/2``.

    Bisection on ``[0, v_tilde(k, delta/2)]``; the envelope certifies the
    upper bracket, and the returned endpoint always satisfies the target
    probability.  Absolute tolerance is driven well below 1e-10.
    """
    _check_k_delta(k, delta)
    target = 1.0 - delta / 2.0
    lo = 0.0
    hi = v_tilde(k, delta / 2.0)
    if abs_gamma_cdf(k, hi) < target:  # never happens analytically; guard anyway
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if abs_gamma_cdf(k, mid) >= target:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-13:
            break
    return hi


def sample_gamma_mean(k: int, draws: int, rng: np.random.Generator) -> np.ndarray:
    """Draws of ``Z_k``: mean of k unit exponentials for small k, Gamma otherwise."""
    if k <= _EXPONENTIAL_SUM_MAX_SHAPE:
        out = np.empty(draws)
        step = max(_CHUNK_BUDGET // k, 1)
        for start in range(0, draws, step):
            stop = min(start + step, draws)
            out[start:stop] = rng.standard_exponential((stop - start, k)).mean(axis=1)
        return out
    return rng.gamma(k, 1.0, draws) / k


def mc_quantile(k: int, delta: float, draws: int, seed: int) -> float:
    """Empirical ``1 - delta/2`` quantile of ``|Z_k - 1|`` from `draws` samples.

    Uses the order statistic of rank ``ceil((1 - delta/2) * draws)``, a
    conservative convention that never under-covers.  Deterministic given
    ``(k, delta, draws, seed)``.
    """
    _check_k_delta(k, delta)
    if draws < 2:
        raise ValueError(f"draws must be >= 2, got {draws}")
    z = sample_gamma_mean(k, draws, generator(seed))
    deviations = np.sort(np.abs(z - 1.0))
    # tiny slack so an exactly-integer rank is not bumped up by float noise
    rank = math.ceil((1.0 - delta / 2.0) * draws - 1e-9)
    rank = min(max(rank, 1), draws)
    return float(deviations[rank - 1])


@dataclass(frozen=True)
class DeviationTable:
    """Per-grid-point deviation values ``V(k, delta_grid)``.

    ``delta_grid`` is the union-bound-corrected tolerance ``delta / |K|``.
    Monte-Carlo tables keep raw sampled quantiles; `monotone` reports whether
    the values happen to be non-increasing in k (always true in exact mode),
    and `violations` lists grid points whose value exceeds their predecessor.
    """

    grid_points: tuple[int, ...]
    delta_grid: float
    values: dict[int, float] = field(repr=False)
    mode: QuantileMode
    monotone: bool
    violations: tuple[int, ...] = ()

    def value_at(self, k: int) -> float:
        return self.values[k]

    def as_array(self) -> np.ndarray:
        """Values aligned with `grid_points`."""
        return np.array([self.values[k] for k in self.grid_points])

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["k", "V"])
            for k in self.grid_points:
                writer.writerow([k, f"{self.values[k]:.17g}"])


def build_deviation_table(grid, delta: float, mode: QuantileMode) -> DeviationTable:
    """Evaluate ``V(k, delta/|K|)`` at every grid point.

    `grid` supplies both the candidate points and the nominal size used in
    the union-bound correction.  In Monte-Carlo mode each point gets its own
    stream derived from ``(mode.seed, k)``, so the table is reproducible and
    could be filled in any order.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if len(grid.points) == 0:
        raise ValueError("grid is empty")
    delta_grid = delta / grid.nominal_size
    values: dict[int, float] = {}
    for k in grid.points:
        if isinstance(mode, Exact):
            values[k] = exact_quantile(k, delta_grid)
        else:
            values[k] = mc_quantile(
                k, delta_grid, mode.draws, derive_seed(mode.seed, TABLE_STREAM, k)
            )
    pts = tuple(grid.points)
    violations = tuple(
        k for prev, k in zip(pts, pts[1:]) if values[k] > values[prev]
    )
    return DeviationTable(
        grid_points=pts,
        delta_grid=delta_grid,
        values=values,
        mode=mode,
        monotone=not violations,
        violations=violations,
    )
