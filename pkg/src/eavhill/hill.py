"""Order-statistics preparation and the Hill estimator.

The Hill estimate for the k largest observations is

    gamma_hat(k) = (1/k) * sum_{i<=k} log(X_(i) / X_(k+1)),

with X_(1) >= ... >= X_(n).  Prefix sums of the log order statistics make a
whole sweep over a grid an O(n + |K|) operation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["OrderedSample", "HillSweep", "order_sample", "hill_estimate", "hill_sweep"]


@dataclass(frozen=True)
class OrderedSample:
    """Positive observations sorted in decreasing order with prefix log-sums.

    ``log_prefix[i]`` holds ``sum(log(values[:i+1]))``.  `dropped` counts the
    non-positive (or non-finite) raw entries that were discarded; the Hill
    estimator only exists for positive data.
    """

    values: np.ndarray
    log_prefix: np.ndarray
    dropped: int = 0

    @property
    def n(self) -> int:
        return len(self.values)


def order_sample(raw) -> OrderedSample:
    """Sort raw observations decreasingly, dropping unusable entries.

    Raises ValueError when fewer than 2 positive entries remain, since no
    extreme sample size k is admissible in that case.
    """
    arr = np.asarray(raw, dtype=float).ravel()
    if arr.size == 0:
        raise ValueError("empty sample")
    usable = arr[np.isfinite(arr) & (arr > 0)]
    dropped = int(arr.size - usable.size)
    if usable.size < 2:
        raise ValueError(
            f"need at least 2 positive observations, got {usable.size} "
            f"({dropped} dropped)"
        )
    values = np.sort(usable, kind="stable")[::-1]
    return OrderedSample(values=values, log_prefix=np.cumsum(np.log(values)), dropped=dropped)


def hill_estimate(sample: OrderedSample, k: int) -> float:
    """gamma_hat(k), valid for 1 <= k <= n-1."""
    n = sample.n
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must satisfy 1 <= k <= n-1 = {n - 1}, got {k}")
    value = sample.log_prefix[k - 1] / k - np.log(sample.values[k])
    return float(max(value, 0.0))


@dataclass(frozen=True)
class HillSweep:
    """Hill estimates over a grid of candidate extreme sample sizes.

    `ks` and `gammas` are aligned; `dropped_points` lists grid points that
    exceeded n-1 and were skipped.
    """

    ks: np.ndarray
    gammas: np.ndarray
    dropped_points: tuple[int, ...] = ()

    @property
    def entries(self) -> list[tuple[int, float]]:
        return [(int(k), float(g)) for k, g in zip(self.ks, self.gammas)]

    def gamma_at(self, k: int) -> float:
        idx = np.searchsorted(self.ks, k)
        if idx >= len(self.ks) or self.ks[idx] != k:
            raise KeyError(f"k={k} is not a swept grid point")
        return float(self.gammas[idx])


def hill_sweep(sample: OrderedSample, grid) -> HillSweep:
    """Evaluate the Hill estimator at every admissible grid point."""
    n = sample.n
    pts = np.asarray(grid.points, dtype=np.int64)
    keep = pts <= n - 1
    ks = pts[keep]
    if ks.size == 0:
        raise ValueError(f"no grid point is <= n-1 = {n - 1}")
    gammas = sample.log_prefix[ks - 1] / ks - np.log(sample.values[ks])
    np.maximum(gammas, 0.0, out=gammas)
    return HillSweep(ks=ks, gammas=gammas, dropped_points=tuple(int(p) for p in pts[~keep]))
