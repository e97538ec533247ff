"""Adaptive-validation selection of the extreme sample size.

Scanning candidates k in increasing grid order (from the admissibility floor
k0 upward), the stopping indicator fires at the first k where some earlier
grid point j <= k disagrees with k by more than the deviation budget:

    S(k) = 1  iff  exists j in K, j <= k, with
    |gamma_hat(k) - gamma_hat(j)| > gamma_hat(k) / (1 - 2 V(k, delta_K))
                                    * (V(j, delta_K) + 3 V(k, delta_K))

The selected size is the last candidate before the first S(k) = 1, or the
largest admissible candidate when S never fires.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .deviation import DeviationTable, MonteCarlo, QuantileMode, build_deviation_table
from .grids import Grid, k0 as grid_k0
from .hill import HillSweep, OrderedSample, hill_sweep

__all__ = [
    "NoAdmissibleCandidate",
    "EavConfig",
    "StopCheck",
    "TraceEntry",
    "EavResult",
    "Estimate",
    "stopping_indicator",
    "select_k_eav",
    "estimate",
]

DEFAULT_SEED = 0


class NoAdmissibleCandidate(ValueError):
    """The grid holds no usable candidate at or above k0."""


@dataclass(frozen=True)
class EavConfig:
    grid: Grid
    delta: float = 0.9
    mode: QuantileMode = MonteCarlo(draws=2000, seed=DEFAULT_SEED)
    # Compare only against j >= k0 instead of every grid j <= k.  The rule as
    # stated uses all j <= k; this variant exists for sensitivity studies.
    compare_from_k0: bool = False

    def __post_init__(self) -> None:
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")


@dataclass(frozen=True)
class StopCheck:
    """Outcome of one stopping-indicator evaluation.

    `margin` is the largest value of |diff| - budget over the compared j;
    positive means the indicator fired, and `violating_j` is then the first
    grid point that tripped it.
    """

    fired: bool
    margin: float
    violating_j: int | None = None


@dataclass(frozen=True)
class TraceEntry:
    k: int
    s: int
    margin: float
    violating_j: int | None = None


@dataclass(frozen=True)
class EavResult:
    k_hat: int
    gamma_hat: float
    k0: int
    delta: float
    grid: Grid
    trace: tuple[TraceEntry, ...]
    hit_grid_max: bool
    # candidates at or above k0 whose raw Monte-Carlo deviation value came
    # out >= 1/2 and therefore could not be evaluated
    skipped: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {
            "k_hat": self.k_hat,
            "gamma_hat": self.gamma_hat,
            "k0": self.k0,
            "delta": self.delta,
            "grid": {
                "spec": self.grid.describe(),
                "nominal_size": self.grid.nominal_size,
                "points": list(self.grid.points),
            },
            "hit_grid_max": self.hit_grid_max,
            "skipped": list(self.skipped),
            "trace": [
                {"k": t.k, "s": t.s, "margin": t.margin, "violating_j": t.violating_j}
                for t in self.trace
            ],
        }


@dataclass(frozen=True)
class Estimate:
    """One-call result: selected size, tail index, and full diagnostics."""

    gamma_hat: float
    k_hat: int
    result: EavResult
    table: DeviationTable = field(repr=False)
    sweep: HillSweep = field(repr=False)

    @property
    def k0(self) -> int:
        return self.result.k0


def stopping_indicator(
    sweep: HillSweep, table: DeviationTable, k: int, j_min: int | None = None
) -> StopCheck:
    """Evaluate S(k) against every swept grid point j <= k (optionally j >= j_min)."""
    v_k = table.value_at(k)
    if v_k >= 0.5:
        raise ValueError(
            f"stopping indicator undefined at k={k}: V(k)={v_k:.4f} >= 1/2 (below k0)"
        )
    gamma_k = sweep.gamma_at(k)
    mask = sweep.ks <= k
    if j_min is not None:
        mask &= sweep.ks >= j_min
    js = sweep.ks[mask]
    gammas_j = sweep.gammas[mask]
    v_js = np.array([table.value_at(int(j)) for j in js])
    budget = gamma_k / (1.0 - 2.0 * v_k) * (v_js + 3.0 * v_k)
    margins = np.abs(gamma_k - gammas_j) - budget
    over = margins > 0.0
    if over.any():
        first = int(np.argmax(over))
        return StopCheck(fired=True, margin=float(margins[first]), violating_j=int(js[first]))
    return StopCheck(fired=False, margin=float(margins.max()), violating_j=None)


def select_k_eav(
    sample: OrderedSample, config: EavConfig, table: DeviationTable | None = None
) -> EavResult:
    """Run the adaptive scan and return the selected extreme sample size.

    A prebuilt deviation `table` for (config.grid, config.delta, config.mode)
    may be supplied to amortize table construction across many samples; it is
    validated against the grid and delta.
    """
    grid = config.grid
    if table is None:
        table = build_deviation_table(grid, config.delta, config.mode)
    sweep = hill_sweep(sample, grid)
    k0_point = grid_k0(grid, config.delta, table)

    in_range = [int(k) for k in sweep.ks if k >= k0_point]
    # Raw Monte-Carlo tables need not be monotone, so points past k0 can
    # still carry V >= 1/2; they cannot be stopping candidates.
    candidates = [k for k in in_range if table.value_at(k) < 0.5]
    skipped = tuple(k for k in in_range if table.value_at(k) >= 0.5)
    if not candidates:
        raise NoAdmissibleCandidate(
            f"no grid point in [k0={k0_point}, n-1={sample.n - 1}] is admissible"
        )

    j_min = k0_point if config.compare_from_k0 else None
    trace: list[TraceEntry] = []
    k_hat: int | None = None
    hit_grid_max = True
    for k in candidates:
        check = stopping_indicator(sweep, table, k, j_min)
        trace.append(TraceEntry(k=k, s=int(check.fired), margin=check.margin,
                                violating_j=check.violating_j))
        if check.fired:
            hit_grid_max = False
            break
        k_hat = k
    if k_hat is None:
        # S fired at the smallest admissible candidate: the defining set of
        # the rule is empty for this sample.
        raise NoAdmissibleCandidate(
            f"stopping criterion fired at the first admissible candidate "
            f"k={candidates[0]}"
        )
    return EavResult(
        k_hat=k_hat,
        gamma_hat=sweep.gamma_at(k_hat),
        k0=k0_point,
        delta=config.delta,
        grid=grid,
        trace=tuple(trace),
        hit_grid_max=hit_grid_max,
        skipped=skipped,
    )


def estimate(
    sample: OrderedSample, config: EavConfig, table: DeviationTable | None = None
) -> Estimate:
    """Select k adaptively and report gamma_hat with full diagnostics."""
    if table is None:
        table = build_deviation_table(config.grid, config.delta, config.mode)
    result = select_k_eav(sample, config, table)
    sweep = hill_sweep(sample, config.grid)
    return Estimate(
        gamma_hat=result.gamma_hat,
        k_hat=result.k_hat,
        result=result,
        table=table,
        sweep=sweep,
    )
