"""Second-order diagnostic bounds for the adaptive Hill pipeline.

Everything here assumes a tail quantile function with a standardized Karamata
representation whose bias function is dominated by C t^rho for some rho < 0
(a von Mises-type envelope).  Under that envelope the bias term of the Hill
error decomposition satisfies

    B(k, n, delta) <= C1(delta, rho) * (n / (k+1))^rho,
    C1(delta, rho) = C * (1 + v_tilde(1, delta/2)) * (1 + r_bound(1, delta/2))^(-rho),

which yields an explicit lower bound on the oracle k*, a minimum sample size
control, and error bounds for both the oracle and the adaptive selection.

These quantities are diagnostics only; the selection rule itself never
consumes them.  The constants c1 and c2 entering C2(rho) are only known to
exist in (0, 1] and (0, 2]; the defaults below are user-supplied stand-ins,
not universal values, and outputs should be read accordingly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .deviation import exact_quantile, r_bound, v_tilde
from .grids import Grid

__all__ = [
    "SecondOrderParams",
    "KstarLowerBound",
    "GridConditions",
    "bias_constant",
    "bias_constant_upper",
    "bias_envelope",
    "c2_of",
    "kstar_lower_bound",
    "n0_upper_bound",
    "oracle_error_bound",
    "adaptive_error_bound",
    "kstar_under_envelope",
    "check_grid_conditions",
]


@dataclass(frozen=True)
class SecondOrderParams:
    """Envelope and grid parameters: gamma, rho < 0, C > 0, c1, c2, beta > 1."""

    gamma: float
    rho: float
    C: float
    beta: float
    c1: float = 1.0
    c2: float = 2.0

    def __post_init__(self) -> None:
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.rho >= 0:
            raise ValueError("rho must be negative")
        if self.C <= 0:
            raise ValueError("C must be positive")
        if self.beta <= 1:
            raise ValueError("beta must exceed 1")
        if not 0.0 < self.c1 <= 1.0:
            raise ValueError("c1 must lie in (0, 1]")
        if not 0.0 < self.c2 <= 2.0:
            raise ValueError("c2 must lie in (0, 2]")


def bias_constant(delta: float, p: SecondOrderParams) -> float:
    """C1(delta, rho), the exact envelope constant."""
    return p.C * (1.0 + v_tilde(1, delta / 2.0)) * (1.0 + r_bound(1, delta / 2.0)) ** (-p.rho)


def bias_constant_upper(delta: float, p: SecondOrderParams) -> float:
    """Looser closed form C (1 + sqrt(3 log(4/delta)) + 3 log(4/delta))^(1-rho)."""
    log_term = math.log(4.0 / delta)
    return p.C * (1.0 + math.sqrt(3.0 * log_term) + 3.0 * log_term) ** (1.0 - p.rho)


def bias_envelope(k: int, n: int, delta: float, p: SecondOrderParams) -> float:
    """Envelope value C1(delta, rho) (n / (k+1))^rho; non-decreasing in k."""
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must satisfy 1 <= k <= n-1, got k={k}, n={n}")
    return bias_constant(delta, p) * (n / (k + 1.0)) ** p.rho


def c2_of(p: SecondOrderParams) -> float:
    """C2(rho) = (4/21)^2 (c1 / (sqrt(2) C))^(2 / (1 - 2 rho))."""
    return (4.0 / 21.0) ** 2 * (p.c1 / (math.sqrt(2.0) * p.C)) ** (2.0 / (1.0 - 2.0 * p.rho))


@dataclass(frozen=True)
class KstarLowerBound:
    """Lower bound on the oracle; `vacuous` marks values below 1."""

    value: float
    vacuous: bool
    exceeds_half_n: bool


def _check_delta_admissible(delta: float, p: SecondOrderParams) -> None:
    limit = p.c2**2 / 4.0
    if not 0.0 < delta <= limit:
        raise ValueError(f"delta must lie in (0, c2^2/4] = (0, {limit:g}], got {delta}")


def kstar_lower_bound(delta: float, n: int, p: SecondOrderParams) -> KstarLowerBound:
    """beta^-1 (C2 gamma^(2/(1-2rho)) n^(-2rho/(1-2rho)) / log(4/delta) - 1).

    Requires delta <= c2^2/4.  The bound is only meaningful while it stays
    below n/2; beyond that a warning is emitted and the raw value returned.
    """
    _check_delta_admissible(delta, p)
    expo = 1.0 - 2.0 * p.rho
    value = (
        c2_of(p) * p.gamma ** (2.0 / expo) * n ** (-2.0 * p.rho / expo) / math.log(4.0 / delta)
        - 1.0
    ) / p.beta
    exceeds = value > n / 2.0
    if exceeds:
        warnings.warn(
            f"oracle lower bound {value:.3g} exceeds n/2 = {n / 2:.3g}; "
            "outside its validity range",
            stacklevel=2,
        )
    return KstarLowerBound(value=value, vacuous=value < 1.0, exceeds_half_n=exceeds)


def _n0_inequality_holds(n: int, log_term: float, p: SecondOrderParams) -> bool:
    expo = 1.0 - 2.0 * p.rho
    rhs = (
        c2_of(p) * p.gamma ** (2.0 / expo) * n ** (-2.0 * p.rho / expo) / log_term - 1.0
    ) / p.beta
    return 36.0 * log_term <= rhs


def n0_upper_bound(delta: float, grid_nominal_size: int, p: SecondOrderParams) -> int:
    """Smallest n at which the admissibility floor provably sits below the oracle.

    Solves 36 L <= beta^-1 (C2 gamma^(2/(1-2rho)) n^(-2rho/(1-2rho)) / L - 1)
    for n in closed form with L = log(4 |K| / delta), then nudges by +-1 so
    the returned n satisfies the inequality while n - 1 does not.
    """
    _check_delta_admissible(delta / grid_nominal_size, p)
    log_term = math.log(4.0 * grid_nominal_size / delta)
    expo = 1.0 - 2.0 * p.rho
    n_real = (
        (36.0 * p.beta * log_term + 1.0)
        * log_term
        / (c2_of(p) * p.gamma ** (2.0 / expo))
    ) ** (expo / (-2.0 * p.rho))
    n = max(int(math.ceil(n_real)), 2)
    while not _n0_inequality_holds(n, log_term, p):
        n += 1
    while n > 2 and _n0_inequality_holds(n - 1, log_term, p):
        n -= 1
    return n


def oracle_error_bound(delta: float, n: int, p: SecondOrderParams) -> float:
    """High-probability error of the oracle choice under the envelope."""
    _check_delta_admissible(delta, p)
    expo = 1.0 - 2.0 * p.rho
    return (
        2.0
        * (1.0 + math.sqrt(2.0))
        * math.sqrt(p.beta / c2_of(p))
        * math.sqrt(1.0 + math.log(4.0 / delta))
        * (n / p.gamma**2) ** (p.rho / expo)
    )


def adaptive_error_bound(gamma: float, v_star: float) -> float:
    """6 gamma v* / (1 - 6 v*), valid for 0 <= v* < 1/6."""
    if not 0.0 <= v_star < 1.0 / 6.0:
        raise ValueError(f"v_star must lie in [0, 1/6), got {v_star}")
    return 6.0 * gamma * v_star / (1.0 - 6.0 * v_star)


def kstar_under_envelope(grid: Grid, n: int, delta: float, p: SecondOrderParams) -> int:
    """Largest grid point where the bias envelope stays below gamma * V(k, delta).

    The envelope is increasing in k and the deviation quantile decreasing, so
    the admissible set is a prefix of the grid; the crossing is located by
    bisection on the grid index.  Errors out when the grid fails the
    wide-grid sanity check under the envelope.
    """
    pts = [k for k in grid.points if k <= n - 1]
    if not pts:
        raise ValueError(f"no grid point is <= n-1 = {n - 1}")

    def excess(k: int) -> float:
        return bias_envelope(k, n, delta, p) - p.gamma * exact_quantile(k, delta)

    if excess(pts[0]) > 0.0:
        raise ValueError(
            "envelope grid not wide: bias envelope already exceeds the "
            f"deviation budget at k_min = {pts[0]}"
        )
    if excess(pts[-1]) <= 0.0:
        raise ValueError(
            "envelope grid not wide: bias envelope never exceeds the "
            f"deviation budget up to k_max = {pts[-1]}"
        )
    lo, hi = 0, len(pts) - 1  # excess(pts[lo]) <= 0 < excess(pts[hi])
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if excess(pts[mid]) <= 0.0:
            lo = mid
        else:
            hi = mid
    return pts[lo]


@dataclass(frozen=True)
class GridConditions:
    wide: bool
    fine: bool
    beta_observed: float


def check_grid_conditions(grid: Grid, n: int, delta: float, p: SecondOrderParams) -> GridConditions:
    """Wide-grid check under the envelope plus the max consecutive-ratio check."""
    pts = [k for k in grid.points if k <= n - 1]
    if not pts:
        raise ValueError(f"no grid point is <= n-1 = {n - 1}")
    wide = (
        bias_envelope(pts[0], n, delta, p) <= p.gamma * exact_quantile(pts[0], delta)
        and bias_envelope(pts[-1], n, delta, p) > p.gamma * exact_quantile(pts[-1], delta)
    )
    if len(pts) == 1:
        beta_observed = 1.0
    else:
        beta_observed = max(b / a for a, b in zip(pts, pts[1:]))
    return GridConditions(wide=wide, fine=beta_observed <= p.beta * (1.0 + 1e-12),
                          beta_observed=beta_observed)
