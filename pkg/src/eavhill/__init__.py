"""Adaptive-validation selection of the extreme sample size for Hill estimation.

The selection rule compares Hill estimates across a grid of candidate sizes
against an explicit Gamma-quantile deviation budget and keeps the largest
candidate that stays consistent with every smaller one.  A sampling toolbox
for heavy-tailed benchmark distributions, a seeded Monte-Carlo harness, and
closed-form second-order diagnostic bounds round out the package.
"""

from .bounds import (
    GridConditions,
    KstarLowerBound,
    SecondOrderParams,
    adaptive_error_bound,
    bias_constant,
    bias_envelope,
    c2_of,
    check_grid_conditions,
    kstar_lower_bound,
    kstar_under_envelope,
    n0_upper_bound,
    oracle_error_bound,
)
from .deviation import (
    DeviationTable,
    Exact,
    MonteCarlo,
    QuantileMode,
    abs_gamma_cdf,
    build_deviation_table,
    exact_quantile,
    mc_quantile,
    r_bound,
    v_tilde,
)
from .distributions import (
    CounterExample,
    DistributionSpec,
    Frechet,
    Pareto,
    ParetoChangePoint,
    Perturb,
    SymmetricStable,
    counterexample_cdf,
    parse_distribution,
    pcp_tau,
    perturb_survival,
)
from .experiments import (
    ExperimentConfig,
    McSummary,
    k_range_summary,
    rmse_curve,
    run_mse_experiment,
)
from .grids import (
    Grid,
    NoAdmissibleK,
    explicit_grid,
    geometric_grid,
    k0,
    k0_upper_bound,
    linear_grid,
    parse_grid_spec,
)
from .hill import HillSweep, OrderedSample, hill_estimate, hill_sweep, order_sample
from .seeding import derive_seed, generator, splitmix64
from .selection import (
    EavConfig,
    EavResult,
    Estimate,
    NoAdmissibleCandidate,
    StopCheck,
    TraceEntry,
    estimate,
    select_k_eav,
    stopping_indicator,
)

__version__ = "0.1.0"
