"""Heavy-tailed sampling distributions with quantile functions and CDFs.

Every family exposes its true tail index through `.gamma` and draws samples
from an explicit `numpy.random.Generator`, so runs are exactly reproducible.
Families with a closed or numerically invertible distribution function also
provide `quantile` / `cdf` / `survival`, which the validation suite checks
against the samplers.

Families
--------
Pareto(alpha)
    P(X > t) = t^(-alpha) on [1, inf).
CounterExample(alpha, s)
    Pareto draws pushed through a block transform that leaves gaps in the
    support: X = floor(Z^s)^(1/s) + (Z - floor(Z^s)^(1/s)) / 2.  Regularly
    varying, but its density vanishes on infinitely many intervals.
SymmetricStable(alpha)
    Characteristic function exp(-|t|^alpha); simulated by the classic
    angle/exponential transform.  No closed-form quantile or CDF here.
Perturb(alpha, beta_p)
    Survival c x^(-alpha) (log x)^beta on [x0, inf) with c = (e alpha/beta)^beta
    and x0 = exp(beta/alpha), a standard generator of misleading Hill plots.
Frechet(gamma, shift)
    F(x) = exp(-(x - shift)^(-1/gamma)) for x > shift.
ParetoChangePoint(gamma_prime, gamma, tail_prob)
    Exact Pareto(1/gamma_prime) up to tau, exact Pareto(1/gamma) beyond, with
    tau set so that the tail mass above it equals tail_prob.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Pareto",
    "CounterExample",
    "SymmetricStable",
    "Perturb",
    "Frechet",
    "ParetoChangePoint",
    "DistributionSpec",
    "pcp_tau",
    "perturb_survival",
    "counterexample_cdf",
    "parse_distribution",
]


def _uniforms(rng: np.random.Generator, n: int) -> np.ndarray:
    # (0, 1)-valued, bounded away from the endpoints used in logs/powers
    return 1.0 - rng.random(n)


def _fmt_param(x: float) -> str:
    # shortest representation that parses back to the same float
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


@dataclass(frozen=True)
class Pareto:
    alpha: float

    def __post_init__(self) -> None:
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")

    # symmetric laws have their tail index read off |X|; one-sided families do not
    symmetric = False

    @property
    def gamma(self) -> float:
        return 1.0 / self.alpha

    def quantile(self, u):
        u = np.asarray(u, dtype=float)
        return (1.0 - u) ** (-self.gamma)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x < 1.0, 0.0, 1.0 - np.maximum(x, 1.0) ** (-self.alpha))

    def survival(self, x):
        return 1.0 - self.cdf(x)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return self.quantile(1.0 - _uniforms(rng, n))

    def describe(self) -> str:
        return f"pareto:{_fmt_param(self.alpha)}"


def _block_floor(z: np.ndarray, s: float) -> np.ndarray:
    """Largest integer m with m^(1/s) <= z, robust near block boundaries.

    Floating floor of z^s can land one block off when z sits on (or within a
    few ulp of) an exact boundary n^(1/s); candidates m-1, m, m+1, m+2 are
    compared against z directly instead.
    """
    inv_s = 1.0 / s
    tol = 1.0 + 1e-12
    m = np.floor(z**s)
    for bump in (2.0, 1.0):
        cand = m + bump
        m = np.where(cand**inv_s <= z * tol, cand, m)
    m = np.where(m**inv_s <= z * tol, m, m - 1.0)
    return np.maximum(m, 1.0)


def counterexample_cdf(alpha: float, s: float, x) -> np.ndarray:
    """Distribution function of the gap-ridden transform of a Pareto variable.

    Within block m (between m^(1/s) and (m+1)^(1/s)) the transform maps
    z -> a + (z - a)/2 with a = m^(1/s), so the CDF is the Pareto CDF at
    2x - a, frozen at the block's right edge once x passes the midpoint.
    Coincides with the Pareto CDF at every block boundary.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros_like(x)
    inside = x >= 1.0
    if inside.any():
        xi = x[inside]
        m = _block_floor(xi, s)
        a = m ** (1.0 / s)
        b = (m + 1.0) ** (1.0 / s)
        z = np.minimum(2.0 * xi - a, b)
        out[inside] = 1.0 - np.maximum(z, 1.0) ** (-alpha)
    return out if out.size > 1 else float(out[0])


@dataclass(frozen=True)
class CounterExample:
    """Regularly varying law whose density vanishes on infinitely many intervals."""

    alpha: float
    s: float

    def __post_init__(self) -> None:
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if not 0.0 < self.s <= 1.0:
            raise ValueError("s must lie in (0, 1]")

    symmetric = False

    @property
    def gamma(self) -> float:
        return 1.0 / self.alpha

    def transform(self, z):
        """Apply the block map to Pareto values z >= 1."""
        z = np.asarray(z, dtype=float)
        a = _block_floor(z, self.s) ** (1.0 / self.s)
        return a + 0.5 * (z - a)

    def quantile(self, u):
        return self.transform(Pareto(self.alpha).quantile(u))

    def cdf(self, x):
        return counterexample_cdf(self.alpha, self.s, x)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return self.transform(Pareto(self.alpha).sample(n, rng))

    def describe(self) -> str:
        return f"counter:{_fmt_param(self.alpha)}:{_fmt_param(self.s)}"


@dataclass(frozen=True)
class SymmetricStable:
    """Symmetric alpha-stable law with characteristic function exp(-|t|^alpha)."""

    alpha: float

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 2.0:
            raise ValueError("alpha must lie in (0, 2)")

    symmetric = True

    @property
    def gamma(self) -> float:
        return 1.0 / self.alpha

    def quantile(self, u):
        raise ValueError("symmetric stable laws have no closed-form quantile")

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        # Chambers-Mallows-Stuck transform, symmetric case
        a = self.alpha
        theta = rng.uniform(-math.pi / 2.0, math.pi / 2.0, n)
        expo = rng.standard_exponential(n)
        if a == 1.0:
            return np.tan(theta)
        return (
            np.sin(a * theta)
            / np.cos(theta) ** (1.0 / a)
            * (np.cos((1.0 - a) * theta) / expo) ** ((1.0 - a) / a)
        )

    def describe(self) -> str:
        return f"stable:{_fmt_param(self.alpha)}"


def perturb_survival(alpha: float, beta_p: float, x) -> np.ndarray:
    """Survival c x^(-alpha) (log x)^beta on [x0, inf), x0 = exp(beta/alpha)."""
    x0 = math.exp(beta_p / alpha)
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x_arr < x0 * (1.0 - 1e-12)):
        raise ValueError(f"survival defined on [{x0:.6g}, inf)")
    c = (math.e * alpha / beta_p) ** beta_p
    out = np.clip(c * np.maximum(x_arr, x0) ** (-alpha) * np.log(np.maximum(x_arr, x0)) ** beta_p, 0.0, 1.0)
    return out if out.size > 1 else float(out[0])


@dataclass(frozen=True)
class Perturb:
    """Slowly-converging power law with a logarithmic perturbation."""

    alpha: float
    beta_p: float

    def __post_init__(self) -> None:
        if self.alpha <= 0 or self.beta_p <= 0:
            raise ValueError("alpha and beta_p must be positive")

    symmetric = False

    @property
    def gamma(self) -> float:
        return 1.0 / self.alpha

    @property
    def x0(self) -> float:
        return math.exp(self.beta_p / self.alpha)

    def survival(self, x):
        return perturb_survival(self.alpha, self.beta_p, x)

    def cdf(self, x):
        return 1.0 - self.survival(x)

    def quantile(self, u):
        """Invert the survival function by bracketed bisection.

        The survival is strictly decreasing on (x0, inf) but its derivative
        vanishes at x0, so bisection (not Newton) is used; relative x
        tolerance 1e-12.
        """
        u = np.atleast_1d(np.asarray(u, dtype=float))
        if np.any((u < 0.0) | (u >= 1.0)):
            raise ValueError("u must lie in [0, 1)")
        target = 1.0 - u  # survival level to hit
        lo = np.full(u.shape, self.x0)
        hi = np.full(u.shape, self.x0 * 2.0)
        while True:
            too_low = self.survival(hi) > target
            if not np.any(too_low):
                break
            hi[too_low] *= 2.0
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            still_left = self.survival(mid) >= target
            lo = np.where(still_left, mid, lo)
            hi = np.where(still_left, hi, mid)
            if np.all((hi - lo) <= 1e-12 * hi):
                break
        out = 0.5 * (lo + hi)
        return out if out.size > 1 else float(out[0])

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return self.quantile(1.0 - _uniforms(rng, n))

    def describe(self) -> str:
        return f"perturb:{_fmt_param(self.alpha)}:{_fmt_param(self.beta_p)}"


@dataclass(frozen=True)
class Frechet:
    """Frechet law with tail index gamma, optionally shifted to the right."""

    gamma_index: float
    shift: float = 0.0

    def __post_init__(self) -> None:
        if self.gamma_index <= 0:
            raise ValueError("gamma must be positive")
        if self.shift < 0:
            raise ValueError("shift must be nonnegative")

    symmetric = False

    @property
    def gamma(self) -> float:
        return self.gamma_index

    def quantile(self, u):
        u = np.asarray(u, dtype=float)
        return self.shift + (-np.log(u)) ** (-self.gamma_index)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        z = np.maximum(x - self.shift, 0.0)
        with np.errstate(divide="ignore"):
            return np.where(z > 0.0, np.exp(-z ** (-1.0 / self.gamma_index)), 0.0)

    def survival(self, x):
        return 1.0 - self.cdf(x)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return self.quantile(_uniforms(rng, n))

    def describe(self) -> str:
        return f"frechet:{_fmt_param(self.gamma_index)}:{_fmt_param(self.shift)}"


def pcp_tau(gamma_prime: float, tail_prob: float) -> float:
    """Change point tau with tail mass tail_prob above it: tau^(-1/gamma') = tail_prob."""
    if not 0.0 < tail_prob < 1.0:
        raise ValueError("tail_prob must lie in (0, 1)")
    return tail_prob ** (-gamma_prime)


@dataclass(frozen=True)
class ParetoChangePoint:
    """Pareto with one tail index up to tau and another beyond it."""

    gamma_prime: float
    gamma_index: float
    tail_prob: float

    def __post_init__(self) -> None:
        if self.gamma_prime <= 0 or self.gamma_index <= 0:
            raise ValueError("tail indices must be positive")
        if not 0.0 < self.tail_prob < 1.0:
            raise ValueError("tail_prob must lie in (0, 1)")

    symmetric = False

    @property
    def gamma(self) -> float:
        return self.gamma_index

    @property
    def tau(self) -> float:
        return pcp_tau(self.gamma_prime, self.tail_prob)

    def survival(self, x):
        x = np.asarray(x, dtype=float)
        tau = self.tau
        bulk = np.maximum(x, 1.0) ** (-1.0 / self.gamma_prime)
        tail = self.tail_prob * (np.maximum(x, tau) / tau) ** (-1.0 / self.gamma_index)
        return np.where(x < 1.0, 1.0, np.where(x <= tau, bulk, tail))

    def cdf(self, x):
        return 1.0 - self.survival(x)

    def quantile(self, u):
        u = np.asarray(u, dtype=float)
        s = 1.0 - u
        bulk = s**(-self.gamma_prime)
        tail = self.tau * (s / self.tail_prob) ** (-self.gamma_index)
        return np.where(s >= self.tail_prob, bulk, tail)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return self.quantile(1.0 - _uniforms(rng, n))

    def describe(self) -> str:
        return f"pcp:{_fmt_param(self.gamma_prime)}:{_fmt_param(self.gamma_index)}:{_fmt_param(self.tail_prob)}"


DistributionSpec = (
    Pareto | CounterExample | SymmetricStable | Perturb | Frechet | ParetoChangePoint
)


def parse_distribution(text: str) -> DistributionSpec:
    """Parse a CLI distribution spec.

    Syntax: pareto:<alpha> | counter:<alpha>:<s> | stable:<alpha> |
    perturb:<alpha>:<beta> | frechet:<gamma>[:<shift>] | pcp:<g'>:<g>:<tail_prob>
    """
    parts = text.split(":")
    kind = parts[0]
    try:
        args = [float(p) for p in parts[1:]]
    except ValueError as exc:
        raise ValueError(f"bad distribution spec {text!r}: {exc}") from exc
    arity = {"pareto": (1,), "counter": (2,), "stable": (1,),
             "perturb": (2,), "frechet": (1, 2), "pcp": (3,)}
    if kind not in arity:
        raise ValueError(f"unknown distribution kind {kind!r}")
    if len(args) not in arity[kind]:
        raise ValueError(f"bad distribution spec {text!r}: wrong number of parameters")
    if kind == "pareto":
        return Pareto(args[0])
    if kind == "counter":
        return CounterExample(args[0], args[1])
    if kind == "stable":
        return SymmetricStable(args[0])
    if kind == "perturb":
        return Perturb(args[0], args[1])
    if kind == "frechet":
        return Frechet(args[0], args[1] if len(args) == 2 else 0.0)
    return ParetoChangePoint(args[0], args[1], args[2])
