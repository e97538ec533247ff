"""Candidate grids for the extreme sample size and the admissibility floor k0.

The default is the geometric grid K = {floor(beta^m), 1 <= m <= M} with
M = floor(log n / log beta).  Following the convention used with such grids,
the nominal size |K| entering the union-bound correction delta/|K| is the
pre-deduplication count M even when several floor(beta^m) collide; a distinct
point count is available via `len(grid.points)`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Grid",
    "NoAdmissibleK",
    "geometric_grid",
    "linear_grid",
    "explicit_grid",
    "parse_grid_spec",
    "k0",
    "k0_upper_bound",
]


class NoAdmissibleK(ValueError):
    """No grid point keeps the deviation term below 1/2."""


@dataclass(frozen=True)
class Grid:
    """Strictly increasing candidate set plus the nominal size used for delta_K."""

    points: tuple[int, ...]
    nominal_size: int
    kind: str = "explicit"
    param: float | None = None

    def __post_init__(self) -> None:
        if not self.points:
            raise ValueError("grid has no points")
        if any(b <= a for a, b in zip(self.points, self.points[1:])):
            raise ValueError("grid points must be strictly increasing")
        if self.points[0] < 1:
            raise ValueError("grid points must be >= 1")
        if self.nominal_size < len(self.points):
            raise ValueError("nominal_size cannot be smaller than the point count")

    def points_array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=np.int64)

    def describe(self) -> str:
        if self.kind == "geometric":
            beta = repr(float(self.param))
            return "geometric:" + (beta[:-2] if beta.endswith(".0") else beta)
        if self.kind == "linear":
            return f"linear:{int(self.param)}"
        return "explicit:" + ",".join(str(p) for p in self.points)


def geometric_grid(n: int, beta: float, count_distinct: bool = False) -> Grid:
    """K = {floor(beta^m), 1 <= m <= floor(log n / log beta)}, de-duplicated.

    The nominal size defaults to the pre-deduplication exponent count
    floor(log n / log beta), the usual convention for the union-bound
    correction even though small floor(beta^m) collide; pass
    ``count_distinct=True`` to use the distinct point count instead.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if beta <= 1:
        raise ValueError(f"beta must exceed 1, got {beta}")
    nominal = int(math.floor(math.log(n) / math.log(beta) + 1e-9))
    points = sorted({int(math.floor(beta**m)) for m in range(1, nominal + 1)})
    return Grid(
        points=tuple(points),
        nominal_size=len(points) if count_distinct else nominal,
        kind="geometric",
        param=beta,
    )


def linear_grid(n: int, m_count: int) -> Grid:
    """K = {floor(m * n / M), 1 <= m <= M}, de-duplicated, zeros removed."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if not 1 <= m_count <= n:
        raise ValueError(f"M must satisfy 1 <= M <= n, got {m_count}")
    points = sorted({(m * n) // m_count for m in range(1, m_count + 1)} - {0})
    return Grid(points=tuple(points), nominal_size=m_count, kind="linear", param=float(m_count))


def explicit_grid(points) -> Grid:
    pts = sorted({int(p) for p in points})
    return Grid(points=tuple(pts), nominal_size=len(pts), kind="explicit")


def parse_grid_spec(text: str, n: int) -> Grid:
    """Build a grid from a CLI spec: geometric:<beta> | linear:<M> | explicit:<k1,k2,...>."""
    kind, _, arg = text.partition(":")
    if kind == "geometric":
        return geometric_grid(n, float(arg))
    if kind == "linear":
        return linear_grid(n, int(arg))
    if kind == "explicit":
        return explicit_grid(int(p) for p in arg.split(","))
    raise ValueError(f"unknown grid spec {text!r}")


def k0(grid: Grid, delta: float, table) -> int:
    """Smallest grid point whose tabulated deviation value is below 1/2.

    The stopping rule divides by 1 - 2 V(k, delta_K), so candidates only make
    sense from this point on.  `table` must have been built for exactly this
    grid and delta.
    """
    if tuple(table.grid_points) != tuple(grid.points):
        raise ValueError("deviation table was built for a different grid")
    expected = delta / grid.nominal_size
    if not math.isclose(table.delta_grid, expected, rel_tol=1e-12):
        raise ValueError(
            f"deviation table was built for delta_grid={table.delta_grid}, "
            f"expected {expected}"
        )
    for k in grid.points:
        if table.value_at(k) < 0.5:
            return k
    raise NoAdmissibleK(
        f"V(k, {table.delta_grid:.3g}) >= 1/2 at every grid point "
        f"(largest k = {grid.points[-1]})"
    )


def k0_upper_bound(grid_nominal_size: int, delta: float) -> float:
    """Explicit control 36 log(4 |K| / delta) of the admissibility floor."""
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    return 36.0 * math.log(4.0 * grid_nominal_size / delta)
