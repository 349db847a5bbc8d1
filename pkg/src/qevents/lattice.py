"""Finite 1+1D spacetime box, uniform cell decomposition, and regions.

Everything lives in natural units (hbar = c = 1) with metric signature
(-, +): the Minkowski product of events a, b is a1*b1 - a0*b0. The box
is V = (0, time_extent) x (0, space_extent); a uniform grid splits it
into n_time x n_space cells of identical volume w. Regions are
duplicate-free, cell-aligned unions of cells.

All containers here are immutable after construction and safe to share
across workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Diagonal Minkowski metric for index order (time, space).
METRIC_SIGNATURE = (-1.0, 1.0)


def minkowski_product(a, b) -> float:
    """Product a.b = a1*b1 - a0*b0 for events/momenta (p0, p1)."""
    return a[1] * b[1] - a[0] * b[0]


def minkowski_interval(a) -> float:
    """Invariant square a.a of a single event or four-momentum."""
    return minkowski_product(a, a)


class LatticeError(ValueError):
    """Invalid box, grid, or region construction."""


@dataclass(frozen=True)
class SpacetimeBox:
    """The bar V = (0, time_extent) x (0, space_extent), extents > 0."""

    time_extent: float
    space_extent: float

    def __post_init__(self):
        if not (self.time_extent > 0.0 and self.space_extent > 0.0):
            raise LatticeError(
                f"box extents must be positive, got "
                f"({self.time_extent}, {self.space_extent})"
            )

    @property
    def volume(self) -> float:
        return self.time_extent * self.space_extent

    def contains(self, t, x) -> bool:
        return 0.0 <= t <= self.time_extent and 0.0 <= x <= self.space_extent


@dataclass(frozen=True)
class UniformGrid:
    """Uniform n_time x n_space cell decomposition of a box.

    Cell (it, ix) covers [it*dt, (it+1)*dt] x [ix*dx, (ix+1)*dx]; field
    values are sampled at cell centers.
    """

    box: SpacetimeBox
    n_time: int
    n_space: int

    def __post_init__(self):
        if self.n_time < 2 or self.n_space < 2:
            raise LatticeError(
                f"need at least 2 cells per axis, got "
                f"{self.n_time}x{self.n_space}"
            )

    @property
    def dt(self) -> float:
        return self.box.time_extent / self.n_time

    @property
    def dx(self) -> float:
        return self.box.space_extent / self.n_space

    @property
    def cell_volume(self) -> float:
        return self.dt * self.dx

    @property
    def n_cells(self) -> int:
        return self.n_time * self.n_space

    @property
    def t_centers(self) -> np.ndarray:
        return (np.arange(self.n_time) + 0.5) * self.dt

    @property
    def x_centers(self) -> np.ndarray:
        return (np.arange(self.n_space) + 0.5) * self.dx

    def cell_center(self, it: int, ix: int) -> tuple[float, float]:
        if not (0 <= it < self.n_time and 0 <= ix < self.n_space):
            raise LatticeError(f"cell index ({it}, {ix}) out of bounds")
        return ((it + 0.5) * self.dt, (ix + 0.5) * self.dx)

    def centers_mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """(T, X) arrays of shape (n_time, n_space) with cell centers."""
        return np.meshgrid(self.t_centers, self.x_centers, indexing="ij")

    def cell_of_event(self, t: float, x: float) -> tuple[int, int]:
        """Cell containing an interior event (boundary points clip inward)."""
        if not self.box.contains(t, x):
            raise LatticeError(f"event ({t}, {x}) outside the box")
        it = min(int(t / self.dt), self.n_time - 1)
        ix = min(int(x / self.dx), self.n_space - 1)
        return it, ix


def build_grid(box: SpacetimeBox, n_time: int, n_space: int) -> UniformGrid:
    """Uniform grid over the box; rejects cell counts < 2 per axis."""
    return UniformGrid(box, n_time, n_space)


@dataclass(frozen=True)
class Region:
    """Duplicate-free union of grid cells, stored as sorted flat indices."""

    grid: UniformGrid
    flat_indices: tuple = field(default=())

    def __post_init__(self):
        idx = np.asarray(self.flat_indices, dtype=np.int64)
        if idx.size:
            if idx.min() < 0 or idx.max() >= self.grid.n_cells:
                raise LatticeError("region cell index outside the grid")
            if np.unique(idx).size != idx.size:
                raise LatticeError("duplicate cells in region")
        object.__setattr__(self, "flat_indices", tuple(np.sort(idx).tolist()))

    @property
    def n_cells(self) -> int:
        return len(self.flat_indices)

    @property
    def volume(self) -> float:
        return self.n_cells * self.grid.cell_volume

    def mask(self) -> np.ndarray:
        """Boolean membership mask of shape (n_time, n_space)."""
        m = np.zeros(self.grid.n_cells, dtype=bool)
        m[list(self.flat_indices)] = True
        return m.reshape(self.grid.n_time, self.grid.n_space)

    def cells(self):
        """Iterate member cells as (it, ix) pairs in flat order."""
        ns = self.grid.n_space
        for f in self.flat_indices:
            yield f // ns, f % ns

    def union(self, other: "Region") -> "Region":
        if other.grid is not self.grid and other.grid != self.grid:
            raise LatticeError("regions live on different grids")
        joint = sorted(set(self.flat_indices) | set(other.flat_indices))
        return Region(self.grid, tuple(joint))

    def is_disjoint(self, other: "Region") -> bool:
        return not set(self.flat_indices) & set(other.flat_indices)

    def issubset(self, other: "Region") -> bool:
        return set(self.flat_indices) <= set(other.flat_indices)


def full_region(grid: UniformGrid) -> Region:
    return Region(grid, tuple(range(grid.n_cells)))


def region_from_mask(grid: UniformGrid, mask: np.ndarray) -> Region:
    flat = np.flatnonzero(np.asarray(mask, dtype=bool).reshape(-1))
    return Region(grid, tuple(flat.tolist()))


def region_from_subbox(grid: UniformGrid, t_range, x_range) -> Region:
    """Minimal set of cells covering the sub-box t_range x x_range.

    A cell is included iff its interior overlaps the requested sub-box
    (zero-measure edge contact does not count). Disjoint requests yield
    an empty region; inverted intervals are rejected.
    """
    t_lo, t_hi = map(float, t_range)
    x_lo, x_hi = map(float, x_range)
    if t_lo > t_hi or x_lo > x_hi:
        raise LatticeError(f"inverted interval: {t_range}, {x_range}")

    def overlapping(lo, hi, step, n):
        edges = np.arange(n + 1) * step
        keep = (edges[:-1] < hi) & (edges[1:] > lo)
        return np.flatnonzero(keep)

    its = overlapping(t_lo, t_hi, grid.dt, grid.n_time)
    ixs = overlapping(x_lo, x_hi, grid.dx, grid.n_space)
    if its.size == 0 or ixs.size == 0:
        return Region(grid, ())
    flat = (its[:, None] * grid.n_space + ixs[None, :]).reshape(-1)
    return Region(grid, tuple(flat.tolist()))
