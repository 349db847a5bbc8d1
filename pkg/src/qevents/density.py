"""Spacetime probability density g(x) = psi^2(x), marginals, conditionals.

g is a nonnegative scalar per cell; with ||psi|| = 1 on V it integrates
to 1 and its quadrature over a cell region is the probability of a
particle-appearance event there. Unnormalized fields produce densities
that are explicitly flagged rather than silently rescaled, so relative
probabilities of non-normalizable states stay meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import WaveFunction, norm_spacetime, norm_spatial
from .lattice import Region, UniformGrid

NORMALIZATION_TOL = 1e-10


class DensityError(ValueError):
    """Invalid density operation."""


class DegenerateSliceError(DensityError):
    """Conditional requested on a zero-probability time slice."""


@dataclass(frozen=True)
class SpacetimeDensity:
    """Nonnegative density per cell plus a normalization flag."""

    grid: UniformGrid
    values: np.ndarray
    normalized: bool

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.n_time, self.grid.n_space):
            raise DensityError(f"density shape {v.shape} mismatches grid")
        floor = -1e-10 * max(1.0, float(np.max(np.abs(v))) if v.size else 1.0)
        if np.min(v) < floor:
            raise DensityError("density has negative values")
        object.__setattr__(self, "values", np.maximum(v, 0.0))

    def total(self) -> float:
        return float(np.sum(self.values)) * self.grid.cell_volume


@dataclass(frozen=True)
class Marginal:
    """1D marginal density on cell centers along one axis."""

    axis: str  # "space" or "time"
    values: np.ndarray
    step: float

    def __post_init__(self):
        object.__setattr__(self, "values",
                           np.asarray(self.values, dtype=float))

    def total(self) -> float:
        return float(np.sum(self.values)) * self.step


def density(psi: WaveFunction) -> SpacetimeDensity:
    """g(cell) = sum_a |psi^a|^2; flagged unnormalized unless ||psi|| = 1.

    Component metric signs are honored for four-vector embeddings; for
    every physical kind (all signs +1) the result is nonnegative by
    construction.
    """
    g = psi.modulus_sq()
    norm_sq = norm_spacetime(psi) ** 2
    normalized = abs(norm_sq - 1.0) <= NORMALIZATION_TOL
    return SpacetimeDensity(psi.grid, g, normalized)


def _require_normalized(g: SpacetimeDensity, op: str):
    if not g.normalized:
        raise DensityError(f"{op} requires a normalized density")


def marginal_spatial(g: SpacetimeDensity) -> Marginal:
    """g1(x) = integral of g over x0; sums to 1 for normalized input."""
    _require_normalized(g, "marginal_spatial")
    values = np.sum(g.values, axis=0) * g.grid.dt
    return Marginal("space", values, g.grid.dx)


def marginal_temporal(g: SpacetimeDensity) -> Marginal:
    """g0(x0) = integral of g over space; sums to 1 for normalized input."""
    _require_normalized(g, "marginal_temporal")
    values = np.sum(g.values, axis=1) * g.grid.dx
    return Marginal("time", values, g.grid.dt)


def conditional_spatial(g: SpacetimeDensity, it: int) -> Marginal:
    """Fixed-time density g1(x | x0) = g(x0, x) / g0(x0)."""
    _require_normalized(g, "conditional_spatial")
    if not 0 <= it < g.grid.n_time:
        raise DensityError(f"time index {it} out of bounds")
    g0 = float(np.sum(g.values[it])) * g.grid.dx
    if g0 <= 0.0:
        raise DegenerateSliceError(f"temporal marginal vanishes at it={it}")
    return Marginal("space", g.values[it] / g0, g.grid.dx)


def region_probability(g: SpacetimeDensity, region: Region) -> float:
    """P(Q) = sum over member cells of g * w, a value in [0, 1]."""
    _require_normalized(g, "region_probability")
    if region.grid != g.grid:
        raise DensityError("region lives on a different grid")
    if region.n_cells == 0:
        return 0.0
    flat = g.values.reshape(-1)
    return float(flat[list(region.flat_indices)].sum()) * g.grid.cell_volume


def relative_probability(g: SpacetimeDensity, q1: Region,
                         q2: Region) -> float:
    """P(Q1)/P(Q2) from unnormalized region sums (scale invariant)."""
    flat = g.values.reshape(-1)
    w = g.grid.cell_volume
    p1 = float(flat[list(q1.flat_indices)].sum()) * w if q1.n_cells else 0.0
    p2 = float(flat[list(q2.flat_indices)].sum()) * w if q2.n_cells else 0.0
    if p2 <= 0.0:
        raise DensityError("relative probability with vanishing denominator")
    return p1 / p2


@dataclass(frozen=True)
class ElectronTemporalReport:
    """Deviation of the electron's temporal marginal from 1/cT."""

    max_relative_deviation: float
    marginal_mean: float
    expected_value: float
    rescaled_norm_error: float


def electron_temporal_check(psi: WaveFunction) -> ElectronTemporalReport:
    """Verify g0(x0) = const = 1/cT for a Dirac mode superposition.

    Also confirms the rescaling psi = (cT)^(-1/2) u: a field u with unit
    fixed-time norm acquires unit spacetime norm after division by
    sqrt(cT).
    """
    if psi.kind.name != "electron":
        raise DensityError("electron_temporal_check expects an electron field")
    ct = psi.grid.box.time_extent
    g = psi.modulus_sq()
    g0 = np.sum(g, axis=1) * psi.grid.dx
    norm_sq = norm_spacetime(psi) ** 2
    expected = norm_sq / ct
    max_dev = float(np.max(np.abs(g0 - expected)) / expected)

    # rescale branch: unit fixed-time slice -> unit spacetime norm / sqrt(cT)
    slice_norm = norm_spatial(psi, 0)
    if slice_norm == 0.0:
        raise DensityError("zero field has no temporal law to check")
    u = WaveFunction(psi.grid, psi.kind, psi.values / slice_norm)
    rescaled = WaveFunction(psi.grid, psi.kind, u.values / np.sqrt(ct))
    rescale_err = abs(norm_spacetime(rescaled) - 1.0)
    return ElectronTemporalReport(max_dev, float(np.mean(g0)), expected,
                                  rescale_err)
