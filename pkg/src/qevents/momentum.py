"""Projection onto the plane-wave eigenbasis and occupation numbers.

The expansion coefficients C_k = (psi_k, psi) live in l2; n_k = |C_k|^2
is the four-momentum occupation spectrum, a probability distribution
once ||C|| = 1. Charge bookkeeping reads the frequency-sign labels of a
complex scalar's doubled basis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import (WaveFunction, _check_band_limit, evaluate_mode,
                     norm_spacetime)


class MomentumError(ValueError):
    """Invalid decomposition or spectrum request."""


@dataclass(frozen=True)
class ModeCoefficients:
    """Expansion coefficients over a fixed mode list, plus the residual
    norm of the part of the field outside the span."""

    modes: tuple
    coefficients: np.ndarray
    residual: float

    def __post_init__(self):
        object.__setattr__(self, "coefficients",
                           np.asarray(self.coefficients, dtype=complex))

    @property
    def occupations(self) -> np.ndarray:
        return np.abs(self.coefficients) ** 2

    @property
    def total_occupation(self) -> float:
        return float(np.sum(self.occupations))

    def four_momenta(self) -> np.ndarray:
        return np.array([m.four_momentum for m in self.modes])


def _mode_matrix(modes, grid) -> np.ndarray:
    """Stacked mode values, shape (M, n_time*n_space*m)."""
    T, X = grid.centers_mesh()
    rows = [evaluate_mode(m, T, X).reshape(-1) for m in modes]
    return np.array(rows)


def decompose(psi: WaveFunction, modes) -> ModeCoefficients:
    """C_k = (psi_k, psi) by grid quadrature; Gram-validated basis.

    The mode set must be band limited for psi's grid and pairwise
    orthonormal under the discrete inner product (distinct lattice
    indices always are; equal-|n| pairs of opposite frequency are only
    orthogonal when the box aligns their beat, so generic massive +-
    pairs are rejected here). The residual norm reports any part of psi
    outside the span.
    """
    modes = list(modes)
    if not modes:
        raise MomentumError("empty mode list")
    grid = psi.grid
    for m in modes:
        if m.kind != psi.kind:
            raise MomentumError("mode kind does not match the field")
        _check_band_limit(m, grid)
    A = _mode_matrix(modes, grid)
    w = grid.cell_volume
    gram = (np.conj(A) @ A.T) * w
    defect = np.max(np.abs(gram - np.eye(len(modes))))
    if defect > 1e-8:
        raise MomentumError(
            f"mode set is not orthonormal on this grid (defect {defect:.3g})")
    flat = psi.values.reshape(-1)
    coeffs = (np.conj(A) @ flat) * w
    recon = A.T @ coeffs
    residual = float(np.sqrt(np.sum(np.abs(flat - recon) ** 2) * w))
    return ModeCoefficients(tuple(modes), coeffs, residual)


def reconstruct(coeffs: ModeCoefficients, grid) -> WaveFunction:
    """Synthesize the field back from its coefficients."""
    from .fields import synthesize
    return synthesize(list(coeffs.modes), coeffs.coefficients, grid)


def parseval_defect(psi: WaveFunction, coeffs: ModeCoefficients) -> float:
    """|sum n_k - ||psi||^2|, zero for band-limited fields."""
    return abs(coeffs.total_occupation - norm_spacetime(psi) ** 2)


def _require_unit(coeffs: ModeCoefficients, what: str):
    if abs(coeffs.total_occupation - 1.0) > 1e-8:
        raise MomentumError(f"{what} requires ||C|| = 1, "
                            f"got {coeffs.total_occupation}")


def mean_four_momentum(coeffs: ModeCoefficients) -> tuple:
    """(sum n_k p0_k, sum n_k p1_k) for a unit coefficient vector."""
    _require_unit(coeffs, "mean_four_momentum")
    p = coeffs.four_momenta()
    n = coeffs.occupations
    mean = n @ p
    return float(mean[0]), float(mean[1])


def charge_expectation(coeffs: ModeCoefficients) -> float:
    """Positive- minus negative-frequency occupation (unit charge)."""
    kind = coeffs.modes[0].kind
    if kind.name != "complex_scalar":
        raise MomentumError(
            f"charge is defined for the complex scalar, not {kind.name}")
    _require_unit(coeffs, "charge_expectation")
    signs = np.array([m.frequency_sign for m in coeffs.modes])
    return float(np.sum(coeffs.occupations * signs))


def fixed_time_spectrum(psi: WaveFunction, modes, it: int) -> np.ndarray:
    """Diagnostic: normalized fixed-time projection weights at slice it.

    Projects psi(t_it, .) onto the modes' fixed-time profiles with the
    spatial quadrature only. The textbook conditional-at-t distribution
    is reported for comparison with the spacetime occupations; no
    coincidence is asserted.
    """
    grid = psi.grid
    if not 0 <= it < grid.n_time:
        raise MomentumError(f"time index {it} out of bounds")
    t = grid.t_centers[it]
    x = grid.x_centers
    weights = []
    for m in modes:
        row = evaluate_mode(m, np.full_like(x, t), x)
        # unit fixed-time normalization of the projector profile
        row_norm = np.sqrt(np.sum(np.abs(row) ** 2) * grid.dx)
        c = np.sum(np.conj(row) * psi.values[it]) * grid.dx / row_norm
        weights.append(abs(c) ** 2)
    weights = np.asarray(weights)
    total = weights.sum()
    if total == 0.0:
        raise MomentumError("zero slice has no spectrum")
    return weights / total
