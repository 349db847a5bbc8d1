"""Truncated Fock space: occupation states, ladder operators, and the
region particle-count operators synthesized from one-particle kernels.

The dense path enumerates every occupation tuple with total N up to a
ceiling (variable-N sector) over a small one-particle basis and realizes
operators as explicit sparse matrices, which keeps every algebraic
identity open to brute-force verification. The single-occupancy cell
sector used by the one-particle/field equivalence gets a light
representation indexed directly by grid cells, so it scales to the
refinement grids without materializing tuples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import sparse

from .fields import WaveFunction, evaluate_mode
from .lattice import Region, UniformGrid


class FockError(ValueError):
    """Invalid Fock-space construction or operation."""


class TruncationError(FockError):
    """Creation would push amplitude beyond the particle-number ceiling."""


def _enumerate_tuples(n_modes: int, max_total: int, fermi: bool):
    states = []

    def rec(prefix, remaining):
        if len(prefix) == n_modes:
            states.append(tuple(prefix))
            return
        cap = min(remaining, 1) if fermi else remaining
        for k in range(cap + 1):
            rec(prefix + [k], remaining - k)

    rec([], max_total)
    return tuple(states)


@dataclass(frozen=True)
class OccupationBasis:
    """Dense variable-N sector: all tuples with sum n_i <= max_total.

    statistics: "bose" (n_i unbounded up to the ceiling) or "fermi"
    (n_i in {0, 1}). Labels are positional; callers attach meaning
    (momentum modes, polarization-doubled modes, or grid cells).
    """

    statistics: str
    n_modes: int
    max_total: int

    def __post_init__(self):
        if self.statistics not in ("bose", "fermi"):
            raise FockError(f"unknown statistics {self.statistics!r}")
        if self.n_modes < 1 or self.max_total < 0:
            raise FockError("need n_modes >= 1 and max_total >= 0")

    @cached_property
    def tuples(self) -> tuple:
        return _enumerate_tuples(self.n_modes, self.max_total,
                                 self.statistics == "fermi")

    @cached_property
    def index(self) -> dict:
        return {n: i for i, n in enumerate(self.tuples)}

    @cached_property
    def totals(self) -> np.ndarray:
        return np.array([sum(n) for n in self.tuples])

    @property
    def dim(self) -> int:
        return len(self.tuples)

    def annihilation_matrix(self, i: int) -> sparse.csr_matrix:
        """a_i with Bose factor sqrt(n_i) or the ordered Fermi sign."""
        if not 0 <= i < self.n_modes:
            raise FockError(f"mode index {i} out of range")
        rows, cols, data = [], [], []
        for s, n in enumerate(self.tuples):
            if n[i] == 0:
                continue
            target = list(n)
            target[i] -= 1
            t = self.index[tuple(target)]
            if self.statistics == "bose":
                amp = np.sqrt(n[i])
            else:
                amp = (-1.0) ** sum(n[:i])
            rows.append(t)
            cols.append(s)
            data.append(amp)
        return sparse.csr_matrix((data, (rows, cols)),
                                 shape=(self.dim, self.dim))

    def creation_matrix(self, i: int) -> sparse.csr_matrix:
        """a_i^+ as the adjoint; the top-N sector truncates to zero."""
        return self.annihilation_matrix(i).conj().T.tocsr()


@dataclass(frozen=True)
class CellBasis:
    """Single-occupancy (N = 1) sector over grid cells, states = cells."""

    grid: UniformGrid

    @property
    def n_modes(self) -> int:
        return self.grid.n_cells

    @property
    def dim(self) -> int:
        return self.grid.n_cells


@dataclass(frozen=True)
class FockState:
    """Amplitudes over basis states; cell-sector states carry the
    Eq.-style quadrature weights w(cell) in their inner product."""

    basis: object
    amplitudes: np.ndarray
    weights: np.ndarray | None = None

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex)
        if a.ndim == 1:
            a = a[:, None]
        if a.shape[0] != self.basis.dim:
            raise FockError(f"amplitude length {a.shape[0]} != basis dim "
                            f"{self.basis.dim}")
        object.__setattr__(self, "amplitudes", a)
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=float).reshape(-1)
            if w.size != self.basis.dim:
                raise FockError("weights length mismatch")
            object.__setattr__(self, "weights", w)

    def _weight_vector(self) -> np.ndarray:
        if self.weights is None:
            return np.ones(self.basis.dim)
        return self.weights

    def norm_sq(self) -> float:
        dens = np.sum(np.abs(self.amplitudes) ** 2, axis=1)
        return float(np.sum(dens * self._weight_vector()))

    def normalized(self, tol: float = 1e-10) -> bool:
        return abs(self.norm_sq() - 1.0) <= tol


def vacuum_state(basis: OccupationBasis) -> FockState:
    amps = np.zeros(basis.dim, dtype=complex)
    amps[basis.index[(0,) * basis.n_modes]] = 1.0
    return FockState(basis, amps)


def basis_state(basis: OccupationBasis, occupation) -> FockState:
    amps = np.zeros(basis.dim, dtype=complex)
    amps[basis.index[tuple(occupation)]] = 1.0
    return FockState(basis, amps)


def apply_annihilation(i: int, state: FockState) -> FockState:
    if not isinstance(state.basis, OccupationBasis):
        raise FockError("ladder operators need a dense occupation basis")
    mat = state.basis.annihilation_matrix(i)
    return FockState(state.basis, mat @ state.amplitudes, state.weights)


def apply_creation(i: int, state: FockState) -> FockState:
    """a_i^+ on a state; amplitude at the ceiling would overflow the
    truncation and is an error (Fermi double occupation is simply 0)."""
    basis = state.basis
    if not isinstance(basis, OccupationBasis):
        raise FockError("ladder operators need a dense occupation basis")
    dens = np.sum(np.abs(state.amplitudes) ** 2, axis=1)
    at_ceiling = basis.totals == basis.max_total
    if basis.statistics == "fermi":
        addable = np.array([n[i] == 0 for n in basis.tuples])
        blocked = at_ceiling & addable
    else:
        blocked = at_ceiling
    if np.any(dens[blocked] > 0.0):
        raise TruncationError(
            f"creation on mode {i} overflows max_total={basis.max_total}")
    mat = basis.creation_matrix(i)
    return FockState(basis, mat @ state.amplitudes, state.weights)


@dataclass(frozen=True)
class OneBodyOperator:
    """Lambda = sum_ij l_ij a_i^+ a_j over a one-particle kernel l."""

    basis: object
    kernel: np.ndarray
    hermitian: bool = True

    def __post_init__(self):
        k = np.asarray(self.kernel, dtype=complex)
        if k.shape != (self.basis.n_modes, self.basis.n_modes):
            raise FockError(f"kernel shape {k.shape} mismatches basis")
        if self.hermitian and np.max(np.abs(k - k.conj().T)) > 1e-12:
            raise FockError("kernel flagged Hermitian is not")
        object.__setattr__(self, "kernel", k)

    @cached_property
    def matrix(self) -> sparse.csr_matrix:
        """Number-conserving sparse action on the dense tuple space."""
        basis = self.basis
        if not isinstance(basis, OccupationBasis):
            raise FockError("matrix form needs a dense occupation basis")
        fermi = basis.statistics == "fermi"
        rows, cols, data = [], [], []
        k = self.kernel
        for s, n in enumerate(basis.tuples):
            diag = sum(k[i, i] * n[i] for i in range(basis.n_modes) if n[i])
            if diag != 0.0:
                rows.append(s)
                cols.append(s)
                data.append(diag)
            for j in range(basis.n_modes):
                if n[j] == 0:
                    continue
                for i in range(basis.n_modes):
                    if i == j or k[i, j] == 0.0:
                        continue
                    if fermi and n[i] == 1:
                        continue
                    target = list(n)
                    target[j] -= 1
                    target[i] += 1
                    t = basis.index[tuple(target)]
                    if fermi:
                        sign_j = (-1.0) ** sum(n[:j])
                        after = list(n)
                        after[j] -= 1
                        sign_i = (-1.0) ** sum(after[:i])
                        amp = sign_i * sign_j * k[i, j]
                    else:
                        amp = k[i, j] * np.sqrt(n[j] * (n[i] + 1))
                    rows.append(t)
                    cols.append(s)
                    data.append(amp)
        return sparse.csr_matrix((data, (rows, cols)),
                                 shape=(basis.dim, basis.dim))

    def add(self, other: "OneBodyOperator") -> "OneBodyOperator":
        if other.basis != self.basis:
            raise FockError("operators live on different bases")
        return OneBodyOperator(self.basis, self.kernel + other.kernel,
                               self.hermitian and other.hermitian)


def mode_kernel_on_region(modes, grid: UniformGrid, region: Region
                          ) -> np.ndarray:
    """l_ij(Q) = sum over Q of conj(psi_i) psi_j w by grid quadrature.

    Multi-component modes contract with the spinor inner product
    sum_a conj(u_i^a) u_j^a.
    """
    T, X = grid.centers_mesh()
    mask = region.mask().reshape(-1)
    vals = [evaluate_mode(m, T, X).reshape(grid.n_cells, -1) for m in modes]
    M = len(modes)
    kernel = np.zeros((M, M), dtype=complex)
    for i in range(M):
        vi = vals[i][mask]
        for j in range(M):
            kernel[i, j] = np.sum(np.conj(vi) * vals[j][mask]) \
                * grid.cell_volume
    return kernel


def one_body_operator_from_kernel(apply_l, modes, grid: UniformGrid,
                                  basis) -> OneBodyOperator:
    """l_ij = (psi_i, L psi_j) with L given as a callable on sampled
    mode fields: apply_l(values, mode) -> values (same shape)."""
    if basis.n_modes != len(modes):
        raise FockError("basis size does not match the mode list")
    T, X = grid.centers_mesh()
    vals = [evaluate_mode(m, T, X) for m in modes]
    lvals = [np.asarray(apply_l(v.copy(), m)) for v, m in zip(vals, modes)]
    M = len(modes)
    kernel = np.zeros((M, M), dtype=complex)
    for i in range(M):
        for j in range(M):
            kernel[i, j] = np.sum(np.conj(vals[i]) * lvals[j]) \
                * grid.cell_volume
    hermitian = np.max(np.abs(kernel - kernel.conj().T)) <= 1e-10
    return OneBodyOperator(basis, kernel, hermitian)


def lambda_region(region: Region, modes, grid: UniformGrid,
                  basis) -> OneBodyOperator:
    """Region count operator: kernel l_ij(Q), the canonical form."""
    if basis.n_modes != len(modes):
        raise FockError("basis size does not match the mode list")
    kernel = mode_kernel_on_region(modes, grid, region)
    kernel = 0.5 * (kernel + kernel.conj().T)  # symmetrize roundoff
    return OneBodyOperator(basis, kernel, hermitian=True)


def expected_count(state: FockState, op: OneBodyOperator) -> float:
    """<N> = (Phi, Lambda Phi), real for Hermitian kernels."""
    if op.basis != state.basis:
        raise FockError("state and operator bases differ")
    if isinstance(state.basis, CellBasis):
        diag = np.diag(op.kernel)
        if np.max(np.abs(op.kernel - np.diag(diag))) > 0.0:
            raise FockError("cell-sector operators must be diagonal")
        dens = np.sum(np.abs(state.amplitudes) ** 2, axis=1)
        return float(np.real(np.sum(diag * dens * state._weight_vector())))
    mat = op.matrix
    total = 0.0 + 0.0j
    for comp in range(state.amplitudes.shape[1]):
        vec = state.amplitudes[:, comp]
        total += np.vdot(vec, mat @ vec)
    return float(np.real(total))


def event_probability(state: FockState, predicate) -> float:
    """Probability sum of |Phi(n)|^2 * weight over tuples passing the
    predicate (a callable on occupation tuples)."""
    if not isinstance(state.basis, OccupationBasis):
        raise FockError("event probabilities need a dense basis")
    dens = np.sum(np.abs(state.amplitudes) ** 2, axis=1)
    w = state._weight_vector()
    keep = np.array([bool(predicate(n)) for n in state.basis.tuples])
    return float(np.sum(dens[keep] * w[keep]))


@dataclass(frozen=True)
class SpecializedLambda:
    """Normal-ordered region counter from the field-operator square.

    `kept` is the number-conserving sector (the canonical form);
    the pair kernels hold the coefficients of a_u^+ a_v^+ and a_u a_v,
    and `vacuum_constant` multiplies the identity. The exact operator
    identity  total = kept + pairs + vacuum * I  holds on every column
    below the truncation ceiling.
    """

    kept: OneBodyOperator
    vacuum_constant: float
    pair_create_kernel: np.ndarray
    pair_annihilate_kernel: np.ndarray
    field_kind: str


def specialized_lambda(kind_name: str, region: Region, modes,
                       grid: UniformGrid, basis) -> SpecializedLambda:
    """Region counters of the concrete free fields, normal ordered.

    kind_name "neutral_scalar": self-adjoint field over M real-scalar
    modes (basis has M labels). "photon": two transverse polarization
    families over the same M spacetime profiles (basis has 2M labels).
    "charged_scalar": particle family a and antiparticle family b
    (basis has 2M labels, a first).
    """
    M = len(modes)
    l = mode_kernel_on_region(modes, grid, region)
    l = 0.5 * (l + l.conj().T)
    # pair integrals over Q without conjugation: int psi_i psi_j
    T, X = grid.centers_mesh()
    mask = region.mask().reshape(-1)
    vals = [evaluate_mode(m, T, X).reshape(grid.n_cells, -1) for m in modes]
    pair = np.zeros((M, M), dtype=complex)
    for i in range(M):
        for j in range(M):
            pair[i, j] = np.sum(vals[i][mask] * vals[j][mask]) \
                * grid.cell_volume

    if kind_name == "neutral_scalar":
        if basis.n_modes != M:
            raise FockError("neutral scalar basis needs M labels")
        kept = OneBodyOperator(basis, l, hermitian=True)
        return SpecializedLambda(kept, float(np.real(0.5 * np.trace(l))),
                                 0.5 * np.conj(pair), 0.5 * pair, kind_name)

    if kind_name == "photon":
        if basis.n_modes != 2 * M:
            raise FockError("photon basis needs 2M labels (polarizations)")
        zeros = np.zeros_like(l)
        kept = OneBodyOperator(basis, np.block([[l, zeros], [zeros, l]]),
                               hermitian=True)
        zero_p = np.zeros_like(pair)
        create = 0.5 * np.block([[np.conj(pair), zero_p],
                                 [zero_p, np.conj(pair)]])
        annih = 0.5 * np.block([[pair, zero_p], [zero_p, pair]])
        return SpecializedLambda(kept, float(np.real(np.trace(l))),
                                 create, annih, kind_name)

    if kind_name == "charged_scalar":
        if basis.n_modes != 2 * M:
            raise FockError("charged scalar basis needs 2M labels (a then b)")
        zeros = np.zeros_like(l)
        kept = OneBodyOperator(basis, np.block([[l, zeros], [zeros, l]]),
                               hermitian=True)
        create = np.zeros((2 * M, 2 * M), dtype=complex)
        annih = np.zeros((2 * M, 2 * M), dtype=complex)
        create[:M, M:] = np.conj(pair)
        annih[M:, :M] = pair
        return SpecializedLambda(kept, float(np.real(np.trace(l))),
                                 create, annih, kind_name)

    raise FockError(f"unsupported field kind {kind_name!r}")


def pair_matrices(spec: SpecializedLambda) -> sparse.csr_matrix:
    """Sparse matrix of the off-sector (pair) part on the dense basis."""
    basis = spec.kept.basis
    create = [basis.creation_matrix(i) for i in range(basis.n_modes)]
    annih = [basis.annihilation_matrix(i) for i in range(basis.n_modes)]
    total = sparse.csr_matrix((basis.dim, basis.dim), dtype=complex)
    kc, ka = spec.pair_create_kernel, spec.pair_annihilate_kernel
    for u in range(basis.n_modes):
        for v in range(basis.n_modes):
            if kc[u, v] != 0.0:
                total = total + kc[u, v] * (create[u] @ create[v])
            if ka[u, v] != 0.0:
                total = total + ka[u, v] * (annih[u] @ annih[v])
    return total


def cell_basis_count(region: Region, basis) -> OneBodyOperator:
    """Diagonal counter over cell labels: eigenvalue sum of n(cell in Q)."""
    grid = region.grid
    if basis.n_modes != grid.n_cells:
        raise FockError("basis labels must be the grid cells")
    diag = region.mask().reshape(-1).astype(float)
    return OneBodyOperator(basis, np.diag(diag), hermitian=True)


def single_particle_subsystem(psi: WaveFunction) -> FockState:
    """N = 1 cell-sector state Phi(cell) = psi(cell), weighted by w.

    Multi-component fields keep their components in the amplitude; the
    norm sums the component moduli, so ||Phi|| = ||psi|| and the
    expected count over any cell region reproduces the density's region
    probability as the identical finite sum.
    """
    basis = CellBasis(psi.grid)
    amps = psi.values.reshape(psi.grid.n_cells, psi.n_components)
    weights = np.full(psi.grid.n_cells, psi.grid.cell_volume)
    return FockState(basis, amps, weights)


def number_operator(basis) -> OneBodyOperator:
    return OneBodyOperator(basis, np.eye(basis.n_modes), hermitian=True)
