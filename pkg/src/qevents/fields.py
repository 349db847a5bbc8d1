"""Plane-wave modes and multi-component wave functions on the box.

Modes are exact solutions e^{i(p1*x - p0*t)} with four-momentum on the
mass shell p.p = p1^2 - p0^2 = -mass^2, spatial momenta on the periodic
lattice p1 = 2*pi*n/L, and amplitude fixed by unit spacetime norm on V.
Wave functions are sampled at cell centers; norms and inner products use
midpoint quadrature. A leapfrog Klein-Gordon evolver provides an
independent finite-difference oracle for the free wave dynamics.

Conventions (documented once, used everywhere):
  * natural units hbar = c = 1, metric (-, +);
  * inner products conjugate the FIRST argument;
  * positive-frequency modes are the default; negative frequencies are
    constructed only on request (negative_ok paths);
  * the electron uses the 2D Clifford representation gamma0 = diag(1,-1),
    gamma1 = [[0,1],[-1,0]]; spinor weights are the eigenvectors of
    H(p) = sigma_x * p + sigma_z * m, so the rest spinors are (1,0) and
    (0,1) up to phase.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import SpacetimeBox, UniformGrid, minkowski_interval

MASS_SHELL_TOL = 1e-12


class FieldError(ValueError):
    """Invalid mode or wave-function construction."""


class DegenerateFieldError(FieldError):
    """Operation undefined on the zero field."""


@dataclass(frozen=True)
class ParticleKind:
    """Particle species: component count m and mass in natural units."""

    name: str
    mass: float
    n_components: int

    def __post_init__(self):
        if self.mass < 0:
            raise FieldError(f"negative mass {self.mass}")
        if self.name == "photon" and self.mass != 0.0:
            raise FieldError("photon must be massless")
        if self.name in ("massive_vector", "electron") and self.mass <= 0:
            raise FieldError(f"{self.name} needs a positive mass")


def real_scalar(mass: float = 0.0) -> ParticleKind:
    return ParticleKind("real_scalar", mass, 1)


def complex_scalar(mass: float = 0.0) -> ParticleKind:
    return ParticleKind("complex_scalar", mass, 1)


def massive_vector(mass: float) -> ParticleKind:
    """Massive vector boson stored as its 3 rest-frame spatial components."""
    return ParticleKind("massive_vector", mass, 3)


def photon() -> ParticleKind:
    """Photon stored as the 2 transverse components (u2, u3)."""
    return ParticleKind("photon", 0.0, 2)


def electron(mass: float) -> ParticleKind:
    """1+1D Dirac particle with a 2-component spinor."""
    return ParticleKind("electron", mass, 2)


@dataclass(frozen=True)
class Mode:
    """Single plane-wave eigenfunction weight * a * e^{i(p1 x - p0 t)}.

    `lattice_axis` records which momentum component lies on the discrete
    box lattice ("space" for ordinary modes, "time" for the formal
    axis-exchanged packets, None for boosted/off-lattice modes); `n` is
    the integer index on that lattice. `frequency_sign` labels the sign
    of the derived momentum component.
    """

    kind: ParticleKind
    box: SpacetimeBox
    four_momentum: tuple
    amplitude: float
    weight: tuple  # complex m-vector, unit Euclidean length
    n: int | None = None
    frequency_sign: int = +1
    lattice_axis: str | None = "space"

    @property
    def p0(self) -> float:
        return self.four_momentum[0]

    @property
    def p1(self) -> float:
        return self.four_momentum[1]

    def weight_vector(self) -> np.ndarray:
        return np.asarray(self.weight, dtype=complex)


def _validate_weight(kind: ParticleKind, weight) -> np.ndarray:
    w = np.asarray(weight, dtype=complex).reshape(-1)
    if w.size != kind.n_components:
        raise FieldError(
            f"{kind.name} weight needs {kind.n_components} components, "
            f"got {w.size}"
        )
    norm = np.linalg.norm(w)
    if abs(norm - 1.0) > 1e-9:
        raise FieldError(f"weight must be a unit vector, |w| = {norm}")
    return w


def _mode_from_momentum(kind, box, p0, p1, weight, n=None, frequency_sign=+1,
                        lattice_axis=None, amplitude=None, check_shell=True):
    if check_shell:
        residual = abs(minkowski_interval((p0, p1)) + kind.mass**2)
        scale = max(1.0, p0 * p0 + p1 * p1)
        if residual > MASS_SHELL_TOL * scale:
            raise FieldError(f"four-momentum off the mass shell by {residual}")
    if amplitude is None:
        amplitude = 1.0 / np.sqrt(box.volume)
    w = _validate_weight(kind, weight)
    return Mode(kind, box, (float(p0), float(p1)), float(amplitude),
                tuple(w.tolist()), n, frequency_sign, lattice_axis)


def make_mode(kind: ParticleKind, n: int, frequency_sign: int,
              box: SpacetimeBox, weight=None) -> Mode:
    """Lattice mode with p1 = 2*pi*n/L and p0 = sign * sqrt(p1^2 + m^2).

    The amplitude 1/sqrt(|V|) gives unit spacetime norm on V. Scalars
    default to weight (1,); multi-component kinds must pass an explicit
    unit weight. Photons reject n = 0 (no propagation direction).
    """
    if frequency_sign not in (+1, -1):
        raise FieldError(f"frequency sign must be +-1, got {frequency_sign}")
    if kind.name == "photon" and n == 0:
        raise FieldError("photon mode n=0 has no wave vector; "
                         "the transverse calibration is undefined")
    if kind.name == "electron":
        raise FieldError("use make_electron_mode for spinor weights")
    if weight is None:
        if kind.n_components != 1:
            raise FieldError(f"{kind.name} requires an explicit weight")
        weight = (1.0,)
    p1 = 2.0 * np.pi * n / box.space_extent
    p0 = frequency_sign * np.hypot(p1, kind.mass)
    return _mode_from_momentum(kind, box, p0, p1, weight, n=n,
                               frequency_sign=frequency_sign,
                               lattice_axis="space")


def electron_spinor_weight(p1: float, frequency_sign: int,
                           mass: float) -> np.ndarray:
    """Unit eigenvector of H(p) = sigma_x*p + sigma_z*m at energy sign*E.

    Sign convention: the positive branch is (E+m, p), the negative branch
    (-p, E+m), both real; any consistent phase would do.
    """
    energy = np.hypot(p1, mass)
    if frequency_sign == +1:
        w = np.array([energy + mass, p1], dtype=complex)
    else:
        w = np.array([-p1, energy + mass], dtype=complex)
    return w / np.linalg.norm(w)


def make_electron_mode(n: int, frequency_sign: int, mass: float,
                       box: SpacetimeBox) -> Mode:
    """Dirac lattice mode; the spinor weight solves H(p) w = p0 w."""
    if mass <= 0:
        raise FieldError(f"electron mass must be positive, got {mass}")
    if frequency_sign not in (+1, -1):
        raise FieldError(f"frequency sign must be +-1, got {frequency_sign}")
    kind = electron(mass)
    p1 = 2.0 * np.pi * n / box.space_extent
    p0 = frequency_sign * np.hypot(p1, mass)
    w = electron_spinor_weight(p1, frequency_sign, mass)
    return _mode_from_momentum(kind, box, p0, p1, w, n=n,
                               frequency_sign=frequency_sign,
                               lattice_axis="space")


def evaluate_mode(mode: Mode, t, x) -> np.ndarray:
    """Mode values at events; output shape = broadcast(t, x) + (m,)."""
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    phase = np.exp(1j * (mode.p1 * x - mode.p0 * t))
    return mode.amplitude * phase[..., None] * mode.weight_vector()


@dataclass(frozen=True)
class WaveFunction:
    """Complex multi-component field sampled at cell centers.

    `component_signs` are the metric signs entering the density
    sum_a sign_a |psi^a|^2; they are all +1 for fields living in the
    Euclidean space U and become (-1, +1, ...) only for four-vector
    embeddings (boosted massive vectors, gauge-transformed photons).
    """

    grid: UniformGrid
    kind: ParticleKind
    values: np.ndarray
    component_signs: tuple | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.ndim == 2:
            v = v[..., None]
        if v.shape[:2] != (self.grid.n_time, self.grid.n_space):
            raise FieldError(f"values shape {v.shape} does not match grid")
        object.__setattr__(self, "values", v)
        if self.component_signs is None:
            object.__setattr__(self, "component_signs",
                               (1.0,) * v.shape[2])
        elif len(self.component_signs) != v.shape[2]:
            raise FieldError("component_signs length mismatch")

    @property
    def n_components(self) -> int:
        return self.values.shape[2]

    def modulus_sq(self) -> np.ndarray:
        """sum_a sign_a |psi^a|^2 per cell, shape (n_time, n_space)."""
        signs = np.asarray(self.component_signs)
        return np.tensordot(np.abs(self.values) ** 2, signs, axes=(2, 0))


def _check_band_limit(mode: Mode, grid: UniformGrid):
    if mode.lattice_axis == "space" and mode.n is not None:
        if abs(mode.n) >= grid.n_space / 2:
            raise FieldError(
                f"mode n={mode.n} aliases on n_space={grid.n_space}")
    if mode.lattice_axis == "time" and mode.n is not None:
        if abs(mode.n) >= grid.n_time / 2:
            raise FieldError(
                f"mode j={mode.n} aliases on n_time={grid.n_time}")


def synthesize(modes, coefficients, grid: UniformGrid) -> WaveFunction:
    """psi(cell) = sum_k C_k * mode_k(cell center). No normalization.

    All modes must share kind and box; photon mode sets must share a
    propagation direction (mixed-direction packets are undefined in the
    1+1D transverse reduction).
    """
    modes = list(modes)
    coefficients = np.asarray(coefficients, dtype=complex).reshape(-1)
    if not modes:
        raise FieldError("empty mode list")
    if len(modes) != coefficients.size:
        raise FieldError("modes and coefficients differ in length")
    kind = modes[0].kind
    for m in modes:
        if m.kind != kind:
            raise FieldError("modes mix particle kinds")
        if m.box != grid.box:
            raise FieldError("mode box does not match the grid box")
        _check_band_limit(m, grid)
    if kind.name == "photon":
        directions = {np.sign(m.p1) for m in modes}
        if len(directions) > 1:
            raise FieldError(
                "mixed-direction photon packet: the transverse 1+1D "
                "reduction defines a single collinear wave-vector family")
    T, X = grid.centers_mesh()
    values = np.zeros((grid.n_time, grid.n_space, kind.n_components),
                      dtype=complex)
    for c, m in zip(coefficients, modes):
        if c != 0.0:
            values += c * evaluate_mode(m, T, X)
    return WaveFunction(grid, kind, values)


def norm_spacetime(psi: WaveFunction) -> float:
    """Hilbert norm ||psi|| on V by midpoint quadrature."""
    total = float(np.sum(np.abs(psi.values) ** 2)) * psi.grid.cell_volume
    return np.sqrt(total)


def inner_product(psi1: WaveFunction, psi2: WaveFunction) -> complex:
    """(psi1, psi2) = sum conj(psi1).psi2 * w; conjugation on the first."""
    if psi1.grid != psi2.grid or psi1.n_components != psi2.n_components:
        raise FieldError("inner product needs matching grids and components")
    return complex(np.sum(np.conj(psi1.values) * psi2.values)
                   * psi1.grid.cell_volume)


def normalize(psi: WaveFunction) -> WaveFunction:
    """Rescale to unit spacetime norm; rejects the zero field."""
    norm = norm_spacetime(psi)
    if norm == 0.0:
        raise DegenerateFieldError("cannot normalize the zero field")
    return WaveFunction(psi.grid, psi.kind, psi.values / norm,
                        psi.component_signs)


def norm_spatial(psi: WaveFunction, it: int) -> float:
    """Fixed-time norm ||psi(t_it, .)|| = sqrt(sum_ix |psi|^2 dx)."""
    if not 0 <= it < psi.grid.n_time:
        raise FieldError(f"time index {it} out of bounds")
    total = float(np.sum(np.abs(psi.values[it]) ** 2)) * psi.grid.dx
    return np.sqrt(total)


def gauge_transform(psi: WaveFunction, chi: np.ndarray) -> WaveFunction:
    """Photon field embedded as (u0, u1, u2, u3) plus the gradient of chi.

    The contravariant gradient (with e00 = -1) is added: u0 -= d0 chi,
    u1 += d1 chi. Nonconstant chi breaks the transverse calibration
    u0 = u1 = 0, demonstrating that the density is gauge dependent. The
    result carries Minkowski component signs (-1, +1, +1, +1).
    """
    if psi.kind.name != "photon" or psi.n_components != 2:
        raise FieldError("gauge_transform expects a transverse photon field")
    chi = np.asarray(chi, dtype=complex)
    if chi.shape != (psi.grid.n_time, psi.grid.n_space):
        raise FieldError("chi must be a scalar field on the grid")
    d0 = np.gradient(chi, psi.grid.dt, axis=0)
    d1 = np.gradient(chi, psi.grid.dx, axis=1)
    values = np.zeros((psi.grid.n_time, psi.grid.n_space, 4), dtype=complex)
    values[..., 0] = -d0
    values[..., 1] = d1
    values[..., 2:] = psi.values
    return WaveFunction(psi.grid, psi.kind, values,
                        component_signs=(-1.0, 1.0, 1.0, 1.0))


def fd_evolve_klein_gordon(initial_psi, initial_dpsi, grid: UniformGrid,
                           mass: float) -> WaveFunction:
    """Leapfrog oracle for (d0^2 - d1^2 + m^2) psi = 0, periodic in x.

    Initial data are given on the spatial cell centers at t = 0; the
    returned field holds the cell-center values (adjacent time levels
    averaged, an O(dt^2) representation consistent with the scheme's
    global order). Requires the Courant condition dt <= dx.
    """
    dt, dx = grid.dt, grid.dx
    if dt > dx * (1 + 1e-12):
        raise FieldError(f"Courant violation: dt={dt} > dx={dx}")
    u_prev = np.asarray(initial_psi, dtype=complex).reshape(-1).copy()
    v0 = np.asarray(initial_dpsi, dtype=complex).reshape(-1)
    if u_prev.size != grid.n_space or v0.size != grid.n_space:
        raise FieldError("initial data must live on the spatial centers")

    def lap(u):
        return (np.roll(u, -1) + np.roll(u, 1) - 2.0 * u) / dx**2

    levels = np.empty((grid.n_time + 1, grid.n_space), dtype=complex)
    levels[0] = u_prev
    u_curr = u_prev + dt * v0 + 0.5 * dt**2 * (lap(u_prev) - mass**2 * u_prev)
    levels[1] = u_curr
    for n in range(2, grid.n_time + 1):
        u_next = (2.0 * u_curr - u_prev
                  + dt**2 * (lap(u_curr) - mass**2 * u_curr))
        u_prev, u_curr = u_curr, u_next
        levels[n] = u_curr
    centers = 0.5 * (levels[:-1] + levels[1:])
    return WaveFunction(grid, complex_scalar(mass), centers[..., None])


def discrete_dirac_residual(psi: WaveFunction) -> float:
    """Max interior residual of the centered-difference Dirac operator.

    Checks i d0 u + i sigma_x d1 u - sigma_z m u = 0 with central
    differences (periodic in x, interior cells in t); O(Delta^2) for
    fields synthesized from analytic electron modes.
    """
    if psi.kind.name != "electron":
        raise FieldError("Dirac residual applies to electron fields")
    u = psi.values
    m = psi.kind.mass
    d0 = (u[2:, :, :] - u[:-2, :, :]) / (2 * psi.grid.dt)
    inner = u[1:-1, :, :]
    d1 = (np.roll(inner, -1, axis=1) - np.roll(inner, 1, axis=1)) \
        / (2 * psi.grid.dx)
    residual = np.empty_like(inner)
    residual[..., 0] = 1j * d0[..., 0] + 1j * d1[..., 1] - m * inner[..., 0]
    residual[..., 1] = 1j * d0[..., 1] + 1j * d1[..., 0] + m * inner[..., 1]
    return float(np.max(np.abs(residual)))


def gaussian_comb(grid: UniformGrid, mass: float, axis: str = "space",
                  center_index: int = 4, sigma: float = 10.0,
                  center: tuple = None, n_sigmas: float = 4.0):
    """Gaussian-weighted lattice comb packet; returns (psi, modes, coeffs).

    axis="space": ordinary on-shell modes p1 = 2*pi*n/L, Gaussian weights
    around p1bar = 2*pi*center_index/L with momentum spread sigma, packet
    centred at `center`. axis="time" applies the identical construction
    with the roles of the axes exchanged (lattice energies p0 = 2*pi*j/T,
    p1 = +sqrt(p0^2 + m^2)); those four-momenta realize the formal
    time-energy symmetry of the moment bookkeeping and are not mass-shell
    modes, so they are tagged with lattice_axis="time" and never enter
    shell-checked paths. The returned field is normalized on V.
    """
    if axis not in ("space", "time"):
        raise FieldError(f"axis must be 'space' or 'time', got {axis}")
    box = grid.box
    extent = box.space_extent if axis == "space" else box.time_extent
    n_lattice = grid.n_space if axis == "space" else grid.n_time
    if center is None:
        center = (box.time_extent / 2.0, box.space_extent / 2.0)
    t_bar, x_bar = center
    dq = 2.0 * np.pi / extent
    half = max(2, int(np.ceil(n_sigmas * sigma / dq)))
    js = np.arange(center_index - half, center_index + half + 1)
    if np.max(np.abs(js)) >= n_lattice / 2:
        raise FieldError("comb window exceeds the lattice band limit")
    kind = complex_scalar(mass)
    modes, coeffs = [], []
    q_bar = dq * center_index
    for j in js:
        q = dq * j
        other = np.hypot(q, mass)
        if axis == "space":
            p0, p1 = other, q
            mode = make_mode(kind, int(j), +1, box)
        else:
            p0, p1 = q, other
            mode = _mode_from_momentum(kind, box, p0, p1, (1.0,), n=int(j),
                                       frequency_sign=+1, lattice_axis="time",
                                       check_shell=False)
        envelope = np.exp(-((q - q_bar) ** 2) / (4.0 * sigma**2))
        phase = np.exp(-1j * (p1 * x_bar - p0 * t_bar))
        modes.append(mode)
        coeffs.append(envelope * phase)
    coeffs = np.asarray(coeffs, dtype=complex)
    coeffs /= np.linalg.norm(coeffs)
    psi = normalize(synthesize(modes, coeffs, grid))
    return psi, modes, coeffs
