"""Single-excitation Schrodinger dynamics for the effective and full models.

The effective model keeps the dark state |0, E1> plus the photon
amplitudes; the full model carries all three atom levels (d, e, m) in the
cavity vacuum plus the photon amplitudes, with the bright states and their
fast decay retained.  Both use the non-Hermitian atom energy
omega_d_real - i*kappa/2, so at kappa > 0 the norm leaks monotonically.

Propagation is fixed-step RK4 with step <= 0.02 / max|diag| after removing
the energy centroid: a uniform diagonal shift only changes the global
phase, never |amplitudes|, and keeps the step criterion tied to physical
frequency spreads instead of the absolute energy offset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DarkConditionViolated, IndexOutOfRange, OutOfRange, StepSizeTooLarge
from .model import atom_hamiltonian, dark_state_energy, dark_state_vector
from .params import SystemParams

__all__ = [
    "WaveFunction",
    "TimeSeries",
    "initial_state_photon_at_site",
    "initial_state_atom_m",
    "evolve",
    "dark_population",
    "STEP_FACTOR",
]

#: dt <= STEP_FACTOR / max|diag - centroid|
STEP_FACTOR = 0.02

#: Allowed per-step norm^2 growth at kappa = 0.
NORM_GROWTH_TOL = 1e-6


def _mode_phases(params: SystemParams) -> np.ndarray:
    """exp(i k_n j) matrix used by the mode<->site Fourier maps."""
    k = params.mode_wavenumbers()
    j = np.arange(params.n_cavities)
    return np.exp(1j * np.outer(k, j))


@dataclass
class WaveFunction:
    """Single-excitation state: atom amplitudes plus photon amplitudes.

    ``atom`` has one entry (dark amplitude u) for the effective model and
    three entries (u_d, u_e, u_m) for the full model.  ``photon`` holds N
    amplitudes in the representation named by ``representation``.
    """

    atom: np.ndarray
    photon: np.ndarray
    representation: str  # "mode" | "site"
    model: str  # "effective" | "full"

    @property
    def norm2(self) -> float:
        return float(np.sum(np.abs(self.atom) ** 2) + np.sum(np.abs(self.photon) ** 2))

    def dark_amplitude(self, params: SystemParams) -> complex:
        """Overlap <0, E1|psi> (just u for the effective model)."""
        if self.model == "effective":
            return complex(self.atom[0])
        dark = dark_state_vector(params)
        return complex(np.vdot(dark, self.atom))

    def to_representation(self, rep: str, params: SystemParams) -> "WaveFunction":
        if rep == self.representation:
            return self
        phases = _mode_phases(params)
        rt_n = math.sqrt(params.n_cavities)
        if rep == "site":
            photon = (phases.T @ self.photon) / rt_n  # beta_j = sum_k e^{ikj} beta_k / sqrt(N)
        elif rep == "mode":
            photon = (phases.conj() @ self.photon) / rt_n
        else:
            raise ValueError(f"unknown representation {rep!r}")
        return WaveFunction(self.atom.copy(), photon, rep, self.model)


@dataclass
class TimeSeries:
    """Sampled trajectory: times, dark-state probability, norm, atom amps."""

    times: np.ndarray
    p_dark: np.ndarray
    norm2: np.ndarray
    atom_amps: np.ndarray
    model: str
    final_state: WaveFunction | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if np.any(self.p_dark < -1e-12) or np.any(self.p_dark > 1.0 + 1e-9):
            raise ValueError("p_dark outside [0, 1]")


def _n_atom(model: str) -> int:
    return 1 if model == "effective" else 3


def initial_state_photon_at_site(
    j: int, params: SystemParams, model: str = "effective", representation: str = "site"
) -> WaveFunction:
    """Photon localized in cavity j, atom in its ground state.

    In mode space the same state is beta_k = exp(-i k j)/sqrt(N).
    """
    n = params.n_cavities
    if not 0 <= j < n:
        raise IndexOutOfRange(f"site {j} outside 0..{n - 1}")
    atom = np.zeros(_n_atom(model), dtype=complex)
    if representation == "site":
        photon = np.zeros(n, dtype=complex)
        photon[j] = 1.0
    elif representation == "mode":
        photon = np.exp(-1j * params.mode_wavenumbers() * j) / math.sqrt(n)
    else:
        raise ValueError(f"unknown representation {representation!r}")
    return WaveFunction(atom, photon, representation, model)


def initial_state_atom_m(
    params: SystemParams, model: str = "full", representation: str = "site"
) -> WaveFunction:
    """Atom prepared in |m>, cavities in vacuum.

    The effective model keeps only the dark-state projection
    u(0) = <E1|m> = g2/g (the discarded bright components are decoupled
    from the array and merely decay).
    """
    n = params.n_cavities
    photon = np.zeros(n, dtype=complex)
    if model == "full":
        atom = np.array([0.0, 0.0, 1.0], dtype=complex)
    else:
        dark = dark_state_vector(params)
        atom = np.array([np.conj(dark[2])], dtype=complex)
    return WaveFunction(atom, photon, representation, model)


def _build_blocks(params: SystemParams, psi0: WaveFunction, e1: complex | None):
    """Structured Hamiltonian blocks for the kernel, centroid-shifted."""
    n = params.n_cavities
    model = psi0.model
    rep = psi0.representation
    if model == "effective":
        if not params.dark_condition_ok:
            raise DarkConditionViolated("effective model requires g1/g2 = -Oc/Op")
        if e1 is None:
            e1 = dark_state_energy(params)
        atom_block = np.array([[e1]], dtype=complex)
        if rep == "mode":
            coupling = np.full((1, n), params.j_coupling, dtype=complex)
        else:
            coupling = np.zeros((1, n), dtype=complex)
            coupling[0, 0] = params.g
    else:
        atom_block = atom_hamiltonian(params)
        coupling = np.zeros((3, n), dtype=complex)
        if rep == "mode":
            coupling[0, :] = params.g1 / math.sqrt(n)
            coupling[2, :] = params.g2 / math.sqrt(n)
        else:
            coupling[0, 0] = params.g1
            coupling[2, 0] = params.g2
    if rep == "mode":
        photon_diag = params.mode_frequencies().astype(complex)
        diag_real = np.concatenate([np.diag(atom_block).real, photon_diag.real])
    else:
        photon_diag = None
        diag_real = np.concatenate([np.diag(atom_block).real, [params.band_lower, params.band_upper]])
    centroid = 0.5 * (diag_real.max() + diag_real.min())
    atom_block = atom_block - centroid * np.eye(atom_block.shape[0])
    omega0_shift = params.omega0 - centroid
    if photon_diag is not None:
        photon_diag = photon_diag - centroid
    spread = max(np.max(np.abs(diag_real - centroid)), 1e-30)
    return atom_block, coupling, photon_diag, omega0_shift, centroid, spread


def evolve(
    psi0: WaveFunction,
    t_grid: np.ndarray,
    params: SystemParams,
    model: str | None = None,
    e1: complex | None = None,
) -> TimeSeries:
    """Integrate i dpsi/dt = H psi and record P_E1(t) on ``t_grid``.

    ``t_grid`` must be a uniform, increasing grid starting at 0.  The RK4
    substep is chosen as the largest dt <= STEP_FACTOR/max|diag| that
    divides the grid spacing.  Raises StepSizeTooLarge if the norm grows
    beyond tolerance at kappa = 0.
    """
    if model is not None and model != psi0.model:
        raise ValueError(f"psi0 was built for model {psi0.model!r}, not {model!r}")
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or len(t_grid) < 2:
        raise ValueError("t_grid must have at least two points")
    dt_grid = np.diff(t_grid)
    if t_grid[0] != 0.0 or np.any(dt_grid <= 0):
        raise ValueError("t_grid must increase from 0")
    if not np.allclose(dt_grid, dt_grid[0], rtol=1e-9, atol=0.0):
        raise ValueError("t_grid must be uniform")

    atom_block, coupling, photon_diag, omega0_shift, _, spread = _build_blocks(params, psi0, e1)
    dt_max = STEP_FACTOR / spread
    n_sub = max(1, int(math.ceil(dt_grid[0] / dt_max - 1e-12)))
    dt = dt_grid[0] / n_sub

    psi_init = np.concatenate([psi0.atom, psi0.photon])
    norm_tol = NORM_GROWTH_TOL if params.kappa == 0.0 else 0.0
    try:
        atom_amps, norm2, psi_final = _kernels.rk4_schrodinger(
            atom_block,
            coupling,
            photon_diag,
            omega0_shift,
            params.xi,
            psi_init,
            dt,
            n_sub,
            len(t_grid),
            norm_tol,
        )
    except RuntimeError as exc:
        raise StepSizeTooLarge(str(exc)) from exc

    if psi0.model == "effective":
        p_dark = np.abs(atom_amps[:, 0]) ** 2
    else:
        dark = dark_state_vector(params)
        p_dark = np.abs(atom_amps @ dark.conj()) ** 2
    na = atom_amps.shape[1]
    final = WaveFunction(psi_final[:na], psi_final[na:], psi0.representation, psi0.model)
    return TimeSeries(
        times=t_grid,
        p_dark=np.clip(p_dark, 0.0, None),
        norm2=norm2,
        atom_amps=atom_amps,
        model=psi0.model,
        final_state=final,
    )


def dark_population(series: TimeSeries, t: float) -> float:
    """Linear interpolation of P_E1 at time t; t must lie on the grid span."""
    times = series.times
    if t < times[0] or t > times[-1]:
        raise OutOfRange(f"t = {t} outside [{times[0]}, {times[-1]}]")
    return float(np.interp(t, times, series.p_dark))
