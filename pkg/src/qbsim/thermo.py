"""Ergotropy, passive states, charging power, and parameter sweeps.

Work accounting uses the Hermitian battery Hamiltonian: the kappa = 0
atom block extended by the ground level at energy zero.  Norm lost to
the non-Hermitian evolution is booked as ground-state population before
the ergotropy is evaluated, matching the Lindblad sink.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dynamics import TimeSeries, evolve, initial_state_atom_m, initial_state_photon_at_site
from .errors import NotNormalizable, QbsimError
from .model import dark_state_vector
from .params import SystemParams

__all__ = [
    "BatteryState",
    "ErgotropyTrace",
    "SweepResult",
    "battery_hamiltonian",
    "reduce_battery",
    "passive_state",
    "ergotropy",
    "ergotropy_trace",
    "sweep_ergotropy",
]

#: Battery basis ordering.
BASIS = ("g", "d", "e", "m")


@dataclass(frozen=True)
class BatteryState:
    """4x4 reduced density matrix of the atom in the (g, d, e, m) basis."""

    rho: np.ndarray
    time: float = 0.0

    @property
    def trace(self) -> float:
        return float(np.trace(self.rho).real)

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.rho - self.rho.conj().T)))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.rho).min())


@dataclass
class ErgotropyTrace:
    """Ergotropy W(t), average power P(t) = W(t)/t, and the window maximum."""

    times: np.ndarray
    work: np.ndarray
    power: np.ndarray
    w_max: float
    t_at_max: float
    p_dark: np.ndarray = field(default=None, repr=False)


def battery_hamiltonian(params: SystemParams) -> np.ndarray:
    """Hermitian 4x4 battery Hamiltonian: ground at 0 plus the kappa=0 atom block."""
    h = np.zeros((4, 4))
    h[1, 1] = params.omega_d_real
    h[2, 2] = params.delta_e
    h[3, 3] = params.omega_m_level
    h[1, 2] = h[2, 1] = params.omega_p_rabi
    h[2, 3] = h[3, 2] = params.omega_c_rabi
    return h


def _battery_from_amplitudes(atom_amps: np.ndarray, params: SystemParams, model: str, t: float) -> BatteryState:
    """Reduced state from the atom amplitudes of a single-excitation ket.

    Tracing out the cavity kills every coherence between the atom-excited
    block and the ground level (the photon states are orthogonal to the
    vacuum), so rho_B is the excited-block outer product plus all the
    remaining weight on |g><g|.
    """
    if model == "effective":
        bare = complex(atom_amps[0]) * dark_state_vector(params)
    else:
        bare = np.asarray(atom_amps, dtype=complex)
    rho = np.zeros((4, 4), dtype=complex)
    rho[1:, 1:] = np.outer(bare, bare.conj())
    excited = float(np.real(np.trace(rho[1:, 1:])))
    rho[0, 0] = 1.0 - excited
    if np.trace(rho).real <= 0.0:
        raise NotNormalizable(f"trace {np.trace(rho).real} <= 0")
    return BatteryState(rho=rho, time=t)


def reduce_battery(psi, params: SystemParams, t: float = 0.0) -> BatteryState:
    """Trace the cavity modes out of a WaveFunction.

    Photon population and any norm already lost to dissipation both land
    on |g><g|.
    """
    return _battery_from_amplitudes(np.atleast_1d(psi.atom), params, psi.model, t)


def passive_state(rho: BatteryState, h_battery: np.ndarray) -> BatteryState:
    """Zero-ergotropy rearrangement of ``rho``.

    Eigenvalues of rho in descending order are attached to the eigenstates
    of the battery Hamiltonian in ascending energy order; ties broken by
    the stable sort, which leaves the ergotropy unchanged within a
    degenerate block.
    """
    r = np.linalg.eigvalsh(0.5 * (rho.rho + rho.rho.conj().T))[::-1]
    eps, vecs = np.linalg.eigh(h_battery)
    out = (vecs * r) @ vecs.conj().T
    return BatteryState(rho=out, time=rho.time)


def ergotropy(rho: BatteryState, h_battery: np.ndarray) -> float:
    """W = tr(rho H) - tr(passive(rho) H); nonnegative by construction."""
    r = np.linalg.eigvalsh(0.5 * (rho.rho + rho.rho.conj().T))[::-1]
    eps = np.linalg.eigvalsh(h_battery)
    active = float(np.real(np.trace(rho.rho @ h_battery)))
    return active - float(np.dot(r, eps))


@dataclass(frozen=True)
class ChargingScenario:
    """What to evolve for an ergotropy trace: params + initial condition."""

    params: SystemParams
    photon_site: int | None = 1
    model: str = "effective"

    def initial_state(self):
        if self.photon_site is None:
            return initial_state_atom_m(self.params, self.model)
        return initial_state_photon_at_site(
            self.photon_site, self.params, self.model,
            "mode" if self.model == "effective" else "site",
        )


def ergotropy_trace(scenario: ChargingScenario, t_grid: np.ndarray) -> ErgotropyTrace:
    """Evolve the scenario and compute W(t) and P(t) = W(t)/t on the grid.

    P(0) is defined as 0.
    """
    params = scenario.params
    series = evolve(scenario.initial_state(), np.asarray(t_grid, dtype=float), params)
    h_b = battery_hamiltonian(params)
    eps = np.linalg.eigvalsh(h_b)
    work = np.empty(len(series.times))
    for i, t in enumerate(series.times):
        state = _battery_from_amplitudes(series.atom_amps[i], params, scenario.model, t)
        r = np.linalg.eigvalsh(state.rho)[::-1]
        active = float(np.real(np.trace(state.rho @ h_b)))
        work[i] = active - float(np.dot(r, eps))
    power = np.zeros_like(work)
    power[1:] = work[1:] / series.times[1:]
    imax = int(np.argmax(work))
    return ErgotropyTrace(
        times=series.times,
        work=work,
        power=power,
        w_max=float(work[imax]),
        t_at_max=float(series.times[imax]),
        p_dark=series.p_dark,
    )


@dataclass
class SweepResult:
    """W_max over an (omega0, xi) grid; failed cells are NaN."""

    omega0_grid: np.ndarray
    xi_grid: np.ndarray
    w_max: np.ndarray  # shape (len(omega0_grid), len(xi_grid))
    errors: dict = field(default_factory=dict)


def _sweep_cell(args) -> tuple[int, int, float, str]:
    i, j, params_base, omega0, xi, photon_site, t_max, nt = args
    try:
        params = params_base.replace(omega0=float(omega0), xi=float(xi))
        trace = ergotropy_trace(
            ChargingScenario(params=params, photon_site=photon_site),
            np.linspace(0.0, t_max, nt),
        )
        return i, j, trace.w_max, ""
    except QbsimError as exc:
        return i, j, float("nan"), str(exc)


def sweep_ergotropy(
    omega0_grid,
    xi_grid,
    params_base: SystemParams,
    t_max: float,
    nt: int = 501,
    photon_site: int = 1,
    n_workers: int | None = None,
) -> SweepResult:
    """W_max(omega0, xi) over the grid within the window [0, t_max].

    Cells run in parallel processes; a failing cell records NaN plus its
    error message instead of aborting the sweep.
    """
    omega0_grid = np.asarray(omega0_grid, dtype=float)
    xi_grid = np.asarray(xi_grid, dtype=float)
    tasks = []
    for i, om0 in enumerate(omega0_grid):
        for j, xi in enumerate(xi_grid):
            tasks.append((i, j, params_base, float(om0), float(xi), photon_site, t_max, nt))
    w = np.full((len(omega0_grid), len(xi_grid)), np.nan)
    errors: dict = {}
    if n_workers is None or n_workers > 1:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            for i, j, val, err in pool.map(_sweep_cell, tasks, chunksize=8):
                w[i, j] = val
                if err:
                    errors[(i, j)] = err
    else:
        for task in tasks:
            i, j, val, err = _sweep_cell(task)
            w[i, j] = val
            if err:
                errors[(i, j)] = err
    return SweepResult(omega0_grid=omega0_grid, xi_grid=xi_grid, w_max=w, errors=errors)
