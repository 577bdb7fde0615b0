"""EIT quantum-battery simulator: bound states, dynamics, and ergotropy
of a four-level atom coupled to a coupled-cavity array."""

from .params import SystemParams
from .model import (
    AtomEigensystem,
    atom_eigensystem_exact,
    atom_eigensystem_perturbative,
    atom_hamiltonian,
    band_frequency,
    dark_state_energy,
    dark_state_vector,
    effective_hamiltonian,
)
from .spectral import (
    BandInfo,
    BoundState,
    BoundStateSet,
    analytic_amplitude,
    branch_cut_integral,
    branch_cut_integrand,
    discrete_lattice_sum,
    find_bound_states,
    lattice_sum,
    long_time_probability,
)
from .dynamics import (
    TimeSeries,
    WaveFunction,
    dark_population,
    evolve,
    initial_state_atom_m,
    initial_state_photon_at_site,
)
from .lindblad import DensityMatrix, initial_density_matrix, lindblad_evolve, population_report
from .thermo import (
    BatteryState,
    ChargingScenario,
    ErgotropyTrace,
    battery_hamiltonian,
    ergotropy,
    ergotropy_trace,
    passive_state,
    reduce_battery,
    sweep_ergotropy,
)
from .analysis import DecayFit, envelope_peaks, fit_decay, fit_exponential, median_peak_spacing
from .presets import PRESET_NAMES, ScenarioConfig, preset

__version__ = "0.1.0"
