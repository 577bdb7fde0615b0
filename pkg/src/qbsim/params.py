"""Scenario parameters for the atom + coupled-cavity-array system.

All frequencies are in a caller-chosen reference unit (hbar = 1).  The
figure presets use either the inter-cavity hopping ``xi`` or the control
Rabi frequency ``omega_c_rabi`` as that unit; nothing in the numerics
cares which.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Any

import numpy as np

from .errors import ConfigError

#: Relative tolerance for the dark-state coupling condition g1/g2 = -Oc/Op.
DARK_CONDITION_RTOL = 1e-12


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters of one scenario; immutable and thread-safe.

    Attributes
    ----------
    omega0 : float
        Bare cavity frequency.
    xi : float
        Hopping between neighbouring cavities (> 0).
    n_cavities : int
        Number of cavities N (odd, >= 3).
    g1, g2 : float
        Couplings of the 0th cavity to the g<->d and g<->m transitions.
    omega_p_rabi, omega_c_rabi : float
        Probe and control Rabi frequencies.
    omega_d_real : float
        Real part of the d-level energy in the rotating frame.
    kappa : float
        Dissipation rate of level d (>= 0); the complex level energy is
        omega_d_real - i*kappa/2.
    omega_e_level, omega_m_level : float
        Bare e and m level energies.
    delta_e : float
        Drive detuning of the e level in the rotating frame.
    """

    omega0: float
    xi: float
    n_cavities: int
    g1: float
    g2: float
    omega_p_rabi: float
    omega_c_rabi: float
    omega_d_real: float
    kappa: float
    omega_e_level: float = 0.0
    omega_m_level: float = 0.0
    delta_e: float = 0.0

    def __post_init__(self) -> None:
        if not self.xi > 0:
            raise ConfigError("xi", f"must be > 0, got {self.xi}")
        if self.kappa < 0:
            raise ConfigError("kappa", f"must be >= 0, got {self.kappa}")
        if self.n_cavities < 3:
            raise ConfigError("n_cavities", f"must be >= 3, got {self.n_cavities}")
        if self.n_cavities % 2 == 0:
            raise ConfigError("n_cavities", f"must be odd, got {self.n_cavities}")

    # -- derived quantities ------------------------------------------------

    @property
    def g(self) -> float:
        """Total atom-cavity coupling sqrt(g1^2 + g2^2)."""
        return math.hypot(self.g1, self.g2)

    @property
    def j_coupling(self) -> float:
        """Per-mode coupling J = g / sqrt(N)."""
        return self.g / math.sqrt(self.n_cavities)

    @property
    def omega_d(self) -> complex:
        """Complex d-level energy omega_d_real - i*kappa/2."""
        return self.omega_d_real - 0.5j * self.kappa

    @property
    def band_lower(self) -> float:
        return self.omega0 - 2.0 * self.xi

    @property
    def band_upper(self) -> float:
        return self.omega0 + 2.0 * self.xi

    @property
    def rabi_norm(self) -> float:
        """Combined Rabi frequency Omega = sqrt(Op^2 + Oc^2)."""
        return math.hypot(self.omega_p_rabi, self.omega_c_rabi)

    @property
    def dark_condition_ok(self) -> bool:
        """True iff g1/g2 = -Omega_c/Omega_p within DARK_CONDITION_RTOL.

        The g = 0 (decoupled) limit counts as satisfied: there is nothing
        for the dark state to couple to.
        """
        if self.g == 0.0:
            return True
        # Cross-multiplied form avoids dividing by small g2 or Omega_p.
        lhs = self.g1 * self.omega_p_rabi
        rhs = -self.g2 * self.omega_c_rabi
        scale = abs(self.g) * self.rabi_norm
        if scale == 0.0:
            return lhs == rhs
        return abs(lhs - rhs) <= DARK_CONDITION_RTOL * scale

    def mode_numbers(self) -> np.ndarray:
        """Integer mode labels n with k_n = 2*pi*n/N, symmetric about 0."""
        half = (self.n_cavities - 1) // 2
        return np.arange(-half, half + 1)

    def mode_wavenumbers(self) -> np.ndarray:
        return 2.0 * np.pi * self.mode_numbers() / self.n_cavities

    def mode_frequencies(self) -> np.ndarray:
        """Discrete band frequencies omega_k = omega0 - 2*xi*cos(k)."""
        return self.omega0 - 2.0 * self.xi * np.cos(self.mode_wavenumbers())

    # -- convenience constructors -----------------------------------------

    @classmethod
    def with_dark_coupling(cls, g: float, **kwargs: Any) -> "SystemParams":
        """Build params with g1, g2 chosen to satisfy the dark condition.

        Splits the total coupling ``g`` as g1 = -g*Oc/Omega, g2 = g*Op/Omega,
        which makes the dark state (-Oc|d> + Op|m>)/Omega exactly.
        """
        op = kwargs["omega_p_rabi"]
        oc = kwargs["omega_c_rabi"]
        norm = math.hypot(op, oc)
        if norm == 0.0:
            raise ConfigError("omega_p_rabi", "need a nonzero drive to split g into g1, g2")
        return cls(g1=-g * oc / norm, g2=g * op / norm, **kwargs)

    def replace(self, **changes: Any) -> "SystemParams":
        return replace(self, **changes)
