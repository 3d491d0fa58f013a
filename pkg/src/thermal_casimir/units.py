"""Unit system and fixed physical constants.

Energies (including frequencies, stored as hbar*omega) are in eV, lengths in
micrometres, temperatures in kelvin and velocities as fractions of c.
Pressures come out in eV/um^3, free energies per area in eV/um^2.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PhysicalConstants:
    hbar_c: float = 0.1973269804          # eV um
    boltzmann: float = 8.617333262e-5     # eV / K
    light_speed_ratio: float = 1.0
    pressure_conversion: float = 0.1602177  # Pa per eV/um^3
    hbar: float = 6.582119569e-16         # eV s


CONSTANTS = PhysicalConstants()
HBAR_C = CONSTANTS.hbar_c
K_B = CONSTANTS.boltzmann
HBAR = CONSTANTS.hbar
PA_PER_EV_UM3 = CONSTANTS.pressure_conversion
# eV/um^2 -> N/m and eV/um -> N, for force gradients and forces
N_PER_M_PER_EV_UM2 = 1.602176634e-7
N_PER_EV_UM = 1.602176634e-13
ZETA3 = 1.2020569031595942


@dataclass(frozen=True)
class EvaluationPoint:
    """Separation ``a`` (um) and temperature ``T`` (K)."""

    a: float
    T: float

    def __post_init__(self):
        if not (self.a > 0 and math.isfinite(self.a)):
            raise ValueError(f"separation must be positive, got {self.a}")
        if not (self.T >= 0 and math.isfinite(self.T)):
            raise ValueError(f"temperature must be non-negative, got {self.T}")


class Regime(str, enum.Enum):
    LOW = "low"
    INTERMEDIATE = "intermediate"
    HIGH = "high"


@dataclass(frozen=True)
class ThermalRegime:
    T_eff: float
    regime: Regime


def effective_temperature(a):
    """Temperature with k_B T_eff = hbar c / (2a).

    Parameters
    ----------
    a : float or array_like
        Separation in um, strictly positive.
    """
    a_arr = np.asarray(a, dtype=float)
    if np.any(~(a_arr > 0)):
        raise ValueError("separation must be positive")
    out = HBAR_C / (2.0 * a_arr * K_B)
    return float(out) if out.ndim == 0 else out


def thermal_regime(point: EvaluationPoint) -> ThermalRegime:
    """Advisory label; nothing in the library branches on it."""
    t_eff = effective_temperature(point.a)
    if point.T < t_eff / 10:
        regime = Regime.LOW
    elif point.T > 10 * t_eff:
        regime = Regime.HIGH
    else:
        regime = Regime.INTERMEDIATE
    return ThermalRegime(t_eff, regime)


def pressure_to_pascal(p):
    return np.asarray(p) * PA_PER_EV_UM3 if np.ndim(p) else p * PA_PER_EV_UM3


def pascal_to_pressure(p_pa):
    return np.asarray(p_pa) / PA_PER_EV_UM3 if np.ndim(p_pa) else p_pa / PA_PER_EV_UM3


def conductivity_energy(sigma_per_s):
    """Convert a Gaussian conductivity in s^-1 to hbar*4*pi*sigma in eV."""
    return HBAR * 4.0 * math.pi * sigma_per_s


def matsubara_energy(T, l):
    """hbar*xi_l = 2 pi k_B T l in eV."""
    return 2.0 * math.pi * K_B * T * np.asarray(l, dtype=float)
