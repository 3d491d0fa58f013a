"""Dielectric permittivity and magnetic permeability models.

Imaginary-axis evaluations take xi = hbar*xi in eV and return real values.
The xi = 0 point is never evaluated here: conductors diverge there and the
zero-frequency physics is handled by :mod:`thermal_casimir.reflection`.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .units import HBAR_C, conductivity_energy


def _positive_xi(xi):
    xi = np.asarray(xi, dtype=float)
    if np.any(~(xi > 0)):
        raise ValueError("imaginary frequency must be positive; xi = 0 is a reflection limit")
    return xi


def _out(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


@dataclass(frozen=True)
class RelaxationModel:
    """gamma(T) = residual + amplitude * (T / reference_temperature)**exponent, in eV."""

    residual: float = 0.0
    amplitude: float = 0.035
    exponent: float = 5.0
    reference_temperature: float = 300.0

    def __post_init__(self):
        if self.residual < 0 or self.amplitude < 0:
            raise ValueError("relaxation parameters must be non-negative")
        if self.exponent < 1:
            raise ValueError("relaxation exponent must be >= 1")
        if not self.reference_temperature > 0:
            raise ValueError("reference temperature must be positive")

    def at(self, T: float) -> float:
        return relaxation_at(self, T)

    @classmethod
    def constant(cls, gamma: float) -> "RelaxationModel":
        return cls(residual=gamma, amplitude=0.0)


def relaxation_at(model: RelaxationModel, T: float) -> float:
    if T < 0:
        raise ValueError("temperature must be non-negative")
    return model.residual + model.amplitude * (T / model.reference_temperature) ** model.exponent


@dataclass(frozen=True)
class DrudeParams:
    plasma_frequency: float = 9.0
    relaxation: RelaxationModel = field(default_factory=RelaxationModel)
    kind = "drude"

    def __post_init__(self):
        if not self.plasma_frequency > 0:
            raise ValueError("plasma frequency must be positive")

    def eps_imag(self, xi, T):
        return drude_eps_imag(self, xi, T)

    def eps_real(self, omega, T):
        g = self.relaxation.at(T)
        w = np.asarray(omega, dtype=complex)
        return 1.0 - self.plasma_frequency**2 / (w * (w + 1j * g))

    def features(self, T):
        return [self.relaxation.at(T), self.plasma_frequency / np.sqrt(2.0)]


@dataclass(frozen=True)
class PlasmaParams:
    plasma_frequency: float = 9.0
    kind = "plasma"

    def __post_init__(self):
        if not self.plasma_frequency > 0:
            raise ValueError("plasma frequency must be positive")

    def eps_imag(self, xi, T=None):
        return plasma_eps_imag(self, xi)

    def eps_real(self, omega, T=None):
        w = np.asarray(omega, dtype=complex)
        return 1.0 - self.plasma_frequency**2 / w**2

    def features(self, T):
        return [self.plasma_frequency / np.sqrt(2.0)]


@dataclass(frozen=True)
class OscillatorModel:
    """eps_opt(i xi) = 1 + sum_j C_j / (1 + (xi/omega_j)^2).

    ``damping`` is only used on the real axis, where undamped oscillators
    have poles; it leaves the imaginary-axis form untouched when zero.
    """

    strengths: tuple = (1.098, 1.703)
    resonances: tuple = (13.39, 0.1237)
    damping: tuple | None = None

    def __post_init__(self):
        c = np.asarray(self.strengths, float)
        w = np.asarray(self.resonances, float)
        if c.shape != w.shape or c.ndim != 1 or c.size == 0:
            raise ValueError("strengths and resonances must be equal-length sequences")
        if np.any(c <= 0) or np.any(w <= 0):
            raise ValueError("oscillator strengths and resonances must be positive")
        if self.damping is not None and len(self.damping) != c.size:
            raise ValueError("damping must match the number of oscillators")

    @property
    def static(self) -> float:
        return 1.0 + float(np.sum(self.strengths))

    def eps_imag(self, xi):
        xi = np.asarray(xi, dtype=float)[..., None]
        c = np.asarray(self.strengths)
        w = np.asarray(self.resonances)
        g = np.zeros_like(w) if self.damping is None else np.asarray(self.damping)
        return 1.0 + np.sum(c * w**2 / (w**2 + xi**2 + g * xi), axis=-1)

    def eps_real(self, omega):
        if self.damping is None or not np.all(np.asarray(self.damping) > 0):
            raise ValueError("real-axis oscillator evaluation needs positive damping")
        w0 = np.asarray(self.resonances)
        c = np.asarray(self.strengths)
        g = np.asarray(self.damping)
        w = np.asarray(omega, dtype=complex)[..., None]
        return 1.0 + np.sum(c * w0**2 / (w0**2 - w**2 - 1j * g * w), axis=-1)


@dataclass(frozen=True)
class ConductivityModel:
    """sigma0(T) = prefactor * exp(-activation / T), prefactor in s^-1, activation in K."""

    prefactor: float = 0.0
    activation: float = 0.0

    def __post_init__(self):
        if self.prefactor < 0 or self.activation < 0:
            raise ValueError("conductivity parameters must be non-negative")

    def sigma(self, T: float) -> float:
        if self.activation == 0:
            return self.prefactor
        if T <= 0:
            return 0.0
        return self.prefactor * np.exp(-self.activation / T)

    @property
    def present(self) -> bool:
        return self.prefactor > 0

    @classmethod
    def arrhenius(cls, sigma_ref: float, T_ref: float, activation: float):
        """Fix the prefactor so that sigma0(T_ref) = sigma_ref."""
        return cls(prefactor=sigma_ref * np.exp(activation / T_ref), activation=activation)


@dataclass(frozen=True)
class DielectricParams:
    optical: OscillatorModel = field(default_factory=OscillatorModel)
    conductivity: ConductivityModel = field(default_factory=ConductivityModel)
    include_conductivity: bool = False
    kind = "dielectric"

    @property
    def eps0(self) -> float:
        return self.optical.static

    def conducting(self, T: float) -> bool:
        """Whether the xi -> 0 limit is metallic at temperature T."""
        if not (self.include_conductivity and self.conductivity.present):
            return False
        return T > 0 or self.conductivity.activation == 0

    def eps_imag(self, xi, T):
        return dielectric_eps_imag(self, xi, T)

    def eps_real(self, omega, T):
        eps = self.optical.eps_real(omega)
        if self.include_conductivity:
            s = conductivity_energy(self.conductivity.sigma(T))
            eps = eps + 1j * s / np.asarray(omega, dtype=complex)
        return eps

    def features(self, T):
        return list(self.optical.resonances)


class WavevectorForm(str, enum.Enum):
    K_PERP = "k_perp"   # permittivities depend on k_perp only
    FULL_K = "full_k"   # permittivities depend on |k| = sqrt(k_perp^2 + k3^2)


@dataclass(frozen=True)
class NonlocalDrudeParams:
    base: DrudeParams = field(default_factory=DrudeParams)
    v_transverse: float = 0.0
    v_longitudinal: float = 0.0
    wavevector_form: WavevectorForm = WavevectorForm.FULL_K
    fermi_velocity: float | None = None
    kind = "nonlocal"

    def __post_init__(self):
        for v in (self.v_transverse, self.v_longitudinal):
            if not 0 <= v <= 0.1:
                raise ValueError("nonlocal velocities must lie in [0, 0.1] (fractions of c)")
        object.__setattr__(self, "wavevector_form", WavevectorForm(self.wavevector_form))


@dataclass(frozen=True)
class NonlocalPermittivityPair:
    eps_transverse: float
    eps_longitudinal: float


@dataclass(frozen=True)
class PermeabilityModel:
    """Static permeability, applied at xi = 0 only; mu = 1 for every l >= 1."""

    static_mu: float = 1.0

    def __post_init__(self):
        if self.static_mu < 1:
            raise ValueError("static permeability must be >= 1")

    def at_zero(self) -> float:
        return self.static_mu


@dataclass(frozen=True)
class IdealMetal:
    """Perfect reflector, r_TM = 1 and r_TE = -1 everywhere."""

    kind = "ideal"


@dataclass(frozen=True)
class Vacuum:
    """eps = 1; no reflection.  Useful as a null model."""

    kind = "vacuum"

    def eps_imag(self, xi, T=None):
        return np.ones_like(np.asarray(xi, dtype=float))

    def eps_real(self, omega, T=None):
        return np.ones_like(np.asarray(omega, dtype=complex))

    def features(self, T):
        return []


@dataclass(frozen=True)
class Material:
    """A response model: permittivity plus permeability."""

    permittivity: object
    permeability: PermeabilityModel = field(default_factory=PermeabilityModel)
    name: str = ""

    @property
    def kind(self) -> str:
        return self.permittivity.kind


def drude_eps_imag(params: DrudeParams, xi, T):
    xi = _positive_xi(xi)
    g = params.relaxation.at(T)
    return _out(1.0 + params.plasma_frequency**2 / (xi * (xi + g)))


def plasma_eps_imag(params: PlasmaParams, xi):
    xi = _positive_xi(xi)
    return _out(1.0 + (params.plasma_frequency / xi) ** 2)


def dielectric_eps_imag(params: DielectricParams, xi, T):
    xi = _positive_xi(xi)
    eps = params.optical.eps_imag(xi)
    if params.include_conductivity:
        eps = eps + conductivity_energy(params.conductivity.sigma(T)) / xi
    return _out(eps)


def nonlocal_eps_imag(params: NonlocalDrudeParams, xi, k_perp, k3, T):
    """Transverse and longitudinal permittivities at imaginary frequency.

    The wavevector argument is k_perp or |k| depending on
    ``params.wavevector_form``.
    """
    xi = _positive_xi(xi)
    if params.wavevector_form == WavevectorForm.FULL_K:
        kappa = np.hypot(k_perp, k3)
    else:
        kappa = np.asarray(k_perp, dtype=float)
    g = params.base.relaxation.at(T)
    d = params.base.plasma_frequency**2 / (xi * (xi + g))
    eps_t = 1.0 + d * (1.0 + params.v_transverse * kappa * HBAR_C / xi)
    eps_l = 1.0 + d / (1.0 + params.v_longitudinal * kappa * HBAR_C / xi)
    return NonlocalPermittivityPair(_out(eps_t), _out(eps_l))


def propagating_wave_deviation(params: NonlocalDrudeParams, omega, k_perp):
    """Size of the nonlocal correction v k_perp c / omega on the mass shell.

    Bounded by max(v_transverse, v_longitudinal) whenever omega >= hbar c k_perp.
    """
    omega = np.asarray(omega, dtype=float)
    k_perp = np.asarray(k_perp, dtype=float)
    if np.any(omega < HBAR_C * k_perp) or np.any(omega <= 0):
        raise ValueError("point lies in the evanescent region (omega < hbar c k_perp)")
    v = max(params.v_transverse, params.v_longitudinal)
    return _out(np.abs(v * k_perp * HBAR_C / omega))
