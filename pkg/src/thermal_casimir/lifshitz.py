"""Casimir pressure and free energy between two identical plates.

Imaginary-frequency (Matsubara) representation.  For each frequency the
k_perp integral is done in y = 2 a q over [2 a xi / hbar c, inf) with an
exp-sinh rule in x = y - y_l.  The frequency sum is explicit when it
converges in a modest number of terms and otherwise switches to an
explicit head plus an Euler-Maclaurin tail, which is what makes
millikelvin free energies affordable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import bernoulli

from .quadrature import exp_sinh, gauss_legendre
from .reflection import coefficients
from .response import Material
from .units import HBAR_C, K_B, ZETA3, EvaluationPoint


class ConvergenceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class NumericSettings:
    """Knobs for the Matsubara sum and the k_perp quadrature.

    direct_limit : int
        Estimated number of Matsubara terms above which the sum is done as
        ``em_head`` explicit terms plus an Euler-Maclaurin tail.
    """

    truncation_tol: float = 1e-9
    l_cap: int = 100_000
    quad_step: float = 0.05
    direct_limit: int = 2048
    em_head: int = 256
    keep_terms: bool = False

    def __post_init__(self):
        if not 0 < self.truncation_tol < 1:
            raise ValueError("truncation_tol must lie in (0, 1)")
        if self.l_cap < 4 or self.em_head < 16 or self.direct_limit < self.em_head:
            raise ValueError("inconsistent summation limits")
        if not 0 < self.quad_step <= 0.2:
            raise ValueError("quad_step must lie in (0, 0.2]")


DEFAULT_SETTINGS = NumericSettings()


@dataclass(frozen=True)
class PressureResult:
    """Pressure in eV/um^3 (negative = attraction) with convergence metadata."""

    pressure: float
    terms_used: int
    quadrature_error: float
    truncation_error: float = 0.0
    summation: str = "direct"
    per_term_breakdown: tuple | None = None

    @property
    def value(self) -> float:
        return self.pressure


@dataclass(frozen=True)
class FreeEnergyResult:
    """Free energy per unit area in eV/um^2."""

    free_energy: float
    terms_used: int
    quadrature_error: float
    truncation_error: float = 0.0
    summation: str = "direct"
    per_term_breakdown: tuple | None = None

    @property
    def value(self) -> float:
        return self.free_energy


@dataclass(frozen=True)
class ThermalCorrection:
    absolute: float
    relative: float
    pressure_T: float = math.nan
    pressure_0: float = math.nan


def _as_material(model) -> Material:
    return model if isinstance(model, Material) else Material(model)


# -- per-frequency k_perp integrals -----------------------------------------

def _summand(r, y, e, kind):
    # 1 - r^2 e^{-y}, kept accurate near y = 0 where r^2 -> 1
    den = -np.expm1(-y) + (1.0 - r) * (1.0 + r) * e
    r2e = r * r * e
    if kind == "pressure":
        return r2e / den
    big = r2e > 0.5
    return np.where(big, np.log(np.where(big, den, 1.0)), np.log1p(-np.where(big, 0.0, r2e)))


def _xi_integrals(material: Material, a: float, xi, T: float, kind: str, rule):
    """k_perp integrals at each xi: returns (values, error estimates).

    Pressure values carry 1/(2a)^3 and include y^2; free-energy values carry
    1/(2a)^2 and include y.
    """
    xi = np.asarray(xi, float)
    x = rule.x
    yl = (2.0 * a / HBAR_C) * xi[:, None]
    y = yl + x
    kp = np.sqrt(x * (x + 2.0 * yl)) / (2.0 * a)
    rtm, rte = coefficients(material, xi[:, None], kp, T)
    e = np.exp(-y)
    g = _summand(rtm, y, e, kind) + _summand(rte, y, e, kind)
    if kind == "pressure":
        f = y * y * g / (2.0 * a) ** 3
    else:
        f = y * g / (2.0 * a) ** 2
    return rule.integrate(f)


def _prefactor(kind):
    # P = -(kT/pi) sum',  F = (kT/2pi) sum'
    return -1.0 / math.pi if kind == "pressure" else 0.5 / math.pi


# -- Matsubara summation -----------------------------------------------------

def _cut_energy(a, tol):
    """Frequency beyond which terms are below ``tol`` relative (e^{-y} decay)."""
    return (math.log(1.0 / tol) + 12.0) * HBAR_C / (2.0 * a)


def _direct_sum(f, d, n_est, settings):
    vals_all = []
    errs_all = []
    n = min(max(n_est + 8, 16), settings.l_cap)
    start = 0
    while True:
        l = np.arange(start, start + n)
        v, e = f(d * l)
        vals_all.append(v)
        errs_all.append(e)
        vals = np.concatenate(vals_all)
        errs = np.concatenate(errs_all)
        t = vals.copy()
        t[0] *= 0.5
        s = np.cumsum(t)
        if np.all(t == 0):
            return t, errs, 3, 0.0
        # a term counts as small when it and its geometric tail are below tol
        with np.errstate(divide="ignore", invalid="ignore"):
            rho = np.abs(t[1:] / t[:-1])
        rho = np.clip(np.nan_to_num(rho, nan=0.0), 0.0, 0.999)
        tail = np.abs(t[1:]) * rho / (1.0 - rho)
        small = (np.abs(t[1:]) + tail) < settings.truncation_tol * np.abs(s[1:])
        run = small[:-2] & small[1:-1] & small[2:]
        hit = np.flatnonzero(run)
        if hit.size:
            last = hit[0] + 3          # index of the third small term
            t = t[: last + 1]
            errs = errs[: last + 1]
            return t, errs, last + 1, float(tail[last - 1])
        start += n
        if start >= settings.l_cap:
            raise ConvergenceError(
                f"Matsubara sum not converged after {settings.l_cap} terms")
        n = min(2 * n, settings.l_cap - start)


def _em_sum(f, d, xi_max, settings):
    """Explicit head l < H plus Euler-Maclaurin tail sum_{l >= H} f(l d)."""
    H = settings.em_head
    v, e = f(d * np.arange(0, H + 6))
    head = v[:H].copy()
    head[0] *= 0.5
    g = v[H:H + 6]
    c = np.polyfit(np.arange(6.0), g, 5)
    d1 = np.polyval(np.polyder(c, 1), 0.0) / d
    d3 = np.polyval(np.polyder(c, 3), 0.0) / d**3
    xs = H * d
    n_pan = max(2, int(math.ceil(math.log(xi_max / xs) / 0.4)))
    edges = np.linspace(math.log(xs), math.log(xi_max), n_pan + 1)
    gx, gw = gauss_legendre(10)
    lo, hi = edges[:-1, None], edges[1:, None]
    s = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gx
    w = (0.5 * (hi - lo) * gw).ravel()
    xi = np.exp(s.ravel())
    vt, et = f(xi)
    integral = np.sum(vt * xi * w) / d
    correction3 = d**3 * d3 / 720.0
    tail = integral + 0.5 * g[0] - d * d1 / 12.0 + correction3
    quad_err = float(np.sum(e[:H]) + np.sum(et * xi * w) / d)
    return head, tail, quad_err, abs(correction3)


def _matsubara(material, a, T, kind, settings, T_material=None):
    if not a > 0:
        raise ValueError("separation must be positive")
    if not T > 0:
        raise ValueError("Matsubara summation needs T > 0; use the zero-temperature path")
    material = _as_material(material)
    Tm = T if T_material is None else T_material
    rule = exp_sinh(settings.quad_step)
    d = 2.0 * math.pi * K_B * T

    def f(xi):
        return _xi_integrals(material, a, xi, Tm, kind, rule)

    xcut = _cut_energy(a, settings.truncation_tol)
    n_est = int(math.ceil(xcut / d))
    pref = _prefactor(kind) * K_B * T
    if n_est <= settings.direct_limit:
        t, errs, used, trunc = _direct_sum(f, d, n_est, settings)
        total = pref * math.fsum(t)
        breakdown = None
        if settings.keep_terms:
            breakdown = tuple((i, pref * v) for i, v in enumerate(t))
        return total, used, abs(pref) * float(np.sum(errs)), abs(pref) * trunc, "direct", breakdown
    head, tail, qerr, terr = _em_sum(f, d, 2.2 * xcut, settings)
    total = pref * (math.fsum(head) + tail)
    breakdown = None
    if settings.keep_terms:
        breakdown = tuple((i, pref * v) for i, v in enumerate(head))
    return total, settings.em_head, abs(pref) * qerr, abs(pref) * terr, "euler-maclaurin", breakdown


def _zero_temperature(material, a, kind, settings, T_material=0.0):
    if not a > 0:
        raise ValueError("separation must be positive")
    material = _as_material(material)
    rule = exp_sinh(settings.quad_step)
    s = HBAR_C / (2.0 * a)
    xi = s * rule.x
    v, e = _xi_integrals(material, a, xi, T_material, kind, rule)
    fine = np.sum(v * rule.w) * s
    coarse = np.sum(v * rule.coarse) * s
    err = abs(fine - coarse) + np.sum(e * rule.w) * s
    # k_B T sum' -> (1/2pi) int d xi
    pref = _prefactor(kind) / (2.0 * math.pi)
    return pref * fine, rule.x.size, abs(pref) * err


def pressure_matsubara(point: EvaluationPoint, model, settings: NumericSettings = DEFAULT_SETTINGS,
                       T_material: float | None = None) -> PressureResult:
    """Lifshitz pressure at finite temperature as a Matsubara sum.

    Parameters
    ----------
    point : EvaluationPoint
        Separation (um) and temperature (K); T must be positive.
    model : Material or permittivity record
    settings : NumericSettings
    T_material : float, optional
        Temperature at which material parameters (relaxation, conductivity)
        are evaluated; defaults to ``point.T``.
    """
    p, used, qerr, terr, how, br = _matsubara(model, point.a, point.T, "pressure", settings, T_material)
    return PressureResult(p, used, qerr, terr, how, br)


def pressure_zero_temperature(a: float, model, settings: NumericSettings = DEFAULT_SETTINGS,
                              T_material: float = 0.0) -> PressureResult:
    """T = 0 pressure: the Matsubara sum becomes a frequency integral.

    ``T_material`` fixes the temperature used for material parameters;
    it defaults to 0 (gamma(0), sigma0(0)).
    """
    p, n, err = _zero_temperature(model, a, "pressure", settings, T_material)
    return PressureResult(p, n, err, 0.0, "integral")


def free_energy(point: EvaluationPoint, model, settings: NumericSettings = DEFAULT_SETTINGS,
                T_material: float | None = None) -> FreeEnergyResult:
    """Free energy per unit area, (kT/2pi) sum' int k dk [ln(1 - r_TM^2 e^-2aq) + TE]."""
    if point.T == 0:
        f, n, err = _zero_temperature(model, point.a, "free_energy", settings,
                                      0.0 if T_material is None else T_material)
        return FreeEnergyResult(f, n, err, 0.0, "integral")
    f, used, qerr, terr, how, br = _matsubara(model, point.a, point.T, "free_energy", settings, T_material)
    return FreeEnergyResult(f, used, qerr, terr, how, br)


def thermal_correction(point: EvaluationPoint, model, settings: NumericSettings = DEFAULT_SETTINGS,
                       reference: str = "frozen") -> ThermalCorrection:
    """P(a, T) - P(a, 0) and its ratio to P(a, 0).

    With ``reference="frozen"`` (default) the zero-temperature pressure is
    computed with material parameters held at their values at T, so the
    correction isolates the effect of the Matsubara sum.  ``"cold"``
    evaluates the material at T = 0 instead.
    """
    if reference not in ("frozen", "cold"):
        raise ValueError("reference must be 'frozen' or 'cold'")
    p0 = pressure_zero_temperature(point.a, model, settings,
                                   point.T if reference == "frozen" else 0.0).pressure
    if point.T == 0:
        return ThermalCorrection(0.0, 0.0, p0, p0)
    pT = pressure_matsubara(point, model, settings).pressure
    dp = pT - p0
    return ThermalCorrection(dp, dp / p0 if p0 != 0 else math.nan, pT, p0)


# -- closed forms ------------------------------------------------------------

_BERN = bernoulli(40)


def _zeta_nonpositive(n):
    """zeta(-n) for integer n >= 0."""
    return -_BERN[n + 1] / (n + 1) if n > 0 else -0.5


def polylog3(z):
    """Li_3(z) for 0 <= z <= 1, absolute error below 1e-15.

    Direct series for z <= 1/2; around z = 1 the expansion in mu = ln z,
    Li_3(e^mu) = sum_{k != 2} zeta(3-k) mu^k / k! + mu^2/2 (3/2 - ln(-mu)).
    """
    z_arr = np.asarray(z, dtype=float)
    if np.any((z_arr < 0) | (z_arr > 1)) or np.any(~np.isfinite(z_arr)):
        raise ValueError("polylog3 is implemented for 0 <= z <= 1")
    out = np.empty_like(z_arr)
    flat = z_arr.ravel()
    res = out.ravel()
    for i, zz in enumerate(flat):
        if zz <= 0.5:
            n = np.arange(1, 60)
            res[i] = math.fsum(zz**n / n**3)
        elif zz == 1.0:
            res[i] = ZETA3
        else:
            mu = math.log(zz)
            acc = ZETA3 + (math.pi**2 / 6.0) * mu + 0.5 * mu * mu * (1.5 - math.log(-mu))
            term = mu * mu / 2.0
            for k in range(3, 30):
                term *= mu / k
                acc += _zeta_nonpositive(k - 3) * term
            res[i] = acc
    out = res.reshape(z_arr.shape)
    return float(out) if out.ndim == 0 else out


def ideal_metal_asymptotics(point: EvaluationPoint):
    """Low- and high-temperature ideal-metal pressures (eV/um^3)."""
    a, T = point.a, point.T
    t_eff = HBAR_C / (2.0 * a * K_B)
    low = -(math.pi**2 * HBAR_C / (240.0 * a**4)) * (1.0 + (T / t_eff) ** 4 / 3.0)
    high = -K_B * T * ZETA3 / (4.0 * math.pi * a**3)
    return low, high


def high_T_dielectric(a: float, T: float, eps0: float) -> float:
    """-kT/(8 pi a^3) Li_3(((eps0-1)/(eps0+1))^2), the l = 0 term for a dielectric."""
    if not (a > 0 and T > 0 and eps0 >= 1):
        raise ValueError("need a > 0, T > 0, eps0 >= 1")
    r0 = (eps0 - 1.0) / (eps0 + 1.0)
    return -K_B * T / (8.0 * math.pi * a**3) * polylog3(r0 * r0)


def high_T_ratio(model, a: float, T: float, settings: NumericSettings = DEFAULT_SETTINGS) -> float:
    p = pressure_matsubara(EvaluationPoint(a, T), model, settings).pressure
    return p / ideal_metal_asymptotics(EvaluationPoint(a, T))[1]


__all__ = [
    "NumericSettings", "PressureResult", "FreeEnergyResult", "ThermalCorrection", "ConvergenceError",
    "pressure_matsubara", "pressure_zero_temperature", "free_energy", "thermal_correction",
    "polylog3", "ideal_metal_asymptotics", "high_T_dielectric", "high_T_ratio",
]
