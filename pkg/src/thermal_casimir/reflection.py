"""TM/TE reflection coefficients on the imaginary frequency axis.

Local media go through the Fresnel form, nonlocal Drude-like media through
surface impedances obtained by a k3 quadrature.  ``coefficients`` is the
vectorised dispatcher the Lifshitz integrals use; it routes xi = 0 entries
to the analytic zero-frequency limits.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .quadrature import gauss_legendre
from .response import Material, NonlocalDrudeParams, PermeabilityModel, WavevectorForm
from .units import HBAR_C


class Method(str, enum.Enum):
    FRESNEL = "fresnel"
    IMPEDANCE = "impedance"
    IDEAL_METAL = "ideal_metal"
    LIMIT = "zero_frequency_limit"


@dataclass(frozen=True)
class WaveVectorPoint:
    """Transverse wavevector (1/um) and imaginary frequency hbar*xi (eV)."""

    k_perp: float
    xi: float

    def __post_init__(self):
        if np.any(np.asarray(self.k_perp) < 0) or np.any(np.asarray(self.xi) < 0):
            raise ValueError("k_perp and xi must be non-negative")

    @property
    def q(self):
        return np.sqrt(np.asarray(self.k_perp) ** 2 + (np.asarray(self.xi) / HBAR_C) ** 2)


@dataclass(frozen=True)
class ReflectionPair:
    r_tm: float
    r_te: float
    method: Method = Method.FRESNEL


@dataclass(frozen=True)
class ImpedancePair:
    z_tm: float
    z_te: float


def _out(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


def inside_wavenumber(eps, mu, point: WaveVectorPoint):
    """k_l = sqrt(k_perp^2 + eps mu xi^2 / (hbar c)^2)."""
    return _out(np.sqrt(np.asarray(point.k_perp) ** 2 + eps * mu * (np.asarray(point.xi) / HBAR_C) ** 2))


def _fresnel(eps, mu, xi, kp):
    q = np.sqrt(kp**2 + (xi / HBAR_C) ** 2)
    k = np.sqrt(kp**2 + eps * mu * (xi / HBAR_C) ** 2)
    return (eps * q - k) / (eps * q + k), (mu * q - k) / (mu * q + k)


def fresnel_pair(eps, mu, point: WaveVectorPoint) -> ReflectionPair:
    xi = np.asarray(point.xi, float)
    if np.any(xi <= 0):
        raise ValueError("Fresnel form needs xi > 0; use zero_frequency_pair at xi = 0")
    rtm, rte = _fresnel(np.asarray(eps, float), np.asarray(mu, float), xi, np.asarray(point.k_perp, float))
    return ReflectionPair(_out(rtm), _out(rte), Method.FRESNEL)


def local_impedances(eps, mu, point: WaveVectorPoint) -> ImpedancePair:
    """Z_TM = hbar c k_l / (xi eps), Z_TE = xi mu / (hbar c k_l)."""
    xi = np.asarray(point.xi, float)
    if np.any(xi <= 0):
        raise ValueError("impedances need xi > 0")
    k = inside_wavenumber(eps, mu, point)
    return ImpedancePair(_out(HBAR_C * k / (xi * eps)), _out(xi * mu / (HBAR_C * np.asarray(k))))


def impedance_pair(z: ImpedancePair, point: WaveVectorPoint) -> ReflectionPair:
    xi = np.asarray(point.xi, float)
    if np.any(xi <= 0):
        raise ValueError("impedance form needs xi > 0")
    cq = HBAR_C * point.q
    z_tm = np.asarray(z.z_tm)
    z_te = np.asarray(z.z_te)
    rtm = (cq - xi * z_tm) / (cq + xi * z_tm)
    rte = (cq * z_te - xi) / (cq * z_te + xi)
    return ReflectionPair(_out(rtm), _out(rte), Method.IMPEDANCE)


def ideal_metal_pair() -> ReflectionPair:
    return ReflectionPair(1.0, -1.0, Method.IDEAL_METAL)


# -- nonlocal impedances -----------------------------------------------------

K3_DECADES = 1e9       # upper k3 cut relative to the largest physical scale
K3_PANEL = 0.5         # panel width in u, where k3 = s sinh(u)
K3_ORDER = 8
_CHUNK = 4096


def _k3_grid(s, top, width, order):
    """Per-point sinh-mapped Gauss-Legendre nodes on k3 in [0, top].

    Every point shares the same number of panels; their width in u is
    u_max/panels <= ``width``.
    """
    umax = np.arcsinh(top / s)
    npan = max(1, int(np.ceil(np.max(umax) / width)))
    gx, gw = gauss_legendre(order)
    t = (np.arange(npan)[:, None] + 0.5 * (gx + 1.0)).ravel() / npan
    wt = np.tile(0.5 * gw, npan) / npan
    u = umax[..., None] * t
    k3 = s[..., None] * np.sinh(u)
    dk = (s * umax)[..., None] * np.cosh(u) * wt
    return k3, dk


def _nonlocal_integrands(params, mu, xi, kp, T, k3):
    """Integrands of Z_TE/xi and xi*Z_TM over k3 (without the 2 hbar c / pi factor)."""
    base = params.base
    wp2 = base.plasma_frequency**2
    g = base.relaxation.at(T)
    kk2 = kp**2 + k3**2
    kappa = np.sqrt(kk2) if params.wavevector_form == WavevectorForm.FULL_K else kp + 0.0 * k3
    vt = params.v_transverse * kappa * HBAR_C
    vl = params.v_longitudinal * kappa * HBAR_C
    with np.errstate(divide="ignore", invalid="ignore"):
        if g > 0:
            ratio = (xi + vt) / (xi + g)
        else:
            ratio = np.where(xi > 0, 1.0 + vt / np.where(xi > 0, xi, 1.0),
                             np.where(vt > 0, np.inf, 1.0))
        xe = xi**2 + wp2 * ratio                       # xi^2 eps_T
        den = mu * xe + HBAR_C**2 * kk2
        inv_l = (xi + g) * (xi + vl) / ((xi + g) * (xi + vl) + wp2)
        te = mu / den
        tm = (kp**2 * inv_l + k3**2 * np.where(np.isinf(den), 0.0, mu * xi**2 / den)) / kk2
    return te, tm


def _nonlocal_scaled(params: NonlocalDrudeParams, mu, xi, kp, T, width=K3_PANEL, order=K3_ORDER):
    """Return (xi*Z_TM, Z_TE/xi); both finite down to xi = 0."""
    xi, kp, mu = np.broadcast_arrays(np.asarray(xi, float), np.asarray(kp, float),
                                     np.asarray(mu, float))
    shape = xi.shape
    xi, kp, mu = xi.ravel(), kp.ravel(), mu.ravel()
    scale_p = params.base.plasma_frequency / HBAR_C
    q = np.sqrt(kp**2 + (xi / HBAR_C) ** 2)
    top = K3_DECADES * np.maximum(np.maximum(q, kp), scale_p)
    s = np.where(kp > 0, kp, np.maximum(q, scale_p) * 1e-12)
    xz = np.empty_like(xi)
    zx = np.empty_like(xi)
    for lo in range(0, xi.size, _CHUNK):
        sl = slice(lo, lo + _CHUNK)
        k3, dk = _k3_grid(s[sl], top[sl], width, order)
        a = (xi[sl, None], kp[sl, None], T)
        te, tm = _nonlocal_integrands(params, mu[sl, None], a[0], a[1], T, k3)
        # 1/k^2 tails beyond the cut: int_K^inf ~ K f(K)
        te_t, tm_t = _nonlocal_integrands(params, mu[sl, None], a[0], a[1], T, top[sl, None])
        zte = np.sum(te * dk, axis=-1) + top[sl] * te_t[:, 0]
        xzt = np.sum(tm * dk, axis=-1) + top[sl] * tm_t[:, 0]
        zx[sl] = 2.0 * HBAR_C / np.pi * zte
        xz[sl] = 2.0 * HBAR_C / np.pi * xzt
    return xz.reshape(shape), zx.reshape(shape)


def _r_from_scaled(xz, zx, xi, kp):
    cq = HBAR_C * np.sqrt(kp**2 + (xi / HBAR_C) ** 2)
    rtm = (cq - xz) / (cq + xz)
    rte = (cq * zx - 1.0) / (cq * zx + 1.0)
    return rtm, rte


def nonlocal_impedances(params: NonlocalDrudeParams, mu, point: WaveVectorPoint, T: float = 300.0,
                        rtol: float = 1e-8, check: bool = True) -> ImpedancePair:
    """Surface impedances of a nonlocal Drude-like half-space at imaginary frequency.

    The k3 integrals are folded onto [0, inf) and mapped by k3 = k_perp sinh(u).
    With ``check`` the result is recomputed on panels of half the width and a
    disagreement above ``rtol`` raises ArithmeticError naming the worst point.
    """
    xi = np.asarray(point.xi, float)
    if np.any(xi <= 0):
        raise ValueError("nonlocal impedances need xi > 0; the xi = 0 limit lives in zero_frequency_pair")
    xz, zx = _nonlocal_scaled(params, mu, xi, point.k_perp, T)
    if check:
        xz2, zx2 = _nonlocal_scaled(params, mu, xi, point.k_perp, T, width=K3_PANEL / 2)
        err = np.maximum(np.abs(xz2 - xz) / np.abs(xz2), np.abs(zx2 - zx) / np.abs(zx2))
        if np.any(err > rtol):
            i = np.unravel_index(np.argmax(err), np.shape(err)) if np.ndim(err) else ()
            raise ArithmeticError(
                f"k3 quadrature not converged: rel. diff {np.max(err):.2e} at "
                f"xi={np.broadcast_to(xi, np.shape(err))[i]:.4g} eV, "
                f"k_perp={np.broadcast_to(point.k_perp, np.shape(err))[i]:.4g} 1/um")
        xz, zx = xz2, zx2
    return ImpedancePair(_out(xz / xi), _out(zx * xi))


# -- zero frequency ----------------------------------------------------------

def _zero_local(material: Material, kp, T):
    perm = material.permittivity
    mu0 = material.permeability.static_mu
    kp = np.asarray(kp, float)
    one = np.ones_like(kp)
    r_te_nonmag = (mu0 - 1.0) / (mu0 + 1.0) * one
    kind = perm.kind
    if kind == "tabulated":
        ext = perm.extrapolation.model
        if ext is None:
            e0 = perm.static(T)
            return (e0 - 1.0) / (e0 + 1.0) * one, r_te_nonmag
        kind = ext.kind
        wp = ext.plasma_frequency
    elif kind in ("drude", "plasma"):
        wp = perm.plasma_frequency
    if kind == "drude":
        return one, r_te_nonmag
    if kind == "plasma":
        k = np.sqrt(kp**2 + mu0 * (wp / HBAR_C) ** 2)
        return one, (mu0 * kp - k) / (mu0 * kp + k)
    if kind == "dielectric":
        if perm.conducting(T):
            return one, r_te_nonmag
        e0 = perm.eps0
        return (e0 - 1.0) / (e0 + 1.0) * one, r_te_nonmag
    raise TypeError(f"no zero-frequency limit for model kind {kind!r}")


def zero_frequency_pair(material: Material, k_perp, T: float) -> ReflectionPair:
    """Reflection coefficients at xi = 0 from the analytic limits of each model."""
    if not isinstance(material, Material):
        material = Material(material)
    kp = np.asarray(k_perp, float)
    if np.any(kp <= 0):
        raise ValueError("k_perp must be positive")
    kind = material.kind
    if kind == "ideal":
        return ideal_metal_pair()
    if kind == "vacuum":
        return ReflectionPair(_out(0 * kp), _out(0 * kp), Method.LIMIT)
    if kind == "nonlocal":
        mu0 = material.permeability.static_mu
        xz, zx = _nonlocal_scaled(material.permittivity, mu0, 0.0, kp, T)
        rtm, rte = _r_from_scaled(xz, zx, 0.0, kp)
        return ReflectionPair(_out(rtm), _out(rte), Method.IMPEDANCE)
    rtm, rte = _zero_local(material, kp, T)
    return ReflectionPair(_out(rtm), _out(rte), Method.LIMIT)


def coefficients(material: Material, xi, k_perp, T: float):
    """Vectorised (r_TM, r_TE) for broadcastable ``xi`` and ``k_perp``.

    Entries with xi == 0 use the zero-frequency limits; mu is the static
    value there and 1 elsewhere.
    """
    xi = np.asarray(xi, float)
    kp = np.asarray(k_perp, float)
    shape = np.broadcast_shapes(xi.shape, kp.shape)
    kind = material.kind
    if kind == "ideal":
        return np.ones(shape), -np.ones(shape)
    if kind == "vacuum":
        return np.zeros(shape), np.zeros(shape)
    zero = xi == 0
    if kind == "nonlocal":
        mu = np.where(zero, material.permeability.static_mu, 1.0)
        xz, zx = _nonlocal_scaled(material.permittivity, mu, xi, kp, T)
        return _r_from_scaled(xz, zx, xi, kp)
    rtm = np.zeros(shape)
    rte = np.zeros(shape)
    if np.any(~zero):
        xs = np.where(zero, 1.0, xi)
        eps = np.asarray(material.permittivity.eps_imag(xs, T))
        a, b = _fresnel(eps, 1.0, xs, kp)
        rtm = np.broadcast_to(a, shape).copy()
        rte = np.broadcast_to(b, shape).copy()
    if np.any(zero):
        a0, b0 = _zero_local(material, kp, T)
        z = np.broadcast_to(zero, shape)
        rtm = np.where(z, np.broadcast_to(a0, shape), rtm)
        rte = np.where(z, np.broadcast_to(b0, shape), rte)
    return rtm, rte


__all__ = [
    "Method", "WaveVectorPoint", "ReflectionPair", "ImpedancePair", "inside_wavenumber",
    "fresnel_pair", "zero_frequency_pair", "local_impedances", "nonlocal_impedances",
    "impedance_pair", "ideal_metal_pair", "coefficients", "PermeabilityModel",
]
