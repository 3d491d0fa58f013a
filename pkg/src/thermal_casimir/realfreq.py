"""Real-frequency form of the Lifshitz pressure, split into wave sectors.

Validation path only: it needs the complex permittivity on the real axis and
is orders of magnitude slower than the Matsubara sum.  For each k_perp the
frequency integral is split at omega = hbar c k_perp:

* evanescent (omega < hbar c k_perp): q real, integrated in log omega;
* propagating (omega > hbar c k_perp): q = -i kappa, integrated in kappa.
  Beyond kappa = 50/a the integrand oscillates like exp(2 i n a kappa); the
  first two terms of the geometric series are integrated there with QAWF.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .lifshitz import _as_material
from .quadrature import panels
from .units import HBAR_C, K_B, EvaluationPoint

K_EDGES = (0.0, 0.5, 2.0, 6.0, 14.0, 26.0, 40.0)   # in units of 1/(2a)
KAPPA_CUT = 50.0                                     # in units of 1/a


@dataclass(frozen=True)
class RealFrequencyPressure:
    total: float
    propagating: float
    evanescent: float


def _reflect(eps, q, kin):
    return (eps * q - kin) / (eps * q + kin), (q - kin) / (q + kin)


class _Integrand:
    def __init__(self, material, a, T):
        self.perm = material.permittivity
        self.a = a
        self.T = T
        self.kT = K_B * T

    def eps(self, w):
        return self.perm.eps_real(w, self.T)

    def g(self, q, kin, eps):
        rtm, rte = _reflect(eps, q, kin)
        ex = np.exp(-2.0 * self.a * q)
        return q * (rtm**2 * ex / (1 - rtm**2 * ex) + rte**2 * ex / (1 - rte**2 * ex))

    def coth(self, w):
        return 1.0 / np.tanh(w / (2.0 * self.kT))

    def evanescent(self, s, k):
        w = math.exp(s)
        q = complex(math.sqrt(max(k * k - (w / HBAR_C) ** 2, 0.0)))
        e = self.eps(w)
        kin = np.sqrt(k * k - e * (w / HBAR_C) ** 2 + 0j)
        return float(self.coth(w) * self.g(q, kin, e).imag * w)

    def _prop_parts(self, kap, k):
        w = HBAR_C * math.hypot(k, kap)
        e = self.eps(w)
        kin = np.sqrt(k * k - e * (w / HBAR_C) ** 2 + 0j)
        rtm, rte = _reflect(e, -1j * kap, kin)
        jac = self.coth(w) * HBAR_C * kap / math.hypot(k, kap)
        return rtm, rte, jac

    def propagating(self, kap, k):
        w = HBAR_C * math.hypot(k, kap)
        e = self.eps(w)
        kin = np.sqrt(k * k - e * (w / HBAR_C) ** 2 + 0j)
        jac = self.coth(w) * HBAR_C * kap / math.hypot(k, kap)
        return float(self.g(-1j * kap, kin, e).imag * jac)


def _quad(f, lo, hi, args=(), points=None, rtol=1e-9):
    val, _ = quad(f, lo, hi, args=args, points=points, limit=2000, epsabs=0.0, epsrel=rtol)
    return val


def _evanescent_k(it: _Integrand, k, rtol):
    wmax = HBAR_C * k
    marks = [1e-8, 1e-6, 1e-4, 1e-3, 1e-2, it.kT, 0.1, 1.0]
    for f in it.perm.features(it.T):
        marks += [0.9 * f, f, 1.1 * f]
    lo = 1e-14
    pts = sorted({math.log(m) for m in marks if lo < m < wmax})
    return _quad(it.evanescent, math.log(lo), math.log(wmax), (k,), pts or None, rtol)


def _propagating_k(it: _Integrand, k, rtol):
    a = it.a
    K0 = KAPPA_CUT / a
    edges = np.linspace(0.0, K0, int(K0 * a) + 2)
    body = math.fsum(_quad(it.propagating, lo, hi, (k,), None, rtol) for lo, hi in zip(edges[:-1], edges[1:]))
    # tail: Im[q sum_n (r^2n e^{2 i n a kappa})] with q = -i kappa
    tail = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            for n in (1, 2):
                def fc(kap, n=n):
                    rtm, rte, jac = it._prop_parts(kap, k)
                    return float(-kap * (rtm ** (2 * n) + rte ** (2 * n)).real * jac)

                def fs(kap, n=n):
                    rtm, rte, jac = it._prop_parts(kap, k)
                    return float(kap * (rtm ** (2 * n) + rte ** (2 * n)).imag * jac)

                wv = 2.0 * n * a
                tail += quad(fc, K0, np.inf, weight="cos", wvar=wv, limlst=200)[0]
                tail += quad(fs, K0, np.inf, weight="sin", wvar=wv, limlst=200)[0]
        except IntegrationWarning as exc:
            raise ArithmeticError(
                f"oscillatory quadrature failed in the propagating sector ({exc}); "
                "increase damping or use the Matsubara representation") from None
    return body + tail


def pressure_real_frequency(point: EvaluationPoint, model, rtol: float = 1e-8,
                            order: int = 8) -> RealFrequencyPressure:
    """Pressure from the real-frequency representation, with its sector split.

    The k_perp integral runs over 2 a k_perp in [0, 40] on Gauss-Legendre panels.
    """
    if not point.T > 0:
        raise ValueError("real-frequency representation needs T > 0")
    material = _as_material(model)
    if material.kind == "vacuum":
        return RealFrequencyPressure(0.0, 0.0, 0.0)
    if material.kind not in ("drude", "dielectric"):
        raise TypeError(f"no real-axis permittivity for model kind {material.kind!r}")
    if material.permeability.static_mu != 1.0:
        raise TypeError("real-frequency path supports non-magnetic media only")
    a = point.a
    it = _Integrand(material, a, point.T)
    kk, kw = panels(np.asarray(K_EDGES) / (2.0 * a), order)
    ev = np.array([_evanescent_k(it, k, rtol) for k in kk])
    pr = np.array([_propagating_k(it, k, rtol) for k in kk])
    pref = -1.0 / (2.0 * math.pi**2)
    e_tot = pref * float(np.sum(kk * kw * ev))
    p_tot = pref * float(np.sum(kk * kw * pr))
    return RealFrequencyPressure(e_tot + p_tot, p_tot, e_tot)
