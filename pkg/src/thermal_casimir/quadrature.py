"""Fixed-node quadrature rules shared by the Lifshitz and impedance integrals."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class Rule:
    """Nodes and weights plus a coarse companion rule for error estimates.

    ``coarse`` holds weights on the same nodes (zero where the coarse rule
    has no node), so one integrand evaluation serves both rules.
    """

    x: np.ndarray
    w: np.ndarray
    coarse: np.ndarray

    def integrate(self, f, axis=-1):
        fine = np.sum(f * self.w, axis=axis)
        rough = np.sum(f * self.coarse, axis=axis)
        return fine, np.abs(fine - rough)


@lru_cache(maxsize=16)
def exp_sinh(h: float = 0.05, u_lo: float = -3.5, u_hi: float = 2.2) -> Rule:
    """Exp-sinh rule for integrals over (0, inf) of exponentially decaying functions.

    x = exp(pi/2 sinh u).  The upper end is cut at u_hi because e^{-x}
    underflows long before the double-exponential map overflows; the lower
    end reaches x ~ 1e-11, below which the integrands here vanish linearly.
    """
    n = int(round((u_hi - u_lo) / h))
    if n % 2:
        n += 1
    u = u_lo + h * np.arange(n + 1)
    x = np.exp(0.5 * np.pi * np.sinh(u))
    w = h * 0.5 * np.pi * np.cosh(u) * x
    coarse = np.where(np.arange(n + 1) % 2 == 0, 2.0 * w, 0.0)
    for arr in (x, w, coarse):
        arr.setflags(write=False)
    return Rule(x, w, coarse)


@lru_cache(maxsize=32)
def gauss_legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panels(edges, n: int = 8):
    """Composite Gauss-Legendre nodes on consecutive intervals.

    ``edges`` may carry leading batch dimensions; the last axis lists the
    panel boundaries.  Returns flattened (nodes, weights) over the last axis.
    """
    edges = np.asarray(edges, dtype=float)
    gx, gw = gauss_legendre(n)
    lo = edges[..., :-1, None]
    hi = edges[..., 1:, None]
    half = 0.5 * (hi - lo)
    x = (lo + hi) * 0.5 + half * gx
    w = half * gw
    shape = edges.shape[:-1] + (-1,)
    return x.reshape(shape), w.reshape(shape)
