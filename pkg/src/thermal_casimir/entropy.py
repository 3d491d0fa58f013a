"""Casimir entropy per unit area and the low-temperature (Nernst) classification."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .lifshitz import DEFAULT_SETTINGS, NumericSettings, free_energy
from .units import K_B, EvaluationPoint

NOISE_FACTOR = 10.0
ENTROPY_TRUNCATION = 1e-14
_EPS = np.finfo(float).eps


class NernstClass(str, enum.Enum):
    SATISFIED = "nernst_satisfied"
    NEGATIVE = "negative_violation"
    POSITIVE = "positive_violation"


@dataclass(frozen=True)
class EntropyCurve:
    """Entropy samples in eV/(K um^2) with the extrapolated T -> 0 value."""

    temperatures: np.ndarray
    entropies: np.ndarray
    steps: np.ndarray
    limit_estimate: float
    tolerance: float
    classification: NernstClass

    def in_units(self, a: float) -> np.ndarray:
        """Entropies in units of k_B / (16 pi a^2)."""
        return self.entropies / entropy_unit(a)


def entropy_unit(a: float) -> float:
    return K_B / (16.0 * math.pi * a * a)


def default_step(T: float, spacing: float = math.inf) -> float:
    """max(0.5 K, T/100), kept below T/4 and half the local grid spacing."""
    return min(max(0.5, T / 100.0), T / 4.0, spacing / 2.0)


def entropy_at(a: float, model, T: float, h: float, settings: NumericSettings = DEFAULT_SETTINGS,
               max_doublings: int = 4):
    """S = -[F(T+h) - F(T-h)] / (2h), doubling h while the difference is noise-dominated.

    Returns (S, h_used).
    """
    # F differences resolve tiny entropies only with a tight truncation
    settings = replace(settings, truncation_tol=min(settings.truncation_tol, ENTROPY_TRUNCATION))
    for _ in range(max_doublings + 1):
        if not 0 < h < T:
            break
        f_hi = free_energy(EvaluationPoint(a, T + h), model, settings).free_energy
        f_lo = free_energy(EvaluationPoint(a, T - h), model, settings).free_energy
        diff = f_hi - f_lo
        noise = 64 * _EPS * max(abs(f_hi), abs(f_lo))
        if abs(diff) >= NOISE_FACTOR * noise:
            return -diff / (2.0 * h), h
        if 2 * h >= T:
            break
        h *= 2.0
    raise ArithmeticError(
        f"entropy at T={T:g} K is below the differencing noise; use a larger step h or a larger T")


def richardson_zero(T, S):
    """Quadratic extrapolation to T = 0 through the three smallest-T samples."""
    T = np.asarray(T, float)[:3]
    S = np.asarray(S, float)[:3]
    if T.size < 3:
        return float(S[0])
    out = 0.0
    for i in range(3):
        w = 1.0
        for j in range(3):
            if j != i:
                w *= (0.0 - T[j]) / (T[i] - T[j])
        out += w * S[i]
    return out


def classify(limit: float, tol: float) -> NernstClass:
    if limit < -tol:
        return NernstClass.NEGATIVE
    if limit > tol:
        return NernstClass.POSITIVE
    return NernstClass.SATISFIED


def entropy_curve(a: float, model, T_grid, h=None, settings: NumericSettings = DEFAULT_SETTINGS,
                  tol_fraction: float = 1e-3, threads: int = 1) -> EntropyCurve:
    """Entropy on a temperature grid and the Nernst classification.

    Parameters
    ----------
    T_grid : sequence of float
        Positive, strictly ascending temperatures (K).
    h : float, optional
        Fixed difference step; by default chosen per point by ``default_step``.
    tol_fraction : float
        Classification threshold relative to |S(T_max)|.
    """
    T = np.asarray(T_grid, dtype=float)
    if T.ndim != 1 or T.size == 0 or np.any(T <= 0) or np.any(np.diff(T) <= 0):
        raise ValueError("T_grid must be positive and strictly ascending")
    gaps = np.diff(T)
    spacing = np.full(T.size, math.inf)
    if T.size > 1:
        spacing[:-1] = gaps
        spacing[1:] = np.minimum(spacing[1:], gaps)
    if h is not None:
        if not h > 0 or (T.size > 1 and h > gaps.min() / 2) or h >= T[0]:
            raise ValueError("step h must be positive, below T_min and at most half the grid spacing")
        steps = np.full(T.size, float(h))
    else:
        steps = np.array([default_step(t, s) for t, s in zip(T, spacing)])

    def one(i):
        return entropy_at(a, model, T[i], steps[i], settings)

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(threads) as ex:
            res = list(ex.map(one, range(T.size)))
    else:
        res = [one(i) for i in range(T.size)]
    S = np.array([r[0] for r in res])
    used = np.array([r[1] for r in res])
    limit = richardson_zero(T, S)
    tol = tol_fraction * abs(S[-1])
    return EntropyCurve(T, S, used, limit, tol, classify(limit, tol))
