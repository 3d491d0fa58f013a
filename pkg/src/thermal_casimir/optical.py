"""Tabulated optical data and the Kramers-Kronig transform to the imaginary axis."""
from __future__ import annotations

import csv
import io
import logging
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .quadrature import gauss_legendre
from .response import DrudeParams, PlasmaParams

log = logging.getLogger(__name__)

HEADER = ("energy_eV", "n", "k")


class OpticalTableError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class OpticalTable:
    """Complex refractive index n + ik against photon energy (eV), ascending."""

    energy: np.ndarray
    n: np.ndarray
    k: np.ndarray

    def __post_init__(self):
        e, n, k = (np.asarray(v, dtype=float) for v in (self.energy, self.n, self.k))
        if not (e.ndim == n.ndim == k.ndim == 1 and e.size == n.size == k.size):
            raise OpticalTableError("energy, n and k must be equal-length 1-d arrays")
        if e.size < 2:
            raise OpticalTableError("table needs at least two rows")
        bad = np.flatnonzero(np.diff(e) <= 0)
        if bad.size:
            raise OpticalTableError(f"energies not strictly increasing at row {bad[0] + 2}")
        if e[0] <= 0:
            raise OpticalTableError("energies must be positive")
        neg = np.flatnonzero((n < 0) | (k < 0))
        if neg.size:
            raise OpticalTableError(f"negative n or k at row {neg[0] + 1}")
        for name, v in (("energy", e), ("n", n), ("k", k)):
            v.setflags(write=False)
            object.__setattr__(self, name, v)

    @property
    def eps_im(self) -> np.ndarray:
        return 2.0 * self.n * self.k

    @property
    def eps_re(self) -> np.ndarray:
        return self.n**2 - self.k**2

    def __len__(self):
        return self.energy.size

    @classmethod
    def from_permittivity(cls, energy, eps):
        """Build a table from complex eps(omega) values (principal square root)."""
        nk = np.sqrt(np.asarray(eps, dtype=complex))
        return cls(np.asarray(energy, float), nk.real, np.abs(nk.imag))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(HEADER)
        for row in zip(self.energy, self.n, self.k):
            w.writerow([repr(float(v)) for v in row])
        return buf.getvalue()


def load_optical_table(source) -> OpticalTable:
    """Read a CSV with header ``energy_eV,n,k``.

    ``source`` may be a path, raw bytes/str content, or a text/binary stream.
    """
    if isinstance(source, (bytes, bytearray)):
        text = bytes(source).decode("utf-8")
    elif isinstance(source, (str, os.PathLike)) and os.path.exists(source):
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    elif isinstance(source, str):
        text = source
    else:
        text = source.read()
        if isinstance(text, bytes):
            text = text.decode("utf-8")
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if any(c.strip() for c in r)]
    if not rows:
        raise OpticalTableError("no data rows")
    header = tuple(c.strip() for c in rows[0])
    if header != HEADER:
        raise OpticalTableError(f"expected header {','.join(HEADER)}, got {','.join(header)}")
    if len(rows) == 1:
        raise OpticalTableError("no data rows")
    data = []
    for i, r in enumerate(rows[1:], start=2):
        if len(r) != 3:
            raise OpticalTableError(f"row {i}: expected 3 columns, got {len(r)}")
        try:
            vals = [float(c) for c in r]
        except ValueError as exc:
            raise OpticalTableError(f"row {i}: {exc}") from None
        if not all(math.isfinite(v) for v in vals):
            raise OpticalTableError(f"row {i}: non-finite value")
        if vals[1] < 0 or vals[2] < 0:
            raise OpticalTableError(f"row {i}: negative n or k")
        if data and vals[0] <= data[-1][0]:
            kind = "duplicate" if vals[0] == data[-1][0] else "non-monotone"
            raise OpticalTableError(f"row {i}: {kind} energy {vals[0]}")
        data.append(vals)
    arr = np.array(data)
    return OpticalTable(arr[:, 0], arr[:, 1], arr[:, 2])


@dataclass(frozen=True)
class ExtrapolationSpec:
    """Low-frequency model used below the first tabulated energy.

    ``model`` is a DrudeParams, a PlasmaParams, or None for a constant real
    permittivity (Im eps = 0 below the table).
    """

    model: DrudeParams | PlasmaParams | None = None
    matching_point: float | None = None
    mismatch_tolerance: float = 0.2

    @property
    def name(self) -> str:
        if self.model is None:
            return "dielectric_constant"
        return self.model.kind


def _im_model(extrap: ExtrapolationSpec, omega, T):
    if isinstance(extrap.model, DrudeParams):
        g = extrap.model.relaxation.at(T)
        wp2 = extrap.model.plasma_frequency**2
        return wp2 * g / (omega * (omega**2 + g**2))
    return np.zeros_like(np.asarray(omega, float))


def matching_mismatch(table: OpticalTable, extrap: ExtrapolationSpec, T: float = 300.0) -> float:
    """Relative jump of Im eps between the extrapolation and the first table row."""
    w_m = table.energy[0]
    im_t = table.eps_im[0]
    im_m = float(_im_model(extrap, w_m, T))
    if im_t == 0:
        return 0.0 if im_m == 0 else math.inf
    return abs(im_m - im_t) / im_t


def _low_segment(extrap, w_m, xi, T):
    """(2/pi) * int_0^{w_m} omega Im eps / (omega^2 + xi^2), plus any pole term."""
    out = np.zeros_like(xi)
    m = extrap.model
    if isinstance(m, PlasmaParams):
        return out + (m.plasma_frequency / xi) ** 2
    if not isinstance(m, DrudeParams):
        return out
    g = m.relaxation.at(T)
    wp2 = m.plasma_frequency**2
    if g == 0:
        return out + wp2 / xi**2

    def A(x):
        return np.arctan(w_m / x) / x

    near = np.abs(xi - g) < 1e-6 * g
    safe = np.where(near, 2 * g, xi)
    val = wp2 * g * (A(g) - A(safe)) / (safe**2 - g**2)
    # derivative form at xi = gamma
    dA = -np.arctan(w_m / g) / g**2 - w_m / (g * (g**2 + w_m**2))
    val = np.where(near, -wp2 * dA / 2.0, val)
    return out + (2.0 / np.pi) * val


def _tail_amplitude(table: OpticalTable) -> float:
    e = table.energy
    im = table.eps_im
    sel = (e >= e[-1] / 10.0) & (im > 0)
    if not np.any(sel):
        return 0.0
    return float(np.exp(np.mean(np.log(im[sel] * e[sel] ** 3))))


def _tail_segment(A, w_end, xi):
    """(2/pi) * int_{w_end}^inf A omega^-2 / (omega^2 + xi^2)."""
    r = xi / w_end
    small = r < 1e-3
    rs = np.where(small, 1.0, r)
    exact = (1.0 / w_end - (0.5 * np.pi - np.arctan(w_end / (rs * w_end))) / (rs * w_end)) / (rs * w_end) ** 2
    series = (1.0 / 3.0 - r**2 / 5.0 + r**4 / 7.0) / w_end**3
    return (2.0 / np.pi) * A * np.where(small, series, exact)


def _table_segment(table: OpticalTable, xi, order: int):
    e = table.energy
    im = table.eps_im
    gx, gw = gauss_legendre(order)
    lo, hi = e[:-1], e[1:]
    fl, fh = im[:-1], im[1:]
    pos = (fl > 0) & (fh > 0)
    # log-log interpolation where both ends are positive, linear otherwise
    s_lo, s_hi = np.log(lo), np.log(hi)
    half = 0.5 * (s_hi - s_lo)
    s = 0.5 * (s_lo + s_hi)[:, None] + half[:, None] * gx
    om = np.exp(s)
    t = (s - s_lo[:, None]) / (2 * half[:, None])
    with np.errstate(divide="ignore"):
        lf = np.log(np.where(pos, fl, 1.0))[:, None]
        lh = np.log(np.where(pos, fh, 1.0))[:, None]
    f_log = np.exp(lf + t * (lh - lf))
    f_lin = fl[:, None] + (om - lo[:, None]) / (hi - lo)[:, None] * (fh - fl)[:, None]
    f = np.where(pos[:, None], f_log, f_lin)
    w = (half[:, None] * gw).ravel()
    om = om.ravel()
    f = f.ravel()
    # integrand in log omega: omega^2 Im eps / (omega^2 + xi^2)
    xi2 = np.asarray(xi)[..., None] ** 2
    vals = om**2 * f / (om**2 + xi2)
    return (2.0 / np.pi) * (vals @ w if vals.ndim == 1 else np.tensordot(vals, w, axes=([-1], [0])))


def kramers_kronig_imag_axis(table: OpticalTable, extrap: ExtrapolationSpec, xi,
                             T: float = 300.0, rtol: float = 1e-8):
    """eps(i xi) = 1 + (2/pi) int_0^inf omega Im eps(omega) / (omega^2 + xi^2) d omega.

    The integral is split at the first and last table energies: the
    extrapolation model is integrated in closed form below, the table is
    interpolated log-log and integrated panel-wise, and beyond the table
    Im eps is continued as A/omega^3 fitted to the last decade.

    Raises
    ------
    ValueError
        If any ``xi`` is not positive.
    ArithmeticError
        If the two panel rules disagree by more than ``rtol``.
    """
    xi_arr = np.asarray(xi, dtype=float)
    if np.any(~(xi_arr > 0)):
        raise ValueError("imaginary frequency must be positive")
    w_m = table.energy[0]
    low = _low_segment(extrap, w_m, xi_arr, T)
    mid = _table_segment(table, xi_arr, 8)
    mid_check = _table_segment(table, xi_arr, 4)
    err = np.abs(mid - mid_check)
    scale = 1.0 + low + mid
    if np.any(err > rtol * scale):
        worst = np.unravel_index(np.argmax(err / scale), np.shape(err)) if np.ndim(err) else ()
        raise ArithmeticError(
            f"Kramers-Kronig quadrature not converged (rel. diff {np.max(err / scale):.2e} "
            f"at xi={np.asarray(xi_arr)[worst]:.4g} eV); refine the table")
    tail = _tail_segment(_tail_amplitude(table), table.energy[-1], xi_arr)
    out = 1.0 + low + mid + tail
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class TabulatedPermittivity:
    """Permittivity from a table plus low-frequency extrapolation."""

    table: OpticalTable
    extrapolation: ExtrapolationSpec = field(default_factory=ExtrapolationSpec)
    kind = "tabulated"

    def __post_init__(self):
        mm = matching_mismatch(self.table, self.extrapolation)
        if mm > self.extrapolation.mismatch_tolerance:
            log.warning("extrapolation mismatch %.1f%% at %.4g eV exceeds tolerance",
                        100 * mm, self.table.energy[0])

    def mismatch(self, T: float = 300.0) -> float:
        return matching_mismatch(self.table, self.extrapolation, T)

    def eps_imag(self, xi, T=300.0):
        return kramers_kronig_imag_axis(self.table, self.extrapolation, xi, T)

    def static(self, T=300.0) -> float:
        """xi -> 0 value of eps for the constant-permittivity extrapolation."""
        tiny = self.table.energy[0] * 1e-9
        return float(kramers_kronig_imag_axis(self.table, self.extrapolation, tiny, T))
