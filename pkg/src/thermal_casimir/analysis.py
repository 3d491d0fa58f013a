"""Sphere-plate observables (PFA), sweeps, and comparison with measured data."""
from __future__ import annotations

import csv
import enum
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import make_interp_spline

from .lifshitz import (DEFAULT_SETTINGS, NumericSettings, free_energy, pressure_matsubara,
                       pressure_zero_temperature, thermal_correction)
from .units import PA_PER_EV_UM3, EvaluationPoint

PFA_ADVISORY_RATIO = 0.01


@dataclass(frozen=True)
class SphereGeometry:
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("sphere radius must be positive")

    def advisory(self, a: float) -> str | None:
        if a / self.radius > PFA_ADVISORY_RATIO:
            return (f"a/R = {a / self.radius:.3g} exceeds {PFA_ADVISORY_RATIO}; "
                    "proximity-force corrections may not be negligible")
        return None


def _pressure(point: EvaluationPoint, model, settings):
    if point.T == 0:
        return pressure_zero_temperature(point.a, model, settings).pressure
    return pressure_matsubara(point, model, settings).pressure


def _free_energy(point: EvaluationPoint, model, settings):
    return free_energy(point, model, settings).free_energy


def pfa_gradient(point: EvaluationPoint, model, geom: SphereGeometry,
                 settings: NumericSettings = DEFAULT_SETTINGS) -> float:
    """Sphere-plate force gradient -2 pi R P(a, T) in eV/um^2."""
    return -2.0 * math.pi * geom.radius * _pressure(point, model, settings)


def pfa_pressure_from_gradient(gradient, geom: SphereGeometry):
    return -np.asarray(gradient) / (2.0 * math.pi * geom.radius) if np.ndim(gradient) \
        else -gradient / (2.0 * math.pi * geom.radius)


def pfa_force(point: EvaluationPoint, model, geom: SphereGeometry,
              settings: NumericSettings = DEFAULT_SETTINGS) -> float:
    """Sphere-plate force 2 pi R F(a, T) in eV/um (negative = attraction)."""
    return 2.0 * math.pi * geom.radius * _free_energy(point, model, settings)


def differential_force(separations, model_a, model_b, geom: SphereGeometry, T: float,
                       settings: NumericSettings = DEFAULT_SETTINGS):
    """[(a, F_A(a) - F_B(a))] for two material states of the plate."""
    out = []
    for a in np.asarray(separations, float):
        p = EvaluationPoint(float(a), T)
        out.append((float(a), pfa_force(p, model_a, geom, settings) - pfa_force(p, model_b, geom, settings)))
    return out


# -- sweeps ------------------------------------------------------------------

class Quantity(str, enum.Enum):
    PRESSURE = "pressure"
    PRESSURE_PA = "pressure-pa"
    THERMAL_CORRECTION = "thermal-correction"
    RELATIVE_THERMAL_CORRECTION = "relative-thermal-correction"
    FREE_ENERGY = "free-energy"
    GRADIENT = "gradient"
    FORCE = "force"


def evaluate(quantity: Quantity, point: EvaluationPoint, model, geom: SphereGeometry | None = None,
             settings: NumericSettings = DEFAULT_SETTINGS) -> float:
    q = Quantity(quantity)
    if q is Quantity.PRESSURE:
        return _pressure(point, model, settings)
    if q is Quantity.PRESSURE_PA:
        return _pressure(point, model, settings) * PA_PER_EV_UM3
    if q is Quantity.THERMAL_CORRECTION:
        return thermal_correction(point, model, settings).absolute
    if q is Quantity.RELATIVE_THERMAL_CORRECTION:
        return thermal_correction(point, model, settings).relative
    if q is Quantity.FREE_ENERGY:
        return _free_energy(point, model, settings)
    if geom is None:
        raise ValueError(f"{q.value} needs a sphere geometry")
    if q is Quantity.GRADIENT:
        return pfa_gradient(point, model, geom, settings)
    return pfa_force(point, model, geom, settings)


@dataclass(frozen=True)
class CurveSpec:
    quantity: Quantity
    models: dict                      # column name -> Material
    separations: tuple
    temperature: float
    geometry: SphereGeometry | None = None
    settings: NumericSettings = DEFAULT_SETTINGS
    threads: int = 1


@dataclass(frozen=True)
class CurveTable:
    separations: np.ndarray
    columns: dict                     # name -> ndarray, NaN marks a failed cell
    failures: list = field(default_factory=list)


def curve(spec: CurveSpec) -> CurveTable:
    """Evaluate a quantity for each model over the separations.

    Cells are independent; failures are recorded and leave NaN in the table.
    """
    seps = np.asarray(spec.separations, float)
    if seps.ndim != 1 or seps.size == 0:
        raise ValueError("sweep needs at least one separation")
    names = list(spec.models)
    cells = [(i, n) for i in range(seps.size) for n in names]

    def one(cell):
        i, n = cell
        try:
            return evaluate(spec.quantity, EvaluationPoint(float(seps[i]), spec.temperature),
                            spec.models[n], spec.geometry, spec.settings), None
        except (ArithmeticError, ValueError, TypeError) as exc:
            return math.nan, f"{type(exc).__name__}: {exc}"

    if spec.threads > 1:
        with ThreadPoolExecutor(spec.threads) as ex:
            res = list(ex.map(one, cells))
    else:
        res = [one(c) for c in cells]
    cols = {n: np.empty(seps.size) for n in names}
    failures = []
    for (i, n), (v, err) in zip(cells, res):
        cols[n][i] = v
        if err is not None:
            failures.append((float(seps[i]), n, err))
    return CurveTable(seps, cols, failures)


# -- measurements ------------------------------------------------------------

class Observable(str, enum.Enum):
    PRESSURE = "pressure"
    FORCE_GRADIENT = "force_gradient"
    FORCE = "force"
    FORCE_DIFFERENCE = "force_difference"


MEASUREMENT_HEADER = ("separation_um", "value", "total_error")


@dataclass(frozen=True, eq=False)
class MeasurementSet:
    separations: np.ndarray
    values: np.ndarray
    errors: np.ndarray
    kind: Observable = Observable.PRESSURE
    confidence_level: float = 95.0

    def __post_init__(self):
        a, v, e = (np.asarray(x, float) for x in (self.separations, self.values, self.errors))
        if not (a.ndim == v.ndim == e.ndim == 1 and a.size == v.size == e.size):
            raise ValueError("measurement columns must be equal-length vectors")
        if np.any(e <= 0):
            raise ValueError("total errors must be positive")
        if np.any(a <= 0):
            raise ValueError("separations must be positive")
        order = np.argsort(a, kind="stable")
        object.__setattr__(self, "separations", a[order])
        object.__setattr__(self, "values", v[order])
        object.__setattr__(self, "errors", e[order])
        object.__setattr__(self, "kind", Observable(self.kind))

    def __len__(self):
        return self.separations.size


def load_measurements(source, kind=Observable.PRESSURE, confidence_level=95.0) -> MeasurementSet:
    if isinstance(source, (str, os.PathLike)) and os.path.exists(source):
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    elif isinstance(source, str):
        text = source
    else:
        text = source.read()
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if not rows or tuple(c.strip() for c in rows[0]) != MEASUREMENT_HEADER:
        raise ValueError(f"measurement file must start with header {','.join(MEASUREMENT_HEADER)}")
    data = []
    for i, r in enumerate(rows[1:], start=2):
        try:
            data.append([float(c) for c in r])
        except ValueError:
            raise ValueError(f"row {i}: could not parse {r}") from None
        if len(data[-1]) != 3:
            raise ValueError(f"row {i}: expected 3 columns")
    if not data:
        raise ValueError("measurement file has no data rows")
    arr = np.array(data)
    return MeasurementSet(arr[:, 0], arr[:, 1], arr[:, 2], kind, confidence_level)


@dataclass(frozen=True)
class PointComparison:
    separation: float
    prediction: float
    datum: float
    error: float
    interpolation_error: float

    @property
    def deviation(self) -> float:
        """|prediction - datum| / total error."""
        return abs(self.prediction - self.datum) / self.error


class Verdict(str, enum.Enum):
    CONSISTENT = "consistent"
    EXCLUDED = "excluded"


@dataclass(frozen=True)
class ModelComparison:
    name: str
    points: tuple
    fraction_consistent: float
    verdict: Verdict


@dataclass(frozen=True)
class ComparisonReport:
    models: dict              # name -> ModelComparison
    threshold: float
    n_errors: float


def _interpolator(a, v):
    a = np.asarray(a, float)
    v = np.asarray(v, float)
    order = np.argsort(a)
    a, v = a[order], v[order]
    if np.any(np.diff(a) <= 0):
        raise ValueError("prediction separations must be distinct")
    k = min(3, a.size - 1)
    return a, v, make_interp_spline(np.log(a), v, k=k)


def interpolate_with_error(a_grid, values, a_points):
    """Cubic-in-log(a) interpolation plus a node-deletion error estimate."""
    a, v, spl = _interpolator(a_grid, values)
    x = np.log(np.asarray(a_points, float))
    pred = spl(x)
    err = np.zeros_like(pred)
    if a.size < 5:
        return pred, err
    la = np.log(a)
    for i, xi in enumerate(x):
        j = int(np.argmin(np.abs(la - xi)))
        if abs(la[j] - xi) < 1e-12:
            continue
        j = min(max(j, 1), a.size - 2)      # keep the end nodes
        keep = np.arange(a.size) != j
        alt = make_interp_spline(la[keep], v[keep], k=3)
        err[i] = abs(float(alt(xi)) - pred[i])
    return pred, err


def compare(data: MeasurementSet, predictions: dict, threshold: float = 0.95,
            n_errors: float = 1.0) -> ComparisonReport:
    """Accept or exclude each model with no fitted parameters.

    Parameters
    ----------
    predictions : dict
        model name -> (separations, values) on any grid covering the data.
    threshold : float
        Minimum fraction of points within ``n_errors`` total errors.
    """
    if len(data) == 0:
        raise ValueError("empty measurement set")
    if not predictions:
        raise ValueError("no model predictions supplied")
    out = {}
    for name in sorted(predictions):
        grid, vals = predictions[name]
        grid = np.asarray(grid, float)
        lo, hi = grid.min(), grid.max()
        outside = data.separations[(data.separations < lo * (1 - 1e-12)) | (data.separations > hi * (1 + 1e-12))]
        if outside.size:
            raise ValueError(f"model {name!r}: data separations outside prediction range: "
                             + ", ".join(f"{x:g}" for x in outside))
        pred, ierr = interpolate_with_error(grid, vals, data.separations)
        pts = tuple(PointComparison(float(a), float(p), float(d), float(math.hypot(e, ie)), float(ie))
                    for a, p, d, e, ie in zip(data.separations, pred, data.values, data.errors, ierr))
        frac = sum(p.deviation <= n_errors for p in pts) / len(pts)
        verdict = Verdict.EXCLUDED if frac < threshold else Verdict.CONSISTENT
        out[name] = ModelComparison(name, pts, frac, verdict)
    return ComparisonReport(out, threshold, n_errors)
