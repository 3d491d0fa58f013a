import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from thermal_casimir.analysis import (CurveSpec, MeasurementSet, Observable, Quantity,
                                      SphereGeometry, Verdict, compare, curve, differential_force,
                                      interpolate_with_error, load_measurements, pfa_force,
                                      pfa_gradient, pfa_pressure_from_gradient)
from thermal_casimir.lifshitz import pressure_matsubara
from thermal_casimir.materials import material
from thermal_casimir.units import EvaluationPoint

G100 = SphereGeometry(100.0)


def test_gradient_linear_formula(monkeypatch):
    import thermal_casimir.analysis as an
    monkeypatch.setattr(an, "_pressure", lambda *a: -1.0)
    assert pfa_gradient(EvaluationPoint(1, 300), None, G100) == pytest.approx(628.32, rel=1e-5)


def test_ideal_metal_gradient():
    g = pfa_gradient(EvaluationPoint(1.0, 0.0), material("ideal-metal"), G100)
    assert g == pytest.approx(5.0987, rel=1e-4)
    assert pfa_pressure_from_gradient(g, G100) == pytest.approx(-8.1148e-3, rel=1e-4)
    assert pfa_pressure_from_gradient(0.0, G100) == 0.0


def test_vacuum_force_zero():
    assert pfa_force(EvaluationPoint(1.0, 300), material("vacuum"), G100) == 0.0


def test_differential_force():
    seps = [0.5, 1.0]
    m = material("au-drude")
    assert all(d == 0 for _, d in differential_force(seps, m, m, G100, 300))
    out = differential_force(seps, m, material("vacuum"), G100, 300)
    for a, d in out:
        assert d == pfa_force(EvaluationPoint(a, 300), m, G100)


def test_advisory():
    assert G100.advisory(0.5) is None
    assert "a/R" in SphereGeometry(20.0).advisory(1.0)


def test_single_point_sweep():
    t = curve(CurveSpec(Quantity.PRESSURE, {"d": material("au-drude")}, (1.0,), 300.0))
    assert t.columns["d"].shape == (1,)


def test_sweep_records_failures():
    t = curve(CurveSpec(Quantity.GRADIENT, {"d": material("au-drude")}, (1.0, 2.0), 300.0))
    assert np.all(np.isnan(t.columns["d"]))
    assert len(t.failures) == 2


def test_sweep_deterministic_across_threads():
    models = {"d": material("au-drude"), "p": material("au-plasma")}
    seps = tuple(np.linspace(0.5, 3, 9))
    a = curve(CurveSpec(Quantity.RELATIVE_THERMAL_CORRECTION, models, seps, 300.0))
    b = curve(CurveSpec(Quantity.RELATIVE_THERMAL_CORRECTION, models, seps, 300.0, threads=4))
    for n in models:
        np.testing.assert_array_equal(a.columns[n], b.columns[n])


MEAS = "separation_um,value,total_error\n0.3,-1.0,0.1\n0.2,-2.0,0.1\n"


def test_load_measurements_sorts():
    m = load_measurements(MEAS)
    np.testing.assert_array_equal(m.separations, [0.2, 0.3])
    np.testing.assert_array_equal(m.values, [-2.0, -1.0])


def test_load_measurements_errors():
    with pytest.raises(ValueError, match="header"):
        load_measurements("a,b,c\n1,2,3\n")
    with pytest.raises(ValueError, match="no data"):
        load_measurements("separation_um,value,total_error\n")
    with pytest.raises(ValueError):
        load_measurements("separation_um,value,total_error\n1,2,0\n")


def test_interpolation_on_nodes_is_exact():
    a = np.geomspace(0.2, 1, 9)
    v = a**-4
    pred, err = interpolate_with_error(a, v, a[2:5])
    np.testing.assert_allclose(pred, v[2:5], rtol=1e-14)
    assert np.all(err == 0)


def test_interpolation_error_estimate_is_honest():
    a = np.geomspace(0.2, 1, 12)
    x = np.geomspace(0.21, 0.95, 17)
    pred, err = interpolate_with_error(a, a**-4, x)
    assert np.all(np.abs(pred - x**-4) <= err + 1e-12 * x**-4)


@pytest.fixture(scope="module")
def predictions():
    grid = np.geomspace(0.16, 0.75, 20)
    out = {}
    for n in ("au-drude", "au-plasma"):
        m = material(n)
        out[n] = (grid, np.array([pressure_matsubara(EvaluationPoint(a, 300), m).pressure * 0.1602177e3
                                  for a in grid]))
    return out


def test_synthetic_plasma_data(predictions):
    # plasma predictions (mPa) with noise inside the errors: plasma kept, Drude excluded
    rng = np.random.default_rng(7)
    a = np.geomspace(0.17, 0.7, 30)
    m = material("au-plasma")
    truth = np.array([pressure_matsubara(EvaluationPoint(x, 300), m).pressure * 0.1602177e3 for x in a])
    err = 0.004 * np.abs(truth) + 0.002
    data = MeasurementSet(a, truth + rng.uniform(-0.5, 0.5, a.size) * err, err)
    rep = compare(data, predictions)
    assert rep.models["au-plasma"].verdict is Verdict.CONSISTENT
    assert rep.models["au-drude"].verdict is Verdict.EXCLUDED


def test_exact_data_fully_consistent(predictions):
    grid, vals = predictions["au-drude"]
    data = MeasurementSet(grid[3:8], vals[3:8], np.full(5, 1e-6))
    assert compare(data, {"d": (grid, vals)}).models["d"].fraction_consistent == 1.0


def test_empty_and_out_of_range(predictions):
    empty = MeasurementSet(np.array([]), np.array([]), np.array([]))
    with pytest.raises(ValueError, match="empty"):
        compare(empty, predictions)
    data = MeasurementSet([0.1, 0.5, 0.9], [1, 1, 1], [1, 1, 1])
    with pytest.raises(ValueError, match="0.1, 0.9"):
        compare(data, predictions)


@settings(max_examples=25)
@given(st.permutations(list(range(8))))
def test_compare_invariant_to_row_order(perm):
    grid = np.geomspace(0.2, 1.0, 10)
    vals = -grid**-4
    a = np.geomspace(0.25, 0.9, 8)
    v = -a**-4 * (1 + 0.01 * np.sin(7 * a))
    e = 0.005 * a**-4
    ref = compare(MeasurementSet(a, v, e), {"m": (grid, vals)})
    p = np.array(perm)
    got = compare(MeasurementSet(a[p], v[p], e[p]), {"m": (grid, vals)})
    assert got.models["m"].fraction_consistent == ref.models["m"].fraction_consistent
    assert got.models["m"].points == ref.models["m"].points


def test_observable_kind():
    m = load_measurements(MEAS, "force_gradient", 67)
    assert m.kind is Observable.FORCE_GRADIENT and m.confidence_level == 67
