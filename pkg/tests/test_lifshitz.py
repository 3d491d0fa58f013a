import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from thermal_casimir.lifshitz import (ConvergenceError, NumericSettings, free_energy,
                                      high_T_dielectric, high_T_ratio, ideal_metal_asymptotics,
                                      polylog3, pressure_matsubara, pressure_zero_temperature,
                                      thermal_correction)
from thermal_casimir.materials import material
from thermal_casimir.units import HBAR_C, K_B, ZETA3, EvaluationPoint, effective_temperature

P_IDEAL_1UM = -math.pi**2 * HBAR_C / 240.0


def test_ideal_metal_low_temperature():
    p = pressure_matsubara(EvaluationPoint(1.0, 1.0), material("ideal-metal")).pressure
    assert p == pytest.approx(-8.1148e-3, rel=1e-3)


def test_ideal_metal_zero_temperature_exact():
    r = pressure_zero_temperature(1.0, material("ideal-metal"))
    assert r.pressure == pytest.approx(P_IDEAL_1UM, rel=1e-9)
    assert r.summation == "integral"


def test_vacuum_gives_zero():
    assert pressure_zero_temperature(1.0, material("vacuum")).pressure == 0.0
    assert pressure_matsubara(EvaluationPoint(1.0, 300), material("vacuum")).pressure == 0.0
    assert free_energy(EvaluationPoint(1.0, 300), material("vacuum")).free_energy == 0.0


def test_silica_high_temperature_closed_form():
    m = material("silica")
    p = pressure_matsubara(EvaluationPoint(15.0, 300), m).pressure
    assert p == pytest.approx(high_T_dielectric(15.0, 300, m.permittivity.eps0), rel=5e-3)


def test_thermal_correction_examples():
    d = thermal_correction(EvaluationPoint(1.0, 300), material("au-drude")).relative
    assert d == pytest.approx(-0.138, abs=0.005)


def test_thermal_correction_vanishes_at_zero_temperature():
    tc = thermal_correction(EvaluationPoint(1.0, 0.0), material("au-drude"))
    assert tc.absolute == 0.0


def test_thermal_correction_small_temperature():
    tc = thermal_correction(EvaluationPoint(1.0, 1e-3), material("au-plasma"))
    assert abs(tc.relative) < 1e-9


def test_ideal_metal_free_energy_high_temperature():
    # l = 0 term: -kT zeta(3)/(8 pi a^2), consistent with P = -dF/da
    a, T = 15.0, 300.0
    f = free_energy(EvaluationPoint(a, T), material("ideal-metal")).free_energy
    assert f == pytest.approx(-K_B * T * ZETA3 / (8 * math.pi * a * a), rel=5e-3)


def test_asymptotics():
    low, high = ideal_metal_asymptotics(EvaluationPoint(1.0, 0.0))
    assert low == pytest.approx(-8.1148e-3, rel=1e-4)
    _, high = ideal_metal_asymptotics(EvaluationPoint(1.0, 300.0))
    assert high == pytest.approx(-2.4729e-3, rel=1e-4)
    te = effective_temperature(1.0)
    low_te, _ = ideal_metal_asymptotics(EvaluationPoint(1.0, te))
    assert low_te / P_IDEAL_1UM == pytest.approx(4 / 3)


def test_high_T_dielectric_examples():
    assert high_T_dielectric(1.0, 300, 3.81) == pytest.approx(-3.678e-4, rel=1e-3)
    assert high_T_dielectric(1.0, 300, 1.0) == 0.0
    _, ideal = ideal_metal_asymptotics(EvaluationPoint(1.0, 300))
    assert high_T_dielectric(1.0, 300, 1e12) == pytest.approx(ideal / 2, rel=1e-9)


def test_polylog_examples():
    assert polylog3(0.0) == 0.0
    assert polylog3(1.0) == pytest.approx(1.2020569, abs=1e-7)
    assert polylog3(0.34129) == pytest.approx(0.35758, abs=1e-5)
    with pytest.raises(ValueError):
        polylog3(1.5)


@given(st.floats(0.0, 1.0))
def test_polylog_matches_mpmath(z):
    assert polylog3(z) == pytest.approx(float(mpmath.polylog(3, z)), rel=1e-13, abs=1e-15)


def test_high_T_ratios():
    assert high_T_ratio(material("ideal-metal"), 15.0, 300) == pytest.approx(1.0, abs=5e-3)
    r = high_T_ratio(material("au-plasma"), 15.0, 300)
    assert 0.9 < r < 1.0


def test_summation_modes_agree():
    # 1 K at 1 um triggers the Euler-Maclaurin path; compare with a forced direct sum
    pt = EvaluationPoint(1.0, 1.0)
    m = material("au-drude")
    em = pressure_matsubara(pt, m)
    assert em.summation == "euler-maclaurin"
    direct = pressure_matsubara(pt, m, NumericSettings(direct_limit=10**6, truncation_tol=1e-12))
    assert direct.summation == "direct"
    assert em.pressure == pytest.approx(direct.pressure, rel=1e-8)


def test_l_cap_exceeded():
    with pytest.raises(ConvergenceError):
        pressure_matsubara(EvaluationPoint(1.0, 3.0), material("au-drude"),
                           NumericSettings(direct_limit=10**6, l_cap=50))


def test_keep_terms_breakdown():
    r = pressure_matsubara(EvaluationPoint(1.0, 300), material("au-drude"), NumericSettings(keep_terms=True))
    assert r.per_term_breakdown is not None
    assert math.fsum(v for _, v in r.per_term_breakdown) == pytest.approx(r.pressure, rel=1e-12)


def test_quadrature_error_reported():
    r = pressure_matsubara(EvaluationPoint(0.5, 300), material("au-drude"))
    assert 0 < r.quadrature_error < 1e-8 * abs(r.pressure)


@settings(max_examples=20)
@given(st.floats(0.2, 5.0), st.floats(1.05, 2.0))
def test_magnitude_decreases_with_separation(a, f):
    m = material("au-drude")
    p1 = pressure_matsubara(EvaluationPoint(a, 300), m).pressure
    p2 = pressure_matsubara(EvaluationPoint(a * f, 300), m).pressure
    assert p1 < p2 < 0


@settings(max_examples=20)
@given(st.floats(0.2, 5.0))
def test_model_ordering(a):
    pt = EvaluationPoint(a, 300)
    ideal = pressure_matsubara(pt, material("ideal-metal")).pressure
    plasma = pressure_matsubara(pt, material("au-plasma")).pressure
    drude = pressure_matsubara(pt, material("au-drude")).pressure
    assert ideal < plasma < drude < 0


def test_frozen_and_cold_references_differ_only_for_temperature_dependent_models():
    pt = EvaluationPoint(1.0, 300)
    a = thermal_correction(pt, material("au-plasma"), reference="frozen")
    b = thermal_correction(pt, material("au-plasma"), reference="cold")
    assert a.absolute == b.absolute
    c = thermal_correction(pt, material("au-drude"), reference="cold")
    assert c.relative != thermal_correction(pt, material("au-drude")).relative
