import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from thermal_casimir.units import (HBAR, HBAR_C, K_B, EvaluationPoint, Regime, conductivity_energy,
                                   effective_temperature, matsubara_energy, pascal_to_pressure,
                                   pressure_to_pascal, thermal_regime)


def test_effective_temperature_at_one_micron():
    assert effective_temperature(1.0) == pytest.approx(1144.9, abs=0.05)


def test_effective_temperature_inverse_proportional():
    assert effective_temperature(2.0) == effective_temperature(1.0) / 2


@pytest.mark.parametrize("a", [0.0, -1.0])
def test_effective_temperature_rejects_nonpositive(a):
    with pytest.raises(ValueError):
        effective_temperature(a)


def test_pressure_conversion():
    assert pressure_to_pascal(1.0) == pytest.approx(0.1602177)
    assert pressure_to_pascal(0.0) == 0.0
    assert pressure_to_pascal(-8.1148e-3) == pytest.approx(-1.3001e-3, rel=1e-4)


@given(st.floats(-1e6, 1e6, allow_nan=False))
def test_pascal_round_trip(p):
    assert pascal_to_pressure(pressure_to_pascal(p)) == pytest.approx(p, rel=1e-14, abs=1e-300)


def test_regimes():
    te = effective_temperature(1.0)
    assert thermal_regime(EvaluationPoint(1.0, te / 20)).regime is Regime.LOW
    assert thermal_regime(EvaluationPoint(1.0, te)).regime is Regime.INTERMEDIATE
    assert thermal_regime(EvaluationPoint(1.0, te * 20)).regime is Regime.HIGH


def test_evaluation_point_validation():
    with pytest.raises(ValueError):
        EvaluationPoint(0.0, 300)
    with pytest.raises(ValueError):
        EvaluationPoint(1.0, -1)


def test_matsubara_energy_first_term():
    assert matsubara_energy(300, 1) == pytest.approx(0.162430, rel=3e-5)
    assert matsubara_energy(300, 0) == 0.0


def test_conductivity_energy():
    assert conductivity_energy(29.7) == pytest.approx(HBAR * 4 * math.pi * 29.7)
    assert conductivity_energy(29.7) == pytest.approx(2.456e-13, rel=1e-3)


@given(st.floats(1e-3, 1e3))
def test_effective_temperature_formula(a):
    assert effective_temperature(a) == pytest.approx(HBAR_C / (2 * a * K_B), rel=1e-14)
