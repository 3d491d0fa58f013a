import numpy as np
import pytest
from hypothesis import given, strategies as st

from thermal_casimir.response import (ConductivityModel, DielectricParams, DrudeParams,
                                      NonlocalDrudeParams, OscillatorModel, PermeabilityModel,
                                      PlasmaParams, RelaxationModel, WavevectorForm,
                                      dielectric_eps_imag, drude_eps_imag, nonlocal_eps_imag,
                                      plasma_eps_imag, propagating_wave_deviation)
from thermal_casimir.units import HBAR, matsubara_energy

XI1 = 0.162430
AU = DrudeParams(9.0, RelaxationModel.constant(0.035))
V_F = 0.00467


def test_drude_at_first_matsubara():
    assert drude_eps_imag(AU, XI1, 300) == pytest.approx(2526.8, rel=2e-5)


def test_drude_without_relaxation_is_plasma():
    d = DrudeParams(9.0, RelaxationModel.constant(0.0))
    assert drude_eps_imag(d, XI1, 300) == pytest.approx(plasma_eps_imag(PlasmaParams(9.0), XI1), rel=1e-15)


def test_drude_low_frequency_limit():
    xi = 1e-6
    assert xi * (drude_eps_imag(AU, xi, 300) - 1) == pytest.approx(81 / 0.035, rel=1e-4)


def test_plasma_values():
    p = PlasmaParams(9.0)
    assert plasma_eps_imag(p, XI1) == pytest.approx(3071.2, rel=5e-5)
    assert plasma_eps_imag(p, 9.0) == 2.0
    assert plasma_eps_imag(p, 1e12) == pytest.approx(1.0)


@pytest.mark.parametrize("fn,args", [(plasma_eps_imag, (PlasmaParams(9.0),)),
                                     (lambda m, x: drude_eps_imag(m, x, 300), (AU,))])
@pytest.mark.parametrize("xi", [0.0, -1.0])
def test_nonpositive_xi_rejected(fn, args, xi):
    with pytest.raises(ValueError):
        fn(*args, xi)


def test_relaxation_law():
    m = RelaxationModel(0.0, 0.035, 5, 300)
    assert m.at(300) == pytest.approx(0.035)
    assert m.at(0) == 0.0
    assert RelaxationModel(1e-4, 0.035, 5, 300).at(0) == 1e-4


@given(st.floats(0, 1000), st.floats(0, 1000))
def test_relaxation_monotone(t1, t2):
    m = RelaxationModel(0.0035, 0.0315)
    lo, hi = sorted((t1, t2))
    assert m.at(lo) <= m.at(hi)


def test_silica_static_value():
    s = DielectricParams(OscillatorModel(), ConductivityModel(0.0, 0.0), False)
    assert s.eps0 == pytest.approx(3.801, abs=0.01)
    assert dielectric_eps_imag(s, 1e-9, 300) == pytest.approx(s.eps0, rel=1e-8)


def test_conductivity_addend_is_small_at_first_matsubara():
    opt = OscillatorModel()
    on = DielectricParams(opt, ConductivityModel(29.7, 0.0), True)
    off = DielectricParams(opt, ConductivityModel(29.7, 0.0), False)
    diff = dielectric_eps_imag(on, XI1, 300) - dielectric_eps_imag(off, XI1, 300)
    assert diff == pytest.approx(1.51e-12, rel=2e-3)


def test_conductivity_toggle_with_zero_sigma():
    opt = OscillatorModel()
    xi = np.geomspace(1e-4, 10, 7)
    a = dielectric_eps_imag(DielectricParams(opt, ConductivityModel(0.0, 0.0), True), xi, 300)
    b = dielectric_eps_imag(DielectricParams(opt, ConductivityModel(0.0, 0.0), False), xi, 300)
    np.testing.assert_array_equal(a, b)


def test_conductivity_dominates_at_low_frequency():
    d = DielectricParams(OscillatorModel(), ConductivityModel(29.7, 0.0), True)
    xi = 1e-10
    target = HBAR * 4 * np.pi * 29.7
    # the optical part contributes xi*eps0 ~ 4e-10, far above sigma; compare the excess
    excess = xi * (dielectric_eps_imag(d, xi, 300) - d.optical.eps_imag(xi))
    assert excess == pytest.approx(target, rel=1e-6)


def test_arrhenius_vanishes_at_zero_temperature():
    c = ConductivityModel.arrhenius(29.7, 300, 4000)
    assert c.sigma(300) == pytest.approx(29.7)
    assert c.sigma(0) == 0.0
    assert c.sigma(10) < 1e-100


def test_nonlocal_local_limit():
    nl = NonlocalDrudeParams(AU, 0.0, 0.0)
    pair = nonlocal_eps_imag(nl, XI1, 1.0, 3.0, 300)
    d = drude_eps_imag(AU, XI1, 300)
    assert pair.eps_transverse == d and pair.eps_longitudinal == d


def test_nonlocal_transverse_k_perp_form():
    nl = NonlocalDrudeParams(AU, 7 * V_F, 7 * V_F, WavevectorForm.K_PERP)
    assert nonlocal_eps_imag(nl, XI1, 1.0, 0.0, 300).eps_transverse == pytest.approx(2627.1, rel=5e-5)


def test_longitudinal_halving():
    from thermal_casimir.units import HBAR_C
    v = 0.01
    kappa = XI1 / (v * HBAR_C)
    nl = NonlocalDrudeParams(AU, 0.0, v, WavevectorForm.K_PERP)
    d = drude_eps_imag(AU, XI1, 300) - 1
    assert nonlocal_eps_imag(nl, XI1, kappa, 0.0, 300).eps_longitudinal == pytest.approx(1 + d / 2, rel=1e-14)


def test_velocity_bounds():
    with pytest.raises(ValueError):
        NonlocalDrudeParams(AU, 0.2, 0.0)
    with pytest.raises(ValueError):
        NonlocalDrudeParams(AU, -0.01, 0.0)


def test_propagating_deviation_examples():
    from thermal_casimir.units import HBAR_C
    nl = NonlocalDrudeParams(AU, 0.0327, 0.0)
    k = 2.0
    assert propagating_wave_deviation(nl, HBAR_C * k, k) == pytest.approx(0.0327)
    assert propagating_wave_deviation(nl, 10 * HBAR_C * k, k) == pytest.approx(0.00327)
    with pytest.raises(ValueError):
        propagating_wave_deviation(nl, 0.5 * HBAR_C * k, k)


@given(st.floats(1.0, 1e4), st.floats(1e-3, 1e3))
def test_propagating_deviation_bounded(ratio, k):
    from thermal_casimir.units import HBAR_C
    nl = NonlocalDrudeParams(AU, 7 * V_F, 7 * V_F)
    assert propagating_wave_deviation(nl, ratio * HBAR_C * k, k) <= 7 * V_F * (1 + 1e-12)


@given(st.floats(1e-6, 1e3), st.floats(0.0, 1e3))
def test_imaginary_axis_permittivities_exceed_one(xi, T):
    # passivity: eps(i xi) is real and > 1 for every model
    assert drude_eps_imag(DrudeParams(9.0, RelaxationModel(0.0035, 0.0315)), xi, T) > 1
    assert plasma_eps_imag(PlasmaParams(9.0), xi) > 1
    d = DielectricParams(OscillatorModel(), ConductivityModel.arrhenius(29.7, 300, 4000), True)
    assert dielectric_eps_imag(d, xi, T) > 1


def test_permeability_bound():
    with pytest.raises(ValueError):
        PermeabilityModel(0.5)


def test_oscillator_real_axis_needs_damping():
    with pytest.raises(ValueError):
        OscillatorModel().eps_real(1.0)
    m = OscillatorModel(damping=(0.1, 0.001))
    assert np.iscomplexobj(m.eps_real(1.0))
