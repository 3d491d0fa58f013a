"""Named material presets and construction of response models from flat parameters.

Every preset is a plain dict of string parameters, the same keys a
``[material.NAME]`` configuration section accepts, so a user block can start
from a preset (``preset = au-drude``) and override any key.
"""
from __future__ import annotations

import os

from .optical import ExtrapolationSpec, TabulatedPermittivity, load_optical_table
from .response import (ConductivityModel, DielectricParams, DrudeParams, IdealMetal, Material,
                       NonlocalDrudeParams, OscillatorModel, PermeabilityModel, PlasmaParams,
                       RelaxationModel, Vacuum)

V_FERMI_AU = 0.00467

_AU = {"plasma_frequency": "9.0", "gamma_residual": "0.0035", "gamma_amplitude": "0.0315",
       "gamma_exponent": "5", "gamma_reference_temperature": "300"}
_NI = {"plasma_frequency": "4.89", "gamma": "0.0436", "static_mu": "110"}
_SI = {"oscillator_strengths": "10.835, 0.035", "oscillator_resonances": "4.34, 1000"}

PRESETS = {
    "au-drude": {"type": "drude", **_AU},
    "au-drude-perfect": {"type": "drude", **_AU, "gamma_residual": "0", "gamma_amplitude": "0.035"},
    "au-plasma": {"type": "plasma", "plasma_frequency": "9.0"},
    "ideal-metal": {"type": "ideal"},
    "vacuum": {"type": "vacuum"},
    "silica": {"type": "dielectric", "include_conductivity": "false"},
    "silica-conductive": {"type": "dielectric", "include_conductivity": "true",
                          "sigma_reference": "29.7", "sigma_reference_temperature": "300",
                          "sigma_activation": "4000"},
    "silica-conductive-frozen": {"type": "dielectric", "include_conductivity": "true",
                                 "sigma_prefactor": "29.7", "sigma_activation": "0"},
    "au-nonlocal-eq18": {"type": "nonlocal", **_AU, "fermi_velocity": str(V_FERMI_AU),
                         "v_transverse_multiple": "7", "v_longitudinal_multiple": "7",
                         "wavevector_form": "k_perp"},
    "au-nonlocal-eq20": {"type": "nonlocal", **_AU, "fermi_velocity": str(V_FERMI_AU),
                         "v_transverse_multiple": "1.5", "v_longitudinal_multiple": "1.5",
                         "wavevector_form": "full_k"},
    "ni-drude": {"type": "drude", **_NI},
    "ni-plasma": {"type": "plasma", "plasma_frequency": "4.89", "static_mu": "110"},
    "ni-nonlocal-eq18": {"type": "nonlocal", **_NI, "v_transverse_multiple": "7",
                         "v_longitudinal_multiple": "7", "wavevector_form": "k_perp",
                         "fermi_velocity": None},
    "ni-nonlocal-eq20": {"type": "nonlocal", **_NI, "v_transverse_multiple": "1.5",
                         "v_longitudinal_multiple": "1.5", "wavevector_form": "full_k",
                         "fermi_velocity": None},
    "si-membrane-dark-opt": {"type": "dielectric", **_SI, "include_conductivity": "false"},
    "si-membrane-dark": {"type": "dielectric", **_SI, "include_conductivity": "true",
                         "sigma_prefactor": None, "sigma_activation": "0"},
    "si-membrane-bright": {"type": "drude", "plasma_frequency": None, "gamma": None},
}

# presets usable without extra user input
COMPLETE_PRESETS = tuple(n for n, p in PRESETS.items() if None not in p.values())


class MaterialError(ValueError):
    pass


def _f(params, key, default=None):
    v = params.get(key, default)
    if v is None:
        raise MaterialError(f"missing required parameter {key!r}")
    try:
        return float(v)
    except (TypeError, ValueError):
        raise MaterialError(f"parameter {key!r} is not a number: {v!r}") from None


def _floats(params, key):
    v = params.get(key)
    if v is None:
        return None
    try:
        return tuple(float(x) for x in str(v).replace(";", ",").split(",") if x.strip())
    except ValueError:
        raise MaterialError(f"parameter {key!r} must be a comma-separated list of numbers") from None


def _bool(params, key, default=False):
    v = params.get(key)
    if v is None:
        return default
    s = str(v).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise MaterialError(f"parameter {key!r} must be a boolean, got {v!r}")


def _relaxation(p):
    if "gamma" in p:
        return RelaxationModel.constant(_f(p, "gamma"))
    return RelaxationModel(_f(p, "gamma_residual", 0.0), _f(p, "gamma_amplitude", 0.035),
                           _f(p, "gamma_exponent", 5.0), _f(p, "gamma_reference_temperature", 300.0))


def _drude(p):
    return DrudeParams(_f(p, "plasma_frequency"), _relaxation(p))


def _oscillators(p):
    c = _floats(p, "oscillator_strengths")
    w = _floats(p, "oscillator_resonances")
    g = _floats(p, "oscillator_damping")
    if c is None and w is None:
        return OscillatorModel(damping=g) if g else OscillatorModel()
    if c is None or w is None:
        raise MaterialError("oscillator_strengths and oscillator_resonances go together")
    return OscillatorModel(c, w, g)


def _conductivity(p):
    b = _f(p, "sigma_activation", 0.0)
    if "sigma_reference" in p:
        return ConductivityModel.arrhenius(_f(p, "sigma_reference"),
                                           _f(p, "sigma_reference_temperature", 300.0), b)
    return ConductivityModel(_f(p, "sigma_prefactor", 0.0), b)


def _velocity(p, which):
    if f"v_{which}" in p:
        return _f(p, f"v_{which}")
    mult = f"v_{which}_multiple"
    if mult in p:
        if p.get("fermi_velocity") is None:
            raise MaterialError("fermi_velocity must be supplied for this material")
        return _f(p, mult) * _f(p, "fermi_velocity")
    return 0.0


def resolve(name: str, overrides: dict | None = None) -> dict:
    """Merge a preset (or ``preset =`` reference) with user overrides."""
    params = dict(overrides or {})
    base = params.pop("preset", None) or (name if name in PRESETS else None)
    if base is not None:
        if base not in PRESETS:
            raise MaterialError(f"unknown material {base!r}; available: {', '.join(sorted(PRESETS))}")
        merged = dict(PRESETS[base])
        merged.update(params)
        params = merged
    elif "type" not in params:
        raise MaterialError(f"unknown material {name!r}; available: {', '.join(sorted(PRESETS))}")
    missing = sorted(k for k, v in params.items() if v is None)
    if missing:
        raise MaterialError(f"material {name!r} needs user-supplied parameters: {', '.join(missing)}")
    return params


def build(params: dict, name: str = "", base_dir: str = ".") -> Material:
    """Construct a Material from resolved flat parameters."""
    kind = str(params.get("type", "")).strip().lower()
    mu = PermeabilityModel(_f(params, "static_mu", 1.0))
    if kind == "drude":
        perm = _drude(params)
    elif kind == "plasma":
        perm = PlasmaParams(_f(params, "plasma_frequency"))
    elif kind == "dielectric":
        perm = DielectricParams(_oscillators(params), _conductivity(params),
                                _bool(params, "include_conductivity"))
    elif kind == "ideal":
        perm = IdealMetal()
    elif kind == "vacuum":
        perm = Vacuum()
    elif kind == "nonlocal":
        perm = NonlocalDrudeParams(_drude(params), _velocity(params, "transverse"),
                                   _velocity(params, "longitudinal"),
                                   params.get("wavevector_form", "full_k"),
                                   _f(params, "fermi_velocity") if params.get("fermi_velocity") else None)
    elif kind == "tabulated":
        path = params.get("table")
        if not path:
            raise MaterialError("tabulated material needs a 'table' path")
        path = path if os.path.isabs(path) else os.path.join(base_dir, path)
        if not os.path.isfile(path):
            raise FileNotFoundError(f"optical table not found: {path}")
        table = load_optical_table(path)
        ext = str(params.get("extrapolation", "drude")).lower()
        if ext == "drude":
            model = _drude(params)
        elif ext == "plasma":
            model = PlasmaParams(_f(params, "plasma_frequency"))
        elif ext == "dielectric_constant":
            model = None
        else:
            raise MaterialError(f"unknown extrapolation {ext!r}")
        perm = TabulatedPermittivity(table, ExtrapolationSpec(model, float(table.energy[0]),
                                                              _f(params, "mismatch_tolerance", 0.2)))
    else:
        raise MaterialError(f"unknown material type {kind!r}")
    return Material(perm, mu, name)


def material(name: str, **overrides) -> Material:
    """Convenience: ``material("au-drude")`` or with keyword overrides."""
    return build(resolve(name, {k: (None if v is None else str(v)) for k, v in overrides.items()}), name)
