"""Command-line interface.

Usage::

    thermal-casimir pressure --material au-drude --a 0.5 --T 300
    thermal-casimir curve --quantity relative-thermal-correction \\
        --materials au-drude,au-plasma --a 0.5:6.5:61 --T 300 --output fig1.csv
    thermal-casimir validate --config run.ini

Exit codes: 0 success, 2 configuration error, 3 numerical error, 4 I/O error.
Every run emits a manifest (``<output>.manifest.json``, or one JSON line on
stderr when the table goes to stdout) that can be passed back via --config.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import __version__, materials
from .analysis import (Observable, Quantity, SphereGeometry, compare, curve, CurveSpec,
                       load_measurements, pfa_force, pfa_gradient)
from .config import COMMANDS, ConfigError, RunConfig, build_config, load_file, parse_range
from .entropy import entropy_curve, entropy_unit
from .lifshitz import (NumericSettings, free_energy, pressure_matsubara, pressure_zero_temperature,
                       thermal_correction)
from .optical import (ExtrapolationSpec, OpticalTableError, kramers_kronig_imag_axis,
                      load_optical_table, matching_mismatch)
from .response import DrudeParams, PlasmaParams, RelaxationModel
from .units import N_PER_EV_UM, N_PER_M_PER_EV_UM2, PA_PER_EV_UM3, EvaluationPoint, thermal_regime

SCHEMA_VERSION = 1
EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 2, 3, 4


class DataError(OSError):
    """Unreadable or malformed input data file."""


@dataclass
class Table:
    header: list
    rows: list
    summary: dict = field(default_factory=dict)


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return "nan" if math.isnan(v) else repr(float(v))
    if isinstance(v, (np.integer,)):
        return str(int(v))
    return str(v)


def _settings(cfg: RunConfig) -> NumericSettings:
    kw = {k: cfg.numerics[k] for k in ("truncation_tol", "quad_step", "l_cap") if k in cfg.numerics}
    try:
        return NumericSettings(**kw)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _models(cfg: RunConfig):
    out = {}
    for n in cfg.models:
        try:
            out[n] = materials.build(cfg.material_params[n], n, cfg.base_dir)
        except materials.MaterialError as exc:
            raise ConfigError(str(exc)) from None
        except (OpticalTableError, OSError) as exc:
            raise DataError(str(exc)) from None
    return out


def _map(fn, items, threads):
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def _grid(cfg):
    return [(n, a, T) for n in cfg.models for a in cfg.separations for T in cfg.temperatures]


def _cmd_pressure(cfg, models, st, threads):
    def one(c):
        n, a, T = c
        p = EvaluationPoint(a, T)
        r = pressure_matsubara(p, models[n], st) if T > 0 else pressure_zero_temperature(a, models[n], st)
        return [n, a, T, r.pressure, r.pressure * PA_PER_EV_UM3, r.terms_used, r.quadrature_error,
                r.summation, thermal_regime(p).regime.value]
    rows = _map(one, _grid(cfg), threads)
    return Table(["material", "a_um", "T_K", "pressure_eV_um3", "pressure_Pa", "terms_used",
                  "quadrature_error_eV_um3", "summation", "regime"], rows)


def _cmd_thermal(cfg, models, st, threads):
    def one(c):
        n, a, T = c
        tc = thermal_correction(EvaluationPoint(a, T), models[n], st)
        return [n, a, T, tc.pressure_T, tc.pressure_0, tc.absolute, tc.relative]
    rows = _map(one, _grid(cfg), threads)
    return Table(["material", "a_um", "T_K", "pressure_T_eV_um3", "pressure_0_eV_um3",
                  "delta_T_P_eV_um3", "delta_T_P_relative"], rows,
                 {"zero_temperature_reference": "material parameters frozen at T"})


def _cmd_free_energy(cfg, models, st, threads):
    def one(c):
        n, a, T = c
        r = free_energy(EvaluationPoint(a, T), models[n], st)
        return [n, a, T, r.free_energy, r.terms_used, r.quadrature_error, r.summation]
    return Table(["material", "a_um", "T_K", "free_energy_eV_um2", "terms_used",
                  "quadrature_error_eV_um2", "summation"], _map(one, _grid(cfg), threads))


def _warnings(cfg):
    out = []
    if cfg.radius:
        geom = SphereGeometry(cfg.radius)
        for a in cfg.separations:
            w = geom.advisory(a)
            if w:
                out.append(f"a={a:g} um: {w}")
    return out


def _cmd_gradient(cfg, models, st, threads):
    geom = SphereGeometry(cfg.radius)

    def one(c):
        n, a, T = c
        g = pfa_gradient(EvaluationPoint(a, T), models[n], geom, st)
        return [n, a, T, cfg.radius, g, g * N_PER_M_PER_EV_UM2]
    return Table(["material", "a_um", "T_K", "R_um", "gradient_eV_um2", "gradient_N_m"],
                 _map(one, _grid(cfg), threads), {"warnings": _warnings(cfg)})


def _cmd_force(cfg, models, st, threads):
    geom = SphereGeometry(cfg.radius)

    def one(c):
        n, a, T = c
        f = pfa_force(EvaluationPoint(a, T), models[n], geom, st)
        return [n, a, T, cfg.radius, f, f * N_PER_EV_UM]
    return Table(["material", "a_um", "T_K", "R_um", "force_eV_um", "force_N"],
                 _map(one, _grid(cfg), threads), {"warnings": _warnings(cfg)})


def _cmd_entropy(cfg, models, st, threads):
    if len(cfg.separations) != 1:
        raise ConfigError("entropy takes a single separation")
    a = cfg.separations[0]
    h = cfg.numerics.get("entropy_step")
    tolf = cfg.numerics.get("entropy_tol_fraction", 1e-3)
    rows, summary = [], {}
    for n in cfg.models:
        c = entropy_curve(a, models[n], cfg.temperatures, h, st, tolf, threads)
        u = entropy_unit(a)
        for T, S, hh in zip(c.temperatures, c.entropies, c.steps):
            rows.append([n, a, T, S, S / u, hh, c.limit_estimate, c.classification.value])
        summary[n] = {"limit_estimate": c.limit_estimate, "limit_estimate_units": c.limit_estimate / u,
                      "tolerance": c.tolerance, "classification": c.classification.value}
    return Table(["material", "a_um", "T_K", "entropy_eV_K_um2", "entropy_kB_16pi_a2", "step_K",
                  "limit_estimate_eV_K_um2", "classification"], rows, {"entropy": summary})


def _cmd_curve(cfg, models, st, threads):
    if len(cfg.temperatures) != 1:
        raise ConfigError("curve takes a single temperature")
    try:
        q = Quantity(cfg.quantity)
    except ValueError:
        raise ConfigError(f"unknown quantity {cfg.quantity!r}; choose from "
                          + ", ".join(x.value for x in Quantity)) from None
    geom = SphereGeometry(cfg.radius) if cfg.radius else None
    if q in (Quantity.GRADIENT, Quantity.FORCE) and geom is None:
        raise ConfigError(f"{q.value} needs a sphere radius (--R)")
    tab = curve(CurveSpec(q, models, tuple(cfg.separations), cfg.temperatures[0], geom, st, threads))
    rows = [[a] + [tab.columns[n][i] for n in cfg.models] for i, a in enumerate(tab.separations)]
    summary = {"quantity": q.value, "failures": [list(f) for f in tab.failures],
               "warnings": _warnings(cfg)}
    return Table(["a_um"] + list(cfg.models), rows, summary)


def _cmd_compare(cfg, models, st, threads):
    m = cfg.measurement
    try:
        data = load_measurements(os.path.join(cfg.base_dir, m["path"]) if not os.path.isabs(m["path"])
                                 else m["path"], Observable(m["kind"]), float(m["confidence_level"]))
    except OSError as exc:
        raise DataError(str(exc)) from None
    except ValueError as exc:
        raise DataError(f"{m['path']}: {exc}") from None
    if len(cfg.temperatures) != 1:
        raise ConfigError("compare takes a single temperature")
    T = cfg.temperatures[0]
    grid = cfg.separations or list(np.geomspace(data.separations.min(), data.separations.max(), 25))
    q = {"pressure": Quantity.PRESSURE, "force_gradient": Quantity.GRADIENT,
         "force": Quantity.FORCE}[data.kind.value]
    geom = SphereGeometry(cfg.radius) if cfg.radius else None
    tab = curve(CurveSpec(q, models, tuple(grid), T, geom, st, threads))
    if tab.failures:
        raise ArithmeticError(f"prediction failures: {tab.failures}")
    preds = {n: (tab.separations, tab.columns[n]) for n in cfg.models}
    rep = compare(data, preds, cfg.numerics.get("threshold", 0.95), cfg.numerics.get("n_errors", 1.0))
    rows = []
    for n in cfg.models:
        mc = rep.models[n]
        for p in mc.points:
            rows.append([n, p.separation, p.prediction, p.datum, p.error, p.interpolation_error,
                         p.deviation, p.deviation <= rep.n_errors, mc.verdict.value])
    summary = {"verdicts": {n: {"fraction_consistent": rep.models[n].fraction_consistent,
                                "verdict": rep.models[n].verdict.value} for n in cfg.models},
               "threshold": rep.threshold, "n_errors": rep.n_errors,
               "confidence_level": data.confidence_level, "observable": data.kind.value}
    return Table(["model", "separation_um", "prediction", "datum", "total_error", "interpolation_error",
                  "deviation_in_errors", "consistent", "verdict"], rows, summary)


def _cmd_kk(cfg, models, st, threads):
    kk = cfg.kk
    path = kk["table"] if os.path.isabs(kk["table"]) else os.path.join(cfg.base_dir, kk["table"])
    if not os.path.isfile(path):
        raise DataError(f"optical table not found: {path}")
    try:
        table = load_optical_table(path)
    except OSError as exc:
        raise DataError(str(exc)) from None
    except OpticalTableError as exc:
        raise DataError(f"{path}: {exc}") from None
    ext = kk.get("extrapolation", "drude")
    try:
        if ext == "drude":
            model = DrudeParams(float(kk.get("plasma_frequency", 9.0)),
                                RelaxationModel.constant(float(kk.get("gamma", 0.035))))
        elif ext == "plasma":
            model = PlasmaParams(float(kk.get("plasma_frequency", 9.0)))
        elif ext == "dielectric_constant":
            model = None
        else:
            raise ConfigError(f"unknown extrapolation {ext!r}")
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    spec = ExtrapolationSpec(model, float(table.energy[0]))
    xi = np.asarray(parse_range(kk["xi"], "xi"))
    if np.any(xi <= 0):
        raise ConfigError("xi values must be positive")
    eps = np.atleast_1d(kramers_kronig_imag_axis(table, spec, xi))
    mm = matching_mismatch(table, spec)
    return Table(["xi_eV", "eps_imag_axis"], [[x, e] for x, e in zip(xi, eps)],
                 {"matching_point_eV": float(table.energy[0]), "matching_mismatch": mm,
                  "extrapolation": spec.name, "rows": len(table)})


def _cmd_diff(cfg, models, st, threads):
    geom = SphereGeometry(cfg.radius)
    sa, sb = cfg.states
    if len(cfg.temperatures) != 1:
        raise ConfigError("diff-force takes a single temperature")
    T = cfg.temperatures[0]

    def one(a):
        p = EvaluationPoint(a, T)
        fa = pfa_force(p, models[sa], geom, st)
        fb = pfa_force(p, models[sb], geom, st)
        return [a, T, fa, fb, fa - fb, (fa - fb) * N_PER_EV_UM]
    return Table(["a_um", "T_K", "force_A_eV_um", "force_B_eV_um", "force_difference_eV_um",
                  "force_difference_N"], _map(one, cfg.separations, threads),
                 {"state_a": sa, "state_b": sb, "warnings": _warnings(cfg)})


HANDLERS = {"pressure": _cmd_pressure, "thermal-correction": _cmd_thermal, "gradient": _cmd_gradient,
            "force": _cmd_force, "free-energy": _cmd_free_energy, "entropy": _cmd_entropy,
            "curve": _cmd_curve, "compare": _cmd_compare, "kk-transform": _cmd_kk,
            "diff-force": _cmd_diff}


def execute(cfg: RunConfig) -> Table:
    """Compute the table for a resolved configuration (no file output)."""
    st = _settings(cfg)
    threads = int(cfg.numerics.get("threads", 1))
    if threads < 1:
        raise ConfigError("threads must be >= 1")
    models = _models(cfg)
    return HANDLERS[cfg.command](cfg, models, st, threads)


def render(table: Table, fmt: str) -> str:
    if fmt == "json":
        doc = {"schema_version": SCHEMA_VERSION, "columns": table.header,
               "rows": [[_json_val(v) for v in r] for r in table.rows],
               "summary": _jsonable(table.summary)}
        return json.dumps(doc, sort_keys=True, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.header)
    for r in table.rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _json_val(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (float, np.floating)):
        return None if math.isnan(v) else float(v)
    if isinstance(v, np.integer):
        return int(v)
    return v


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return _json_val(x)


def manifest(cfg: RunConfig, table: Table | None, outputs: list) -> dict:
    return {"schema_version": SCHEMA_VERSION, "library": "thermal_casimir", "version": __version__,
            "config": _jsonable(cfg.to_dict()), "outputs": outputs,
            "summary": _jsonable(table.summary) if table else {}}


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    """Execute and write outputs; returns the process exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        table = execute(cfg)
        text = render(table, cfg.output_format)
        outputs = []
        if cfg.output_path:
            with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            outputs.append(cfg.output_path)
            man_path = cfg.output_path + ".manifest.json"
            with open(man_path, "w", encoding="utf-8") as fh:
                json.dump(manifest(cfg, table, outputs), fh, sort_keys=True, indent=1)
                fh.write("\n")
        else:
            stdout.write(text)
            stderr.write(json.dumps({"manifest": manifest(cfg, table, ["<stdout>"])}, sort_keys=True) + "\n")
        return 0
    except ConfigError as exc:
        return _fail(stderr, EXIT_CONFIG, "config", exc)
    except ArithmeticError as exc:
        return _fail(stderr, EXIT_NUMERIC, "numeric", exc)
    except OSError as exc:
        return _fail(stderr, EXIT_IO, "io", exc)


def _fail(stream, code, kind, exc):
    stream.write(json.dumps({"error": {"kind": kind, "type": type(exc).__name__,
                                       "message": str(exc), "exit_code": code}}) + "\n")
    return code


def validate(cfg: RunConfig) -> dict:
    """Resolved parameters, unit conversions and advisory warnings."""
    diag = {"command": cfg.command, "materials": {}, "warnings": _warnings(cfg),
            "conversions": {"pressure": f"1 eV/um^3 = {PA_PER_EV_UM3} Pa",
                            "force_gradient": f"1 eV/um^2 = {N_PER_M_PER_EV_UM2} N/m",
                            "force": f"1 eV/um = {N_PER_EV_UM} N"}}
    for n in cfg.models:
        diag["materials"][n] = dict(cfg.material_params[n])
    diag["separations_um"] = list(cfg.separations)
    diag["temperatures_K"] = list(cfg.temperatures)
    diag["regimes"] = [[a, T, thermal_regime(EvaluationPoint(a, T)).regime.value]
                       for a in cfg.separations for T in cfg.temperatures]
    return diag


def _parser():
    p = argparse.ArgumentParser(prog="thermal-casimir", description="Thermal Casimir calculations")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS + ("validate",):
        s = sub.add_parser(name)
        if name == "validate":
            s.add_argument("target", nargs="?", default="pressure", choices=COMMANDS,
                           help="command whose configuration to check")
        s.add_argument("--config", help="INI configuration file or a run manifest (.json)")
        s.add_argument("--material", "--materials", dest="materials", help="comma-separated names")
        s.add_argument("--a", help="separation(s) in um: x, x1,x2 or start:stop:count[:log]")
        s.add_argument("--T", help="temperature(s) in K, same syntax as --a")
        s.add_argument("--R", type=float, help="sphere radius in um")
        s.add_argument("--quantity")
        s.add_argument("--data", help="measurement CSV (compare)")
        s.add_argument("--kind", help="observable kind of the measurement data")
        s.add_argument("--table", help="optical CSV (kk-transform)")
        s.add_argument("--xi", help="imaginary frequencies in eV (kk-transform)")
        s.add_argument("--extrapolation")
        s.add_argument("--plasma-frequency", dest="plasma_frequency")
        s.add_argument("--gamma")
        s.add_argument("--state-a", dest="state_a")
        s.add_argument("--state-b", dest="state_b")
        s.add_argument("--output", "-o")
        s.add_argument("--format", choices=("csv", "json"))
        s.add_argument("--threads", type=int)
        s.add_argument("--truncation-tol", dest="truncation_tol", type=float)
        s.add_argument("--quad-step", dest="quad_step", type=float)
        s.add_argument("--entropy-step", dest="entropy_step", type=float)
        s.add_argument("--entropy-tol-fraction", dest="entropy_tol_fraction", type=float)
        s.add_argument("--threshold", type=float)
        s.add_argument("--n-errors", dest="n_errors", type=float)
    return p


def config_from_args(args) -> RunConfig:
    command = args.target if args.command == "validate" else args.command
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config", "target")}
    if args.config:
        try:
            doc, base = load_file(args.config)
        except OSError as exc:
            raise DataError(str(exc)) from None
        if "config" in doc and "schema_version" in doc:
            cfg = RunConfig.from_dict(doc["config"])
            if cfg.command != command:
                raise ConfigError(f"manifest is for {cfg.command!r}, not {command!r}")
            if args.output:
                cfg.output_path = args.output
            if args.format:
                cfg.output_format = args.format
            return cfg
        return build_config(command, doc, flags, base)
    return build_config(command, {}, flags, os.getcwd())


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ConfigError as exc:
        return _fail(sys.stderr, EXIT_CONFIG, "config", exc)
    except OSError as exc:
        return _fail(sys.stderr, EXIT_IO, "io", exc)
    if args.command == "validate":
        sys.stdout.write(json.dumps(_jsonable(validate(cfg)), indent=1, sort_keys=True) + "\n")
        return 0
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
