"""Run configuration: INI files, command-line overrides and manifests."""
from __future__ import annotations

import configparser
import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import materials

COMMANDS = ("pressure", "thermal-correction", "gradient", "force", "free-energy", "entropy",
            "curve", "compare", "kk-transform", "diff-force")


class ConfigError(ValueError):
    pass


def parse_range(text: str, name: str = "range"):
    """'x', 'x1,x2,...' or 'start:stop:count[:log]' -> list of floats."""
    s = str(text).strip()
    try:
        if ":" in s:
            parts = s.split(":")
            if len(parts) not in (3, 4):
                raise ValueError
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
            spacing = parts[3].strip().lower() if len(parts) == 4 else "linear"
            if count < 1:
                raise ValueError
            if count == 1:
                return [start]
            if spacing == "log":
                if start <= 0 or stop <= 0:
                    raise ValueError
                return [float(v) for v in np.geomspace(start, stop, count)]
            if spacing not in ("linear", "lin"):
                raise ValueError
            return [float(v) for v in np.linspace(start, stop, count)]
        return [float(v) for v in s.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse {name} {text!r}; use x, x1,x2 or start:stop:count[:log]") from None


@dataclass
class RunConfig:
    """Fully resolved settings for one run; serialisable to a manifest."""

    command: str
    models: list = field(default_factory=list)           # names, in column order
    material_params: dict = field(default_factory=dict)  # name -> resolved flat params
    separations: list = field(default_factory=list)
    temperatures: list = field(default_factory=list)
    quantity: str = "pressure"
    radius: float | None = None
    numerics: dict = field(default_factory=dict)
    output_path: str | None = None
    output_format: str = "csv"
    measurement: dict = field(default_factory=dict)
    kk: dict = field(default_factory=dict)
    states: tuple = ()
    base_dir: str = "."

    def to_dict(self) -> dict:
        return {
            "command": self.command, "models": list(self.models),
            "material_params": {k: dict(v) for k, v in self.material_params.items()},
            "separations": list(self.separations), "temperatures": list(self.temperatures),
            "quantity": self.quantity, "radius": self.radius, "numerics": dict(self.numerics),
            "output_format": self.output_format, "measurement": dict(self.measurement),
            "kk": dict(self.kk), "states": list(self.states), "base_dir": self.base_dir,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        d = dict(d)
        d["states"] = tuple(d.get("states", ()))
        d.pop("output_path", None)
        return cls(**d)


NUMERIC_KEYS = {"truncation_tol": float, "quad_step": float, "l_cap": int, "threads": int,
                "entropy_step": float, "entropy_tol_fraction": float, "threshold": float,
                "n_errors": float}


def read_ini(path: str) -> configparser.ConfigParser:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return cp


def load_file(path: str):
    """Return (sections dict, base_dir) from an INI file or a manifest JSON."""
    base = os.path.dirname(os.path.abspath(path))
    if path.endswith(".json"):
        with open(path, encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: {exc}") from None
        if "config" not in doc:
            raise ConfigError(f"{path} is not a run manifest")
        return doc, base
    cp = read_ini(path)
    return {s: dict(cp[s]) for s in cp.sections()}, base


def _split(v):
    return [x.strip() for x in str(v).split(",") if x.strip()]


def build_config(command: str, sections: dict | None = None, flags: dict | None = None,
                 base_dir: str = ".") -> RunConfig:
    """Merge file sections and command-line flags (flags win) into a RunConfig."""
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}; choose from {', '.join(COMMANDS)}")
    sec = {k: dict(v) for k, v in (sections or {}).items()}
    flags = {k: v for k, v in (flags or {}).items() if v is not None}
    run = sec.get("run", {})
    sweep = sec.get("sweep", {})
    numerics = {}
    for k, v in sec.get("numerics", {}).items():
        if k not in NUMERIC_KEYS:
            raise ConfigError(f"unknown numerics key {k!r}")
        numerics[k] = v
    for k in NUMERIC_KEYS:
        if k in flags:
            numerics[k] = flags[k]
    try:
        numerics = {k: NUMERIC_KEYS[k](v) for k, v in numerics.items()}
    except ValueError as exc:
        raise ConfigError(f"bad numeric setting: {exc}") from None

    names = _split(flags.get("materials") or run.get("materials") or run.get("material") or "")
    user_blocks = {s.split(".", 1)[1]: v for s, v in sec.items() if s.startswith("material.")}
    states = ()
    if command == "diff-force":
        sa = flags.get("state_a") or run.get("state_a")
        sb = flags.get("state_b") or run.get("state_b")
        if not (sa and sb):
            raise ConfigError("diff-force needs --state-a and --state-b")
        states = (sa, sb)
        names = [sa, sb]
    if command != "kk-transform" and not names:
        raise ConfigError("no material given (--material NAME[,NAME...])")
    resolved = {}
    for n in names:
        try:
            resolved[n] = materials.resolve(n, user_blocks.get(n))
        except materials.MaterialError as exc:
            raise ConfigError(str(exc)) from None

    a_text = flags.get("a") or sweep.get("a")
    T_text = flags.get("T") or sweep.get("T")
    seps = parse_range(a_text, "separation") if a_text is not None else []
    temps = parse_range(T_text, "temperature") if T_text is not None else []
    if command not in ("kk-transform", "compare") and not seps:
        raise ConfigError("no separation given (--a)")
    if command not in ("kk-transform",) and not temps:
        raise ConfigError("no temperature given (--T)")
    if any(not (a > 0 and math.isfinite(a)) for a in seps):
        raise ConfigError("separations must be positive")
    if any(not (t >= 0 and math.isfinite(t)) for t in temps):
        raise ConfigError("temperatures must be non-negative")

    geo = sec.get("geometry", {})
    radius = flags.get("R") or geo.get("radius")
    radius = float(radius) if radius is not None else None
    if command in ("gradient", "force", "diff-force") and radius is None:
        raise ConfigError(f"{command} needs a sphere radius (--R)")
    if radius is not None and not radius > 0:
        raise ConfigError("sphere radius must be positive")

    out = sec.get("output", {})
    fmt = (flags.get("format") or out.get("format") or "csv").lower()
    if fmt not in ("csv", "json"):
        raise ConfigError("output format must be csv or json")
    quantity = flags.get("quantity") or run.get("quantity") or "pressure"

    meas = dict(sec.get("measurement", {}))
    if "data" in flags:
        meas["path"] = flags["data"]
    if "kind" in flags:
        meas["kind"] = flags["kind"]
    if command == "compare":
        if "path" not in meas:
            raise ConfigError("compare needs measurement data (--data)")
        meas.setdefault("kind", "pressure")
        meas.setdefault("confidence_level", "95")
        if meas["kind"] not in ("pressure", "force_gradient", "force"):
            raise ConfigError("compare supports pressure, force_gradient or force data")
        if meas["kind"] != "pressure" and radius is None:
            raise ConfigError("sphere-plate data need a sphere radius (--R)")
    kk = dict(sec.get("optical", {}))
    for key in ("table", "xi", "extrapolation", "plasma_frequency", "gamma"):
        if key in flags:
            kk[key] = flags[key]
    if command == "kk-transform":
        if "table" not in kk or "xi" not in kk:
            raise ConfigError("kk-transform needs --table and --xi")
        kk.setdefault("extrapolation", "drude")
        parse_range(kk["xi"], "xi")

    return RunConfig(command=command, models=names, material_params=resolved, separations=seps,
                     temperatures=temps, quantity=quantity, radius=radius, numerics=numerics,
                     output_path=flags.get("output") or out.get("path"), output_format=fmt,
                     measurement=meas, kk=kk, states=states, base_dir=base_dir)
