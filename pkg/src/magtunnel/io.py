"""Configuration files, run summaries and plot tables.

Config files are INI-style::

    [potential]
    family = double_harmonic
    u0_eV = 1.0
    a_angstrom = 50
    lambda = 0.215

    [system]
    mass_me = 1.0
    E_eV = -0.01
    R_angstrom = 1000
    H_tesla = 10

    [tolerances]
    quadrature_rel_tol = 1e-9

``E_eV`` is the (negative) bound-state energy.  ``mass_me`` defaults to one
electron mass; ``tolerances`` may be omitted.
"""

from __future__ import annotations

import configparser
import datetime as _dt
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .potential import BarrierPotential, Family, SystemConfig, Tolerances

logger = logging.getLogger(__name__)

TOOL_VERSION = "0.1.0"

_POTENTIAL_KEYS = {"family", "u0_ev", "a_angstrom", "lambda"}
_SYSTEM_KEYS = {"mass_me", "e_ev", "r_angstrom", "h_tesla"}
_TOLERANCE_KEYS = {"quadrature_rel_tol", "root_abs_tol", "ode_rel_tol"}
_SECTIONS = {"potential": _POTENTIAL_KEYS, "system": _SYSTEM_KEYS, "tolerances": _TOLERANCE_KEYS}


def _number(section, key, raw):
    try:
        return float(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"{section}.{key}: cannot read {raw!r} as a number") from None


def config_from_mapping(data: dict) -> tuple[BarrierPotential, SystemConfig]:
    """Build validated config objects from a section -> key -> value mapping."""
    data = {s.lower(): {k.lower(): v for k, v in kv.items()} for s, kv in data.items()}
    for section, keys in data.items():
        if section not in _SECTIONS:
            raise ConfigError(f"unknown section [{section}]")
        unknown = set(keys) - _SECTIONS[section]
        if unknown:
            raise ConfigError(f"unknown key(s) in [{section}]: {', '.join(sorted(unknown))}")

    pot = data.get("potential", {})
    sys_ = data.get("system", {})

    def need(section, values, key, label):
        if key not in values or values[key] in (None, ""):
            raise ConfigError(f"missing required key {section}.{label}")
        return values[key]

    try:
        family = Family.parse(str(need("potential", pot, "family", "family")))
    except ValueError as exc:
        raise ConfigError(f"potential.family: {exc}") from None
    u0 = _number("potential", "u0_eV", need("potential", pot, "u0_ev", "u0_eV"))
    a = _number("potential", "a_angstrom", need("potential", pot, "a_angstrom", "a_angstrom"))
    lam = None
    if family is Family.DOUBLE_HARMONIC:
        lam = _number("potential", "lambda", need("potential", pot, "lambda", "lambda"))
    elif "lambda" in pot:
        logger.warning("potential.lambda is ignored for family %s", family.value)

    if "mass_me" in sys_:
        mass = _number("system", "mass_me", sys_["mass_me"])
    else:
        mass = 1.0
        logger.warning("system.mass_me not given; assuming the free electron mass (1.0)")
    E = _number("system", "E_eV", need("system", sys_, "e_ev", "E_eV"))
    if not E < 0:
        raise ConfigError(f"system.E_eV must be negative (a bound level below the barrier), got {E}")
    R = _number("system", "R_angstrom", need("system", sys_, "r_angstrom", "R_angstrom"))
    H = _number("system", "H_tesla", need("system", sys_, "h_tesla", "H_tesla"))
    tol_values = {k: _number("tolerances", k, v) for k, v in data.get("tolerances", {}).items()}

    try:
        potential = BarrierPotential(family, u0, a, lam)
        tolerances = Tolerances(**tol_values)
        system = SystemConfig(energy_depth=-E, barrier_length_R=R, field_H=H, mass=mass, tolerances=tolerances)
    except ValueError as exc:
        raise ConfigError(f"invalid configuration: {exc}") from None
    return potential, system


def load_config(path) -> tuple[BarrierPotential, SystemConfig]:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(path.read_text(), source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None
    data = {s: dict(parser.items(s)) for s in parser.sections()}
    return config_from_mapping(data)


def config_snapshot(p: BarrierPotential, cfg: SystemConfig) -> dict:
    """Mapping that ``config_from_mapping`` turns back into equal objects."""
    potential = {"family": p.family.value, "u0_eV": p.u0, "a_angstrom": p.a}
    if p.lam is not None:
        potential["lambda"] = p.lam
    t = cfg.tolerances
    return {
        "potential": potential,
        "system": {
            "mass_me": cfg.mass,
            "E_eV": cfg.energy,
            "R_angstrom": cfg.barrier_length_R,
            "H_tesla": cfg.field_H,
        },
        "tolerances": {
            "quadrature_rel_tol": t.quadrature_rel_tol,
            "root_abs_tol": t.root_abs_tol,
            "ode_rel_tol": t.ode_rel_tol,
        },
    }


def write_config(path, p: BarrierPotential, cfg: SystemConfig):
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    for section, values in config_snapshot(p, cfg).items():
        parser[section] = {k: repr(v) if isinstance(v, float) else str(v) for k, v in values.items()}
    with open(path, "w") as fh:
        parser.write(fh)


def fmt(value) -> str:
    """Fixed 17-significant-digit text for table cells."""
    return format(float(value), ".17g")


@dataclass
class PlotTable:
    name: str
    headers: list[str]  # with units, e.g. "H [T]"
    rows: np.ndarray

    def __post_init__(self):
        self.rows = np.atleast_2d(np.asarray(self.rows, dtype=float))
        if self.rows.size and self.rows.shape[1] != len(self.headers):
            raise ValueError(f"{self.name}: {len(self.headers)} headers but {self.rows.shape[1]} columns")

    def to_csv(self) -> str:
        lines = [",".join(self.headers)]
        lines += [",".join(fmt(v) for v in row) for row in self.rows if row.size]
        return "\n".join(lines) + "\n"

    def write(self, out_dir) -> Path:
        path = Path(out_dir) / f"{self.name}.csv"
        path.write_text(self.to_csv())
        return path


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


@dataclass
class RunRecord:
    command: str
    config: dict
    results: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    @classmethod
    def start(cls, command, p, cfg):
        t = cfg.tolerances
        return cls(
            command=command,
            config=config_snapshot(p, cfg),
            provenance={
                "tool": "magtunnel",
                "version": TOOL_VERSION,
                "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
                "tolerances": {
                    "quadrature_rel_tol": t.quadrature_rel_tol,
                    "root_abs_tol": t.root_abs_tol,
                    "ode_rel_tol": t.ode_rel_tol,
                },
            },
        )

    def add(self, key, value):
        if key in self.results:
            raise KeyError(f"result {key!r} already recorded")
        self.results[key] = value

    def to_json(self) -> str:
        doc = {
            "command": self.command,
            "config": self.config,
            "results": self.results,
            "provenance": self.provenance,
        }
        return json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"

    def write(self, out_dir) -> Path:
        """Write summary.<command>-<k>.txt with the first unused k."""
        out_dir = Path(out_dir)
        k = 1
        while (path := out_dir / f"summary.{self.command}-{k:03d}.txt").exists():
            k += 1
        path.write_text(self.to_json())
        return path


def read_summary(path) -> dict:
    return json.loads(Path(path).read_text())
