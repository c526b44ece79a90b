"""Barrier profiles, physical constants and run configuration.

Internal units: energies in eV, lengths in angstrom, fields in tesla, masses
in electron masses at the interface.  Imaginary time is measured in hbar/eV,
so hbar = 1, a cyclotron frequency in 1/time is numerically hbar*omega_c in
eV, and the inertial mass is m c^2 / (hbar c)^2 in eV (hbar/eV)^2 / A^2.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

logger = logging.getLogger(__name__)

#: |eta|/a beyond which the continued trigonometric profiles are refused.
COSH_ARGUMENT_LIMIT = 700.0


@dataclass(frozen=True)
class PhysicalConstants:
    hbar_c: float = 1973.269804  # eV * A
    electron_rest_energy: float = 510998.95  # eV
    cyclotron_energy_per_tesla: float = 1.15767e-4  # eV / T, electron mass

    def __post_init__(self):
        for name in ("hbar_c", "electron_rest_energy", "cyclotron_energy_per_tesla"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


CONSTANTS = PhysicalConstants()


class Family(enum.Enum):
    DOUBLE_HARMONIC = "double_harmonic"
    PURE_HARMONIC = "pure_harmonic"
    QUADRATIC = "quadratic"
    QUADRATIC_QUARTIC = "quadratic_quartic"

    @classmethod
    def parse(cls, text: str) -> "Family":
        key = text.strip().replace("-", "_")
        # accept CamelCase spellings such as "DoubleHarmonic"
        if "_" not in key and key.lower() != key:
            key = "".join("_" + ch.lower() if ch.isupper() else ch for ch in key).lstrip("_")
        try:
            return cls(key.lower())
        except ValueError:
            names = ", ".join(f.value for f in cls)
            raise ValueError(f"unknown potential family {text!r} (expected one of {names})") from None


@dataclass(frozen=True)
class BarrierPotential:
    """Transverse barrier profile u(y) with u(0) = 0.

    ``lam`` is only used by the double harmonic family.
    """

    family: Family
    u0: float
    a: float
    lam: float | None = None

    def __post_init__(self):
        if not self.u0 > 0:
            raise ValueError(f"u0 must be positive, got {self.u0}")
        if not self.a > 0:
            raise ValueError(f"a must be positive, got {self.a}")
        if self.family is Family.DOUBLE_HARMONIC:
            if self.lam is None or not 0.0 < self.lam < 1.0:
                raise ValueError(f"lambda must lie in (0, 1) for the double harmonic, got {self.lam}")

    @classmethod
    def double_harmonic(cls, u0, a, lam):
        return cls(Family.DOUBLE_HARMONIC, u0, a, lam)

    @classmethod
    def pure_harmonic(cls, u0, a):
        return cls(Family.PURE_HARMONIC, u0, a)

    @classmethod
    def quadratic(cls, u0, a):
        return cls(Family.QUADRATIC, u0, a)

    @classmethod
    def quadratic_quartic(cls, u0, a):
        return cls(Family.QUADRATIC_QUARTIC, u0, a)


@dataclass(frozen=True)
class Tolerances:
    quadrature_rel_tol: float = 1e-9
    root_abs_tol: float = 1e-10
    ode_rel_tol: float = 1e-13

    def __post_init__(self):
        for name in ("quadrature_rel_tol", "root_abs_tol", "ode_rel_tol"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {value}")


@dataclass(frozen=True)
class SystemConfig:
    """Particle and geometry parameters.

    ``energy_depth`` is |E|; the bound-state energy itself is negative.
    ``mass`` is in electron masses.
    """

    energy_depth: float
    barrier_length_R: float
    field_H: float
    mass: float = 1.0
    tolerances: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        if not self.energy_depth > 0:
            raise ValueError(f"|E| must be positive, got {self.energy_depth}")
        if not self.barrier_length_R > 0:
            raise ValueError(f"R must be positive, got {self.barrier_length_R}")
        if not self.field_H >= 0:
            raise ValueError(f"H must be non-negative, got {self.field_H}")

    @property
    def energy(self) -> float:
        return -self.energy_depth

    def with_field(self, H: float) -> "SystemConfig":
        return replace(self, field_H=H)


def inertial_mass(cfg: SystemConfig, c: PhysicalConstants = CONSTANTS) -> float:
    """Mass in internal units, eV (hbar/eV)^2 / A^2."""
    return cfg.mass * c.electron_rest_energy / c.hbar_c**2


def cyclotron_frequency(c: PhysicalConstants, mass: float, H: float) -> float:
    """hbar*omega_c in eV for a particle of ``mass`` electron masses."""
    if H < 0 or not mass > 0:
        raise ValueError("need H >= 0 and mass > 0")
    return c.cyclotron_energy_per_tesla * H / mass


def wkb_rate(cfg: SystemConfig, c: PhysicalConstants = CONSTANTS) -> float:
    """2 sqrt(2 m |E|) / hbar in 1/A: the rectangular-barrier action per unit length."""
    return 2.0 * math.sqrt(2.0 * inertial_mass(cfg, c) * cfg.energy_depth)


def _out(value, scalar):
    return float(value) if scalar else value


def u_of_y(p: BarrierPotential, y):
    """Barrier height at real transverse coordinate ``y``."""
    y = np.asarray(y, dtype=float)
    t = y / p.a
    if p.family is Family.DOUBLE_HARMONIC:
        one_minus_cos = 2.0 * np.sin(0.5 * t) ** 2
        u = p.u0 * one_minus_cos * (1.0 - p.lam * np.cos(t))
    elif p.family is Family.PURE_HARMONIC:
        u = p.u0 * 2.0 * np.sin(0.5 * t) ** 2
    elif p.family is Family.QUADRATIC:
        u = p.u0 * t * t
    else:
        u = p.u0 * (t * t + t**4)
    return _out(u, y.ndim == 0)


def _check_range(p: BarrierPotential, t):
    if p.family in (Family.DOUBLE_HARMONIC, Family.PURE_HARMONIC):
        if np.any(np.abs(t) > COSH_ARGUMENT_LIMIT):
            raise OverflowError(f"|eta|/a exceeds {COSH_ARGUMENT_LIMIT}; continued potential out of range")


def _finite(values):
    if not np.all(np.isfinite(values)):
        raise OverflowError("continued potential overflowed")
    return values


def u_of_i_eta(p: BarrierPotential, eta):
    """u(i*eta): the profile continued to imaginary transverse coordinate.

    cos(y/a) becomes cosh(eta/a) and y^2 becomes -eta^2.  Real and even.
    """
    eta = np.asarray(eta, dtype=float)
    t = eta / p.a
    _check_range(p, t)
    with np.errstate(over="ignore", invalid="ignore"):
        if p.family is Family.DOUBLE_HARMONIC:
            # 1 - cosh t = -2 sinh^2(t/2), exact near t = 0
            one_minus_cosh = -2.0 * np.sinh(0.5 * t) ** 2
            u = p.u0 * one_minus_cosh * (1.0 - p.lam * np.cosh(t))
        elif p.family is Family.PURE_HARMONIC:
            u = -2.0 * p.u0 * np.sinh(0.5 * t) ** 2
        elif p.family is Family.QUADRATIC:
            u = -p.u0 * t * t
        else:
            t2 = t * t
            u = p.u0 * (t2 * t2 - t2)
    return _out(_finite(u), eta.ndim == 0)


def du_of_i_eta_deta(p: BarrierPotential, eta):
    """d u(i*eta) / d eta in eV/A.  Odd in eta."""
    eta = np.asarray(eta, dtype=float)
    t = eta / p.a
    _check_range(p, t)
    with np.errstate(over="ignore", invalid="ignore"):
        if p.family is Family.DOUBLE_HARMONIC:
            lam = p.lam
            du = -p.u0 / p.a * np.sinh(t) * (1.0 + lam - 2.0 * lam * np.cosh(t))
        elif p.family is Family.PURE_HARMONIC:
            du = -p.u0 / p.a * np.sinh(t)
        elif p.family is Family.QUADRATIC:
            du = -2.0 * p.u0 * t / p.a
        else:
            du = p.u0 / p.a * (4.0 * t**3 - 2.0 * t)
    return _out(_finite(du), eta.ndim == 0)


# Worked example: two quantum dots, |E| ~ 0.01 eV.  The electron mass is an
# assumption; no effective mass is given for it.
EXAMPLE_POTENTIAL = BarrierPotential.double_harmonic(u0=1.0, a=50.0, lam=0.215)
EXAMPLE_SYSTEM = SystemConfig(energy_depth=0.01, barrier_length_R=1000.0, field_H=10.0, mass=1.0)

# A shallower barrier with a GaAs-like effective mass.  Unlike the worked
# example, it has a resonance field inside [1, 30] T (near 8.4 T).
RESONANT_POTENTIAL = BarrierPotential.double_harmonic(u0=0.03, a=50.0, lam=0.215)
RESONANT_SYSTEM = SystemConfig(energy_depth=0.01, barrier_length_R=1200.0, field_H=8.0, mass=0.067)
