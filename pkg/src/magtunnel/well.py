"""Effective transverse well v(eta) and its outer turning point."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .errors import NoWell
from .potential import (
    CONSTANTS,
    COSH_ARGUMENT_LIMIT,
    BarrierPotential,
    SystemConfig,
    cyclotron_frequency,
    du_of_i_eta_deta,
    inertial_mass,
    u_of_i_eta,
)

SCAN_START = 1e-6  # in units of a
POSITIVITY_SAMPLES = 1000


@dataclass(frozen=True)
class EffectiveWell:
    eta0: float
    energy_E: float
    delta_eta: float
    valid: bool
    omega_c: float
    mass: float  # internal units
    v_samples: np.ndarray | None = None


def _magnetic(cfg):
    if not cfg.field_H > 0:
        raise ValueError("the effective well needs H > 0 (eta0 diverges at H = 0)")
    m = inertial_mass(cfg)
    omega = cyclotron_frequency(CONSTANTS, cfg.mass, cfg.field_H)
    eta0 = math.sqrt(2.0 * cfg.energy_depth / m) / omega
    return m, omega, eta0


def guiding_offset(cfg: SystemConfig) -> float:
    """eta0 = sqrt(2|E| / (m omega_c^2)) in A."""
    return _magnetic(cfg)[2]


def v_of_eta(p: BarrierPotential, cfg: SystemConfig, eta):
    """v(eta) = u(i eta) - (m omega_c^2 / 2)(eta + eta0)^2."""
    m, omega, eta0 = _magnetic(cfg)
    eta = np.asarray(eta, dtype=float)
    v = u_of_i_eta(p, eta) - 0.5 * m * omega**2 * (eta + eta0) ** 2
    return float(v) if eta.ndim == 0 else v


def transverse_gap(p: BarrierPotential, cfg: SystemConfig, eta):
    """E - v(eta), written without the cancellation of the two |E| terms."""
    m, omega, eta0 = _magnetic(cfg)
    eta = np.asarray(eta, dtype=float)
    g = 0.5 * m * omega**2 * eta * (eta + 2.0 * eta0) - u_of_i_eta(p, eta)
    return float(g) if eta.ndim == 0 else g


def transverse_gap_slope(p: BarrierPotential, cfg: SystemConfig, eta):
    """d(E - v)/d eta = m omega_c^2 (eta + eta0) - du(i eta)/d eta."""
    m, omega, eta0 = _magnetic(cfg)
    eta = np.asarray(eta, dtype=float)
    d = m * omega**2 * (eta + eta0) - du_of_i_eta_deta(p, eta)
    return float(d) if eta.ndim == 0 else d


def find_turning_point(p: BarrierPotential, cfg: SystemConfig, strict: bool = True) -> EffectiveWell:
    """Locate the outer turning point Delta eta where v(Delta eta) = E.

    Scans eta geometrically from 1e-6 a, doubling up to 700 a, for the first
    sign change of E - v, then bisects.  The well is accepted only if E - v
    stays positive on 1000 interior points.  Raises NoWell otherwise, or
    returns an invalid well when ``strict`` is false.
    """
    m, omega, eta0 = _magnetic(cfg)

    def gap(x):
        return transverse_gap(p, cfg, x)

    def fail(reason):
        if strict:
            raise NoWell(reason)
        return EffectiveWell(eta0, cfg.energy, math.nan, False, omega, m)

    eta_max = COSH_ARGUMENT_LIMIT * p.a
    lo = SCAN_START * p.a
    if not gap(lo) > 0:
        return fail(f"E - v is not positive just off eta = 0 (at {lo:g} A)")
    hi = lo
    while True:
        hi = min(2.0 * lo, eta_max)
        if gap(hi) <= 0:
            break
        if hi >= eta_max:
            return fail(f"E - v stays positive up to eta = {eta_max:g} A: v(eta) never returns to E")
        lo = hi

    tol = cfg.tolerances.root_abs_tol
    delta_eta = optimize.bisect(gap, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=500)

    interior = np.linspace(0.0, delta_eta, POSITIVITY_SAMPLES + 2)[1:-1]
    if not np.all(gap(interior) > 0):
        return fail("E - v has interior zeros before the outer turning point (disconnected well)")
    return EffectiveWell(eta0, cfg.energy, delta_eta, True, omega, m)


def sample_effective_potential(p, cfg, well: EffectiveWell, n: int = 201, overshoot: float = 1.3):
    """(eta, v(eta)) on [0, overshoot * Delta eta] for plotting."""
    eta = np.linspace(0.0, overshoot * well.delta_eta, n)
    return np.column_stack([eta, v_of_eta(p, cfg, eta)])
