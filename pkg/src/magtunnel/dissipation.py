"""Validity checks for neglecting friction and barrier inhomogeneity.

The numerical factors 0.2 and 7.1 are taken as given; delta E ~ hbar gamma
is used as an equality for unit conversion (order of magnitude only).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .potential import SystemConfig, inertial_mass

FRICTION_FACTOR = 0.2
LINEWIDTH_FACTOR = 7.1
INHOMOGENEITY_FACTOR = 4.0


@dataclass(frozen=True)
class Check:
    passed: bool
    margin: float  # the quantity compared against its threshold


def de_broglie_length(cfg: SystemConfig) -> float:
    """hbar / sqrt(m |E|) in A."""
    return 1.0 / math.sqrt(inertial_mass(cfg) * cfg.energy_depth)


def friction_criterion(gamma: float, tau0: float) -> Check:
    """0.2 * gamma * tau0 < 1 (strict); gamma in eV/hbar, tau0 in hbar/eV."""
    if gamma < 0 or not tau0 > 0:
        raise ValueError("need gamma >= 0 and tau0 > 0")
    margin = FRICTION_FACTOR * gamma * tau0
    return Check(margin < 1.0, margin)


@dataclass(frozen=True)
class LinewidthCheck:
    passed: bool
    R_max: float


def linewidth_criterion(deltaE_over_E: float, lambda_dB: float, R: float) -> LinewidthCheck:
    """delta E / E < 7.1 lambda_dB / R; also the largest admissible R."""
    if deltaE_over_E < 0 or not lambda_dB > 0 or not R > 0:
        raise ValueError("need deltaE/E >= 0 and positive lambda_dB, R")
    R_max = math.inf if deltaE_over_E == 0 else LINEWIDTH_FACTOR * lambda_dB / deltaE_over_E
    return LinewidthCheck(deltaE_over_E < LINEWIDTH_FACTOR * lambda_dB / R, R_max)


def inhomogeneity_criterion(delta_u: float, E: float) -> bool:
    """delta u < 4 |E|."""
    if delta_u < 0:
        raise ValueError("delta_u must be non-negative")
    return delta_u < INHOMOGENEITY_FACTOR * abs(E)


def dissipation_report(
    cfg: SystemConfig,
    delta_tau: float,
    delta_x: float,
    N: int,
    deltaE_over_E: float,
    delta_u: float = 0.0,
) -> dict:
    """Both dissipation criteria side by side for a run of N cycles.

    gamma is taken as delta E / hbar; their ratio is a diagnostic, not
    expected to be 1.
    """
    gamma = deltaE_over_E * cfg.energy_depth  # eV/hbar with hbar = 1
    tau0 = N * delta_tau
    R = N * delta_x
    lam = de_broglie_length(cfg)
    friction = friction_criterion(gamma, tau0)
    width = linewidth_criterion(deltaE_over_E, lam, R)
    linewidth_margin = deltaE_over_E * R / (LINEWIDTH_FACTOR * lam)
    return {
        "gamma_eV": gamma,
        "tau0": tau0,
        "R": R,
        "lambda_dB": lam,
        "friction_pass": friction.passed,
        "friction_margin": friction.margin,
        "linewidth_pass": width.passed,
        "linewidth_margin": linewidth_margin,
        "R_max": width.R_max,
        "margin_ratio": friction.margin / linewidth_margin if linewidth_margin else math.nan,
        "inhomogeneity_pass": inhomogeneity_criterion(delta_u, cfg.energy),
        "inhomogeneity_threshold": INHOMOGENEITY_FACTOR * cfg.energy_depth,
    }
