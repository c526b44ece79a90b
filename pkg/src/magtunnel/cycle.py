"""Per-cycle period, advance and action of the transverse oscillation.

All three integrals run over [0, Delta eta] where E - v vanishes linearly at
both ends.  The range is split and each half is mapped with eta = s^2
(left) or eta = Delta eta - s^2 (right); after the map the 1/sqrt(E - v)
integrands are bounded and smooth, and QUADPACK handles them directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import QuadratureFailure, SingularityOrder
from .potential import BarrierPotential, SystemConfig
from .well import EffectiveWell, find_turning_point, transverse_gap, transverse_gap_slope

# Below this fraction of Delta eta the divided difference g/s^2 is replaced
# by the slope at the midpoint (same value to O(s^4), no cancellation).
_TAYLOR_FRACTION = 1e-9


@dataclass(frozen=True)
class CycleResult:
    delta_tau: float  # hbar/eV
    delta_x: float  # A
    delta_A: float
    err_estimates: tuple[float, float, float]
    field_H: float = math.nan
    delta_eta: float = math.nan

    @property
    def action_per_length(self) -> float:
        return self.delta_A / self.delta_x


class _MappedWell:
    """E - v on [0, Delta eta] seen through the square-root maps."""

    def __init__(self, gap, slope, delta_eta, split=0.5):
        if not 0.0 < split < 1.0:
            raise ValueError("split must lie in (0, 1)")
        self.gap = gap
        self.slope = slope
        self.delta_eta = delta_eta
        self.split_eta = split * delta_eta
        self.gap_end = gap(delta_eta)
        self.cutoff = _TAYLOR_FRACTION * delta_eta
        self._check_endpoints()

    def _check_endpoints(self):
        left = self.slope(0.0)
        right = -self.slope(self.delta_eta)
        scale = max(abs(self.gap(x)) for x in np.linspace(0, self.delta_eta, 9)[1:-1]) / self.delta_eta
        for name, value in (("eta = 0", left), ("eta = Delta eta", right)):
            if not value > 1e-10 * scale:
                raise SingularityOrder(
                    f"E - v vanishes faster than linearly at {name} (slope {value:g}); degenerate well"
                )

    def q_left(self, s):
        s2 = s * s
        if s2 < self.cutoff:
            return self.slope(0.5 * s2)
        return self.gap(s2) / s2

    def q_right(self, s):
        s2 = s * s
        if s2 < self.cutoff:
            return -self.slope(self.delta_eta - 0.5 * s2)
        return (self.gap(self.delta_eta - s2) - self.gap_end) / s2

    def integral(self, weight: Callable[[float], float], power: float, rel_tol: float):
        """Integral of weight(eta) * (E - v)^power over the well, power = +-1/2.

        Returns (value, relative error estimate).
        """
        odd = 1.0 + 2.0 * power  # exponent of s left after the map

        def left(s):
            return 2.0 * weight(s * s) * s**odd * self.q_left(s) ** power

        def right(s):
            return 2.0 * weight(self.delta_eta - s * s) * s**odd * self.q_right(s) ** power

        opts = dict(epsabs=0.0, epsrel=0.1 * rel_tol, limit=400)
        a, ea = integrate.quad(left, 0.0, math.sqrt(self.split_eta), **opts)
        b, eb = integrate.quad(right, 0.0, math.sqrt(self.delta_eta - self.split_eta), **opts)
        value = a + b
        rel = (ea + eb) / abs(value) if value else math.inf
        if not math.isfinite(value) or rel > rel_tol:
            raise QuadratureFailure(f"quadrature error estimate {rel:.3g} exceeds tolerance {rel_tol:.3g}")
        return value, rel


def _one(_):
    return 1.0


def cycle_from_gap(gap, slope, delta_eta, mass, omega_c, eta0, rel_tol=1e-9, split=0.5, field_H=math.nan):
    """Cycle triple for an arbitrary transverse gap E - v(eta).

    ``mass`` is in internal units; ``gap`` and ``slope`` are scalar callables
    for E - v and its eta-derivative.
    """
    w = _MappedWell(gap, slope, delta_eta, split)
    root2m = math.sqrt(2.0 * mass)
    period, e_tau = w.integral(_one, -0.5, rel_tol)
    advance, e_x = w.integral(lambda eta: eta0 + eta, -0.5, rel_tol)
    area, e_A = w.integral(_one, 0.5, rel_tol)
    return CycleResult(
        delta_tau=root2m * period,
        delta_x=omega_c * root2m * advance,
        delta_A=4.0 * root2m * area,
        err_estimates=(e_tau, e_x, e_A),
        field_H=field_H,
        delta_eta=delta_eta,
    )


def _mapped(well: EffectiveWell, p: BarrierPotential, cfg: SystemConfig, split=0.5):
    if not well.valid:
        raise ValueError("cycle integrals need a valid well")
    return _MappedWell(
        lambda x: transverse_gap(p, cfg, x),
        lambda x: transverse_gap_slope(p, cfg, x),
        well.delta_eta,
        split,
    )


def compute_delta_tau(well: EffectiveWell, p: BarrierPotential, cfg: SystemConfig, split=0.5) -> float:
    """Oscillation period in hbar/eV."""
    value, _ = _mapped(well, p, cfg, split).integral(_one, -0.5, cfg.tolerances.quadrature_rel_tol)
    return math.sqrt(2.0 * well.mass) * value


def compute_delta_x(well: EffectiveWell, p: BarrierPotential, cfg: SystemConfig, split=0.5) -> float:
    """Advance along the tunneling direction per transverse cycle, in A."""
    eta0 = well.eta0
    value, _ = _mapped(well, p, cfg, split).integral(
        lambda eta: eta0 + eta, -0.5, cfg.tolerances.quadrature_rel_tol
    )
    return well.omega_c * math.sqrt(2.0 * well.mass) * value


def compute_delta_A(well: EffectiveWell, p: BarrierPotential, cfg: SystemConfig, split=0.5) -> float:
    """Action removed per cycle (dimensionless)."""
    value, _ = _mapped(well, p, cfg, split).integral(_one, 0.5, cfg.tolerances.quadrature_rel_tol)
    return 4.0 * math.sqrt(2.0 * well.mass) * value


def compute_cycle(p: BarrierPotential, cfg: SystemConfig, well: EffectiveWell | None = None, split=0.5) -> CycleResult:
    """All three cycle quantities at the field in ``cfg``."""
    if well is None:
        well = find_turning_point(p, cfg)
    if not well.valid:
        raise ValueError("cycle integrals need a valid well")
    return cycle_from_gap(
        lambda x: transverse_gap(p, cfg, x),
        lambda x: transverse_gap_slope(p, cfg, x),
        well.delta_eta,
        well.mass,
        well.omega_c,
        well.eta0,
        cfg.tolerances.quadrature_rel_tol,
        split,
        cfg.field_H,
    )


def velocity_heuristic_ratio(cycle: CycleResult, cfg: SystemConfig, mass: float) -> float:
    """Delta x / (sqrt(2|E|/m) Delta tau).

    Exceeds 1 by the eta-weighted part of the advance integral; reported as a
    diagnostic only.
    """
    return cycle.delta_x / (math.sqrt(2.0 * cfg.energy_depth / mass) * cycle.delta_tau)
