"""Imaginary-time trajectory: transverse oscillation plus translation.

The x equation of motion integrates once to dx/dtau = -omega_c (eta + eta0),
leaving m eta'' = d(E - v)/d eta for the transverse coordinate.  One arch
is integrated from the turning point eta = 0 to the outer turning point
(event eta' = 0); the second half of the cycle is its time-reversed mirror.
Whole runs repeat the cycle, shifting x by the measured advance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import integrate

from .cycle import compute_cycle
from .errors import BeyondOneInstanton, EnergyDrift, EventMiss
from .potential import BarrierPotential, SystemConfig, u_of_i_eta, du_of_i_eta_deta, wkb_rate
from .well import EffectiveWell, find_turning_point, transverse_gap, transverse_gap_slope, v_of_eta

SAMPLES_PER_HALF = 1000  # even, so Simpson's rule applies per arch
PERIOD_CAP = 1e4
DRIFT_FACTOR = 100.0


@dataclass(frozen=True)
class TrajectoryState:
    tau: float
    eta: float
    eta_dot: float
    x: float


@dataclass(frozen=True)
class TrajectoryRecord:
    """States on a uniform tau grid covering N whole cycles.

    x starts at 0 and decreases; the distance covered is |x(tau0) - x(0)|.
    """

    tau: np.ndarray
    eta: np.ndarray
    eta_dot: np.ndarray
    x: np.ndarray
    N_cycles: int
    measured_delta_tau: float
    measured_delta_x: float
    well: EffectiveWell
    max_energy_drift: float
    action_direct: float = math.nan

    @property
    def tau0(self) -> float:
        return float(self.tau[-1])

    @property
    def x_dot(self) -> np.ndarray:
        return -self.well.omega_c * (self.eta + self.well.eta0)

    @property
    def distance(self) -> float:
        return abs(float(self.x[-1] - self.x[0]))

    def state(self, i: int) -> TrajectoryState:
        return TrajectoryState(float(self.tau[i]), float(self.eta[i]), float(self.eta_dot[i]), float(self.x[i]))

    def joints(self) -> np.ndarray:
        """Indices of the cycle boundaries tau = k * Delta tau."""
        per = (len(self.tau) - 1) // self.N_cycles
        return np.arange(self.N_cycles + 1) * per


def _scales(p, cfg, well):
    depth = float(np.max(transverse_gap(p, cfg, np.linspace(0, well.delta_eta, 65)[1:-1])))
    speed = math.sqrt(2.0 * depth / well.mass)
    return depth, speed


def _arch(p: BarrierPotential, cfg: SystemConfig, well: EffectiveWell, n_half: int):
    """Integrate from eta = 0 to the outer turning point.  Returns grid and states."""
    m, omega, eta0 = well.mass, well.omega_c, well.eta0
    depth, speed = _scales(p, cfg, well)
    period_guess = 4.0 * well.delta_eta / speed
    cap = PERIOD_CAP * period_guess
    rtol = cfg.tolerances.ode_rel_tol

    def rhs(tau, y):
        eta, eta_dot, _ = y
        return [eta_dot, transverse_gap_slope(p, cfg, eta) / m, -omega * (eta + eta0)]

    def turning(tau, y):
        return y[1]

    turning.terminal = True
    turning.direction = -1

    atol = rtol * np.array([well.delta_eta, speed, omega * (eta0 + well.delta_eta) * period_guess])
    sol = integrate.solve_ivp(
        rhs, (0.0, cap), [0.0, 0.0, 0.0], method="DOP853", rtol=max(rtol, 3e-14), atol=atol,
        events=turning, dense_output=True,
    )
    if sol.status != 1 or not len(sol.t_events[0]):
        raise EventMiss(f"no outer turning point before tau = {cap:g} ({sol.message})")
    tau_half = float(sol.t_events[0][0])
    grid = np.linspace(0.0, tau_half, n_half + 1)
    states = sol.sol(grid)
    states[:, 0] = 0.0
    states[:, -1] = sol.y_events[0][0]
    return grid, states


def integrate_full(
    p: BarrierPotential,
    cfg: SystemConfig,
    well: EffectiveWell | None = None,
    N: int = 1,
    samples_per_half: int = SAMPLES_PER_HALF,
) -> TrajectoryRecord:
    """N whole cycles of the trajectory from eta = 0, eta' = 0, x = 0."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if samples_per_half % 2:
        raise ValueError("samples_per_half must be even")
    if well is None:
        well = find_turning_point(p, cfg)
    grid, (eta, eta_dot, x) = _arch(p, cfg, well, samples_per_half)
    tau_half = grid[-1]

    # mirror about the outer turning point
    c_tau = np.concatenate([grid, 2.0 * tau_half - grid[-2::-1]])
    c_eta = np.concatenate([eta, eta[-2::-1]])
    c_eta_dot = np.concatenate([eta_dot, -eta_dot[-2::-1]])
    c_x = np.concatenate([x, 2.0 * x[-1] - x[-2::-1]])
    c_eta[-1], c_eta_dot[-1] = 0.0, 0.0

    delta_tau = 2.0 * tau_half
    shift = c_x[-1]
    taus, etas, eta_dots, xs = [c_tau], [c_eta], [c_eta_dot], [c_x]
    for k in range(1, N):
        taus.append(c_tau[1:] + k * delta_tau)
        etas.append(c_eta[1:])
        eta_dots.append(c_eta_dot[1:])
        xs.append(c_x[1:] + k * shift)
    tau, eta, eta_dot, x = (np.concatenate(a) for a in (taus, etas, eta_dots, xs))

    drift = float(np.max(energy_drift(p, cfg, well, eta, eta_dot)))
    # the integrator controls error on the scale of the well depth, not |E|
    depth, _ = _scales(p, cfg, well)
    limit = DRIFT_FACTOR * cfg.tolerances.ode_rel_tol * max(1.0, depth / cfg.energy_depth)
    if drift > limit:
        raise EnergyDrift(f"transverse energy drift {drift:.3g} |E| exceeds {limit:.3g} |E|")

    record = TrajectoryRecord(tau, eta, eta_dot, x, N, delta_tau, abs(shift), well, drift)
    return replace(record, action_direct=action_direct(p, cfg, record))


def integrate_cycle(p, cfg, well=None, samples_per_half=SAMPLES_PER_HALF) -> TrajectoryRecord:
    """One period; see integrate_full."""
    return integrate_full(p, cfg, well, 1, samples_per_half)


def energy_drift(p, cfg, well, eta, eta_dot):
    """|(m/2) eta'^2 + v(eta) - E| / |E|, computed as kinetic minus (E - v)."""
    return np.abs(0.5 * well.mass * eta_dot**2 - transverse_gap(p, cfg, eta)) / cfg.energy_depth


def _lagrangian(p, cfg, record):
    w = record.well
    x_dot = record.x_dot
    m = w.mass
    return (
        0.5 * m * x_dot**2
        - 0.5 * m * record.eta_dot**2
        + m * w.omega_c * record.eta * x_dot
        + u_of_i_eta(p, record.eta)
        - cfg.energy
    )


def action_direct(p: BarrierPotential, cfg: SystemConfig, record: TrajectoryRecord) -> float:
    """Euclidean action (2/hbar) * integral of the full Lagrangian along the record."""
    return 2.0 * integrate.simpson(_lagrangian(p, cfg, record), x=record.tau)


def action_forms(p: BarrierPotential, cfg: SystemConfig, record: TrajectoryRecord) -> dict:
    """The action from the full Lagrangian, after eliminating x', and in WKB-minus-well form."""
    w = record.well
    m = w.mass
    v = v_of_eta(p, cfg, record.eta)
    after_first_integral = (
        -0.5 * m * record.eta_dot**2 + v - cfg.energy - m * w.omega_c * w.eta0 * record.x_dot
    )
    well_term = 4.0 * integrate.simpson(cfg.energy - v, x=record.tau)
    return {
        "lagrangian": action_direct(p, cfg, record),
        "first_integral": 2.0 * integrate.simpson(after_first_integral, x=record.tau),
        "wkb_minus_well": wkb_rate(cfg) * record.distance - well_term,
    }


def integrate_unreduced(p, cfg, well, tau_end, t_eval):
    """Both second-order equations, without the first integral.

    Starts at eta = eta' = 0, x = 0, x' = -sqrt(2|E|/m).  Returns rows of
    (tau, x, x', eta, eta').
    """
    m, omega = well.mass, well.omega_c
    rtol = max(cfg.tolerances.ode_rel_tol, 3e-14)

    def rhs(tau, y):
        x, x_dot, eta, eta_dot = y
        return [x_dot, -omega * eta_dot, eta_dot, -omega * x_dot - du_of_i_eta_deta(p, eta) / m]

    x_dot0 = -math.sqrt(2.0 * cfg.energy_depth / m)
    sol = integrate.solve_ivp(
        rhs, (0.0, tau_end), [0.0, x_dot0, 0.0, 0.0], method="DOP853", rtol=rtol,
        atol=rtol * np.array([abs(x_dot0) * tau_end, abs(x_dot0), well.delta_eta, abs(x_dot0)]),
        t_eval=t_eval,
    )
    return np.column_stack([sol.t, sol.y.T])


@dataclass(frozen=True)
class PsiEnvelope:
    """log |psi(x, 0) / psi(0, 0)|^2 along the trajectory.

    ``table`` columns: distance from the entry point (A), log ratio from the
    accumulated action, WKB straight line.  Valid with exponential accuracy
    only; between nodes the curve follows the accumulated action.
    """

    field_H: float
    table: np.ndarray
    nodes: np.ndarray  # columns N, N * Delta x, log ratio at the node
    action_per_cycle: float


PSI_NODE_TOL = 1e-6


def psi_envelope(
    p: BarrierPotential,
    cfg: SystemConfig,
    field_or_resonance,
    N_max: int,
    H_R: float | None = None,
    samples_per_half: int = SAMPLES_PER_HALF,
) -> PsiEnvelope:
    """Wave-function envelope over N_max cycles at the given field.

    ``field_or_resonance`` is a field in tesla or a ResonanceResult.  Fields
    above the resonance, or where the per-cycle action is negative, are
    refused with BeyondOneInstanton.
    """
    if hasattr(field_or_resonance, "H_R"):
        H = H_R = float(field_or_resonance.H_R)
    else:
        H = float(field_or_resonance)
    if H_R is not None and H > H_R + cfg.tolerances.root_abs_tol:
        raise BeyondOneInstanton(f"H = {H:g} T is above H_R = {H_R:g} T")
    run_cfg = cfg.with_field(H)
    well = find_turning_point(p, run_cfg)
    cycle = compute_cycle(p, run_cfg, well)
    per_cycle = wkb_rate(run_cfg) * cycle.delta_x - cycle.delta_A
    if per_cycle < -PSI_NODE_TOL:
        raise BeyondOneInstanton(
            f"action per cycle is {per_cycle:.4g} < 0 at H = {H:g} T; one-trajectory result does not apply"
        )

    record = integrate_full(p, run_cfg, well, N_max, samples_per_half)
    lagrangian = _lagrangian(p, run_cfg, record)
    accumulated = 2.0 * integrate.cumulative_simpson(lagrangian, x=record.tau, initial=0.0)
    distance = record.x[0] - record.x
    table = np.column_stack([distance, -accumulated, -wkb_rate(run_cfg) * distance])
    idx = record.joints()
    nodes = np.column_stack([np.arange(N_max + 1), distance[idx], -accumulated[idx]])
    return PsiEnvelope(H, table, nodes, per_cycle)
