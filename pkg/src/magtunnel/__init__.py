"""Imaginary-time trajectories for tunneling across a long barrier in a magnetic field."""

from .cycle import CycleResult, compute_cycle, compute_delta_A, compute_delta_tau, compute_delta_x
from .errors import (
    BeyondOneInstanton,
    ConfigError,
    EnergyDrift,
    EventMiss,
    NoBracket,
    NoWell,
    SingularityOrder,
    TunnelingError,
)
from .potential import (
    CONSTANTS,
    EXAMPLE_POTENTIAL,
    EXAMPLE_SYSTEM,
    BarrierPotential,
    Family,
    PhysicalConstants,
    SystemConfig,
    Tolerances,
)
from .resonance import (
    ActionResult,
    ResonanceResult,
    action_at,
    field_step_diagnostic,
    find_commensurate_fields,
    find_resonance_field,
    peak_width_estimate,
)
from .trajectory import TrajectoryRecord, action_direct, integrate_cycle, integrate_full, psi_envelope
from .well import EffectiveWell, find_turning_point, v_of_eta

__version__ = "0.1.0"
