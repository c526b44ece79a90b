"""Exception types raised by the solver.

Each class carries the CLI exit code it maps to, so the command layer does
not need its own lookup table.
"""


class TunnelingError(Exception):
    exit_code = 5


class ConfigError(TunnelingError, ValueError):
    """Malformed or invalid configuration."""

    exit_code = 2


class NoWell(TunnelingError):
    """The effective transverse potential does not form a single well below E."""

    exit_code = 3


class NoBracket(TunnelingError):
    """A scanned function never changed sign on the requested range.

    ``samples`` holds the (argument, value) pairs that were evaluated, for
    diagnosis.
    """

    exit_code = 4

    def __init__(self, message, samples=None):
        super().__init__(message)
        self.samples = list(samples or [])


class SingularityOrder(TunnelingError):
    """A turning point where E - v vanishes faster than linearly."""


class EventMiss(TunnelingError):
    """The half-period turning event was not detected."""


class EnergyDrift(TunnelingError):
    """Transverse energy not conserved along the integrated path."""


class BeyondOneInstanton(TunnelingError):
    """Field above the resonance; the one-trajectory result does not apply."""

    exit_code = 6


class QuadratureFailure(TunnelingError):
    """Adaptive quadrature did not reach the requested relative tolerance."""
