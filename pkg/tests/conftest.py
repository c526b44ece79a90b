import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from magtunnel.potential import EXAMPLE_POTENTIAL, EXAMPLE_SYSTEM, RESONANT_POTENTIAL, RESONANT_SYSTEM

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def example():
    return EXAMPLE_POTENTIAL, EXAMPLE_SYSTEM


@pytest.fixture(scope="session")
def demo():
    return RESONANT_POTENTIAL, RESONANT_SYSTEM


@pytest.fixture(scope="session")
def demo_resonance(demo):
    from magtunnel.resonance import find_resonance_field

    return find_resonance_field(*demo)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import ACCEPTANCE_LINES
    except ImportError:
        return
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
