import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from magtunnel.cycle import (
    compute_cycle,
    compute_delta_A,
    compute_delta_tau,
    compute_delta_x,
    cycle_from_gap,
    velocity_heuristic_ratio,
)
from magtunnel.errors import SingularityOrder
from magtunnel.potential import inertial_mass
from magtunnel.well import find_turning_point

import oracles


def toy(c=1.0, width=1.0, mass=1.0, omega=1.0, eta0=0.0, **kw):
    return cycle_from_gap(
        lambda e: c * e * (width - e), lambda e: c * (width - 2 * e), width, mass, omega, eta0, **kw
    )


@given(st.floats(0.1, 10.0), st.floats(0.1, 10.0), st.floats(0.1, 10.0))
def test_toy_well_closed_forms(c, width, mass):
    r = toy(c, width, mass, rel_tol=1e-12)
    root2m = math.sqrt(2 * mass)
    assert r.delta_tau == pytest.approx(root2m * math.pi / math.sqrt(c), rel=1e-9)
    assert r.delta_A == pytest.approx(4 * root2m * math.sqrt(c) * math.pi * width**2 / 8, rel=1e-9)
    assert r.delta_x == pytest.approx(root2m * (width / 2) * math.pi / math.sqrt(c), rel=1e-9)


def test_mass_times_four_doubles_everything():
    a, b = toy(mass=1.0, eta0=3.0), toy(mass=4.0, eta0=3.0)
    for f in ("delta_tau", "delta_x", "delta_A"):
        assert getattr(b, f) == pytest.approx(2 * getattr(a, f), rel=1e-12)


def test_far_guiding_centre_limit():
    omega, eta0 = 0.7, 1e4
    r = toy(omega=omega, eta0=eta0)
    assert r.delta_x == pytest.approx(omega * eta0 * r.delta_tau, rel=1e-2)


def test_narrow_well_has_vanishing_action():
    widths = [1e-1, 1e-2, 1e-3]
    areas = [toy(width=w).delta_A for w in widths]
    assert areas[0] > areas[1] > areas[2]
    assert areas[2] < 1e-5


def test_double_zero_at_turning_point_is_rejected():
    with pytest.raises(SingularityOrder):
        cycle_from_gap(lambda e: e * (1 - e) ** 2, lambda e: (1 - e) ** 2 - 2 * e * (1 - e), 1.0, 1.0, 1.0, 0.0)


def test_bad_split_rejected():
    with pytest.raises(ValueError):
        toy(split=1.0)


@pytest.mark.parametrize(
    "name, args",
    [
        ("example 10 T", (1.0, 50.0, 0.215, 0.01, 1.0, 10.0)),
        ("example 8 T", (1.0, 50.0, 0.215, 0.01, 1.0, 8.0)),
        ("demo 2.5 T", (0.03, 50.0, 0.215, 0.01, 0.067, 2.5)),
    ],
)
def test_against_tanh_sinh_oracle(name, args):
    from magtunnel.potential import BarrierPotential, SystemConfig

    u0, a, lam, depth, mass, H = args
    p = BarrierPotential.double_harmonic(u0, a, lam)
    cfg = SystemConfig(energy_depth=depth, barrier_length_R=1000.0, field_H=H, mass=mass)
    r = compute_cycle(p, cfg)
    d_eta, tau, dx, dA = oracles.cycle_triple(*args)
    assert r.delta_eta == pytest.approx(d_eta, rel=1e-9)
    assert r.delta_tau == pytest.approx(tau, rel=1e-6)
    assert r.delta_x == pytest.approx(dx, rel=1e-6)
    assert r.delta_A == pytest.approx(dA, rel=1e-6)


def test_frozen_example_values(example):
    # values computed by the tanh-sinh oracle at 40 digits; see tests/oracles.py
    r = compute_cycle(*example)
    assert r.delta_tau == pytest.approx(304.17140301253465, rel=1e-8)
    assert r.delta_x == pytest.approx(125.62995451050462, rel=1e-8)
    assert r.delta_A == pytest.approx(123.06657700626221, rel=1e-8)


def test_result_positive_and_within_tolerance(example):
    p, cfg = example
    r = compute_cycle(p, cfg)
    assert min(r.delta_tau, r.delta_x, r.delta_A) > 0
    assert max(r.err_estimates) <= cfg.tolerances.quadrature_rel_tol


def test_single_integrals_match_triple(example):
    p, cfg = example
    well = find_turning_point(p, cfg)
    r = compute_cycle(p, cfg, well)
    assert compute_delta_tau(well, p, cfg) == r.delta_tau
    assert compute_delta_x(well, p, cfg) == r.delta_x
    assert compute_delta_A(well, p, cfg) == r.delta_A


@pytest.mark.parametrize("split", [0.2, 0.35, 0.65, 0.8])
def test_split_point_independence(example, split):
    p, cfg = example
    ref = compute_cycle(p, cfg)
    r = compute_cycle(p, cfg, split=split)
    for f in ("delta_tau", "delta_x", "delta_A"):
        assert getattr(r, f) == pytest.approx(getattr(ref, f), rel=1e-9)


def test_advance_exceeds_velocity_heuristic(example):
    p, cfg = example
    r = compute_cycle(p, cfg)
    ratio = velocity_heuristic_ratio(r, cfg, inertial_mass(cfg))
    assert ratio > 1.0
    well = find_turning_point(p, cfg)
    assert r.delta_x > well.omega_c * well.eta0 * r.delta_tau


def test_period_grows_as_field_weakens(example):
    p, cfg = example
    taus = [compute_cycle(p, cfg.with_field(H)).delta_tau for H in np.geomspace(0.1, 30, 12)]
    assert np.all(np.diff(taus) < 0)
