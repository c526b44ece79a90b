import math

from dataclasses import replace

import numpy as np
import pytest
from scipy.integrate import simpson

import magtunnel.trajectory as traj
from magtunnel.cycle import compute_cycle
from magtunnel.errors import BeyondOneInstanton, EnergyDrift, EventMiss
from magtunnel.potential import inertial_mass, wkb_rate
from magtunnel.resonance import action_at, find_commensurate_fields
from magtunnel.trajectory import (
    action_direct,
    action_forms,
    integrate_cycle,
    integrate_full,
    integrate_unreduced,
    psi_envelope,
)
from magtunnel.well import find_turning_point, transverse_gap


@pytest.fixture(scope="module")
def three(example):
    return integrate_full(*example, N=3)


@pytest.fixture(scope="module")
def ten(example):
    return integrate_full(*example, N=10)


def test_cycle_matches_quadrature(example):
    p, cfg = example
    rec = integrate_cycle(p, cfg)
    c = compute_cycle(p, cfg)
    assert rec.measured_delta_tau == pytest.approx(c.delta_tau, rel=1e-6)
    assert rec.measured_delta_x == pytest.approx(c.delta_x, rel=1e-6)
    assert 4.0 * simpson(transverse_gap(p, cfg, rec.eta), x=rec.tau) == pytest.approx(c.delta_A, rel=1e-6)


def test_half_period_reaches_turning_point(example):
    rec = integrate_cycle(*example)
    mid = (len(rec.tau) - 1) // 2
    assert rec.eta[mid] == pytest.approx(rec.well.delta_eta, abs=1e-8)
    assert np.max(rec.eta) == rec.eta[mid]


def test_terminal_velocity(example, three):
    _, cfg = example
    v = math.sqrt(2 * cfg.energy_depth / inertial_mass(cfg))
    assert three.x_dot[0] == pytest.approx(-v, rel=1e-9)
    assert three.x_dot[-1] == pytest.approx(-v, rel=1e-9)


def test_three_cycles_staircase(example, three):
    c = compute_cycle(*example)
    assert three.distance == pytest.approx(3 * c.delta_x, rel=1e-6)
    assert three.tau0 == pytest.approx(3 * three.measured_delta_tau, rel=1e-14)
    assert np.all(np.diff(three.x) < 0)
    # three arches: eta returns to zero only at the joints
    joints = three.joints()
    assert np.all(np.abs(three.eta[joints]) <= 1e-8)
    interior = np.setdiff1d(np.arange(len(three.eta)), joints)
    assert np.all(three.eta[interior] > 0)


def test_direct_action_matches_closed_form(example, three):
    p, cfg = example
    c = compute_cycle(p, cfg)
    closed = action_at(cfg, c, 3)
    assert three.action_direct == pytest.approx(closed.A, rel=1e-6)


def test_action_forms_agree(example, three):
    forms = action_forms(*example, three)
    ref = forms["lagrangian"]
    for value in forms.values():
        assert value == pytest.approx(ref, rel=1e-9)


def test_straight_path_reduces_to_wkb(example):
    p, cfg = example
    rec = integrate_cycle(p, cfg)
    v = math.sqrt(2 * cfg.energy_depth / rec.well.mass)
    flat = replace(rec, eta=np.zeros_like(rec.eta), eta_dot=np.zeros_like(rec.eta), x=-v * rec.tau)
    assert action_direct(p, cfg, flat) == pytest.approx(wkb_rate(cfg) * flat.distance, rel=1e-12)


def test_energy_conserved_over_ten_cycles(ten):
    assert ten.max_energy_drift <= 1e-9


def test_joint_conditions(ten):
    j = ten.joints()
    assert np.all(np.abs(ten.eta[j]) <= 1e-8)
    assert np.all(np.abs(ten.eta_dot[j]) <= 1e-8)
    assert np.allclose(np.diff(ten.tau[j]), ten.measured_delta_tau, rtol=1e-12)


def test_unreduced_system(example):
    p, cfg = example
    well = find_turning_point(p, cfg)
    c = compute_cycle(p, cfg, well)
    s = np.linspace(0, 0.45, 10) * c.delta_tau
    half = 0.5 * c.delta_tau
    t_eval = np.sort(np.concatenate([half - s, half + s[1:], [c.delta_tau]]))
    rows = integrate_unreduced(p, cfg, well, c.delta_tau, t_eval)
    tau, x, x_dot, eta, eta_dot = rows.T
    # the first integral holds along the unreduced solution
    assert np.allclose(x_dot, -well.omega_c * (eta + well.eta0), rtol=1e-9, atol=0)
    # time-reversal symmetry of the arch about the half period
    eta_at = dict(zip(np.round(tau, 9), eta))
    for si in s[1:]:
        lo, hi = eta_at[round(half - si, 9)], eta_at[round(half + si, 9)]
        assert lo == pytest.approx(hi, rel=1e-8, abs=1e-8)
    assert abs(eta[-1]) <= 1e-6 and abs(eta_dot[-1]) <= 1e-6
    assert -x[-1] == pytest.approx(c.delta_x, rel=1e-7)


def test_event_miss(monkeypatch, example):
    monkeypatch.setattr(traj, "PERIOD_CAP", 1e-3)
    with pytest.raises(EventMiss):
        integrate_cycle(*example)


def test_energy_drift_guard(monkeypatch, example):
    monkeypatch.setattr(traj, "DRIFT_FACTOR", 1e-9)
    with pytest.raises(EnergyDrift):
        integrate_cycle(*example)


def test_bad_arguments(example):
    with pytest.raises(ValueError):
        integrate_full(*example, N=0)
    with pytest.raises(ValueError):
        integrate_full(*example, samples_per_half=999)


def test_psi_nodes_vanish_at_resonance(demo, demo_resonance):
    env = psi_envelope(*demo, demo_resonance, 5)
    assert env.table[0, 0] == 0 and env.table[0, 1] == 0
    assert np.all(np.abs(env.nodes[:, 2]) <= 1e-6)


def test_psi_nodes_below_resonance(demo, demo_resonance):
    p, cfg = demo
    (_, h3), = find_commensurate_fields(p, cfg, [3])[0]
    assert h3 < demo_resonance.H_R
    env = psi_envelope(p, cfg, h3, 5, H_R=demo_resonance.H_R)
    c = compute_cycle(p, cfg.with_field(h3))
    expected = [-action_at(cfg, c, N).A for N in range(6)]
    assert np.allclose(env.nodes[:, 2], expected, rtol=0, atol=1e-6)
    assert np.all(env.nodes[1:, 2] < 0)
    assert env.nodes[0, 2] == 0.0


def test_psi_refuses_above_resonance(demo, demo_resonance):
    with pytest.raises(BeyondOneInstanton):
        psi_envelope(*demo, demo_resonance.H_R + 0.5, 2, H_R=demo_resonance.H_R)


def test_psi_refuses_negative_cycle_action(example):
    with pytest.raises(BeyondOneInstanton):
        psi_envelope(*example, 10.0, 2)
