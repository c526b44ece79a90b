"""Exit criteria for the worked double-harmonic example.

Each check returns a :class:`Criterion`; ``run_all`` evaluates them in order.
Used by ``tests/test_acceptance.py`` and by the ``validate-example`` command.
Tolerances are fixed here and not tuned per run.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import constants as sc
from scipy import integrate

from .cycle import compute_cycle, cycle_from_gap
from .dissipation import de_broglie_length, inhomogeneity_criterion, linewidth_criterion
from .errors import BeyondOneInstanton, NoBracket, NoWell, TunnelingError
from .potential import (
    EXAMPLE_POTENTIAL,
    EXAMPLE_SYSTEM,
    RESONANT_POTENTIAL,
    RESONANT_SYSTEM,
    BarrierPotential,
    wkb_rate,
)
from .resonance import action_at, find_commensurate_fields, find_resonance_field
from .trajectory import integrate_full, integrate_unreduced, psi_envelope
from .well import find_turning_point, transverse_gap

ORACLE_RTOL = 1e-6
TOY_RTOL = 1e-9
DRIFT_TOL = 1e-9
JOINT_TOL = 1e-8
TERMINAL_RTOL = 1e-9
RESIDUAL_TOL = 1e-8
NODE_TOL = 1e-6
# 2 sqrt(2 m_e |E|) / hbar at |E| = 10 meV from CODATA values, independent of
# the package constants.  The hand-rounded 0.102468 is off in the sixth digit.
K0_REFERENCE = 2.0 * math.sqrt(2.0 * sc.m_e * 0.01 * sc.e) / sc.hbar * 1e-10
RESONANCE_FIELD_RANGE = (1.0, 30.0)


@dataclass(frozen=True)
class Criterion:
    id: str
    title: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.id} {self.title}: {self.detail}"


@functools.lru_cache(maxsize=None)
def _resonance(p: BarrierPotential, cfg):
    try:
        return find_resonance_field(p, cfg, *RESONANCE_FIELD_RANGE)
    except NoBracket as exc:
        return exc


def _no_resonance(cid, title, exc):
    f_lo, f_hi = exc.samples[0][1], exc.samples[-1][1]
    return Criterion(
        cid, title, False,
        f"no resonance field: k0 - dA/dx runs {f_lo:.4g} .. {f_hi:.4g} 1/A on "
        f"[{RESONANCE_FIELD_RANGE[0]:g}, {RESONANCE_FIELD_RANGE[1]:g}] T without a sign change",
    )


def check_example_reproduction(p=EXAMPLE_POTENTIAL, cfg=EXAMPLE_SYSTEM):
    title = "example: H_R in [8,12] T; dx in [105,135] A, d_eta in [95,125] A, dA in [10,14] at H_R"
    res = _resonance(p, cfg)
    if isinstance(res, NoBracket):
        c = compute_cycle(p, cfg.with_field(10.0))
        c_detail = f"; at 10 T: dx={c.delta_x:.4g} A, d_eta={c.delta_eta:.4g} A, dA={c.delta_A:.4g}"
        crit = _no_resonance("1", title, res)
        return Criterion(crit.id, title, False, crit.detail + c_detail)
    c = res.cycle
    ok = (
        8 <= res.H_R <= 12
        and 105 <= c.delta_x <= 135
        and 95 <= c.delta_eta <= 125
        and 10 <= c.delta_A <= 14
    )
    return Criterion(
        "1", title, ok,
        f"H_R={res.H_R:.6g} T, dx={c.delta_x:.6g} A, d_eta={c.delta_eta:.6g} A, dA={c.delta_A:.6g}",
    )


def check_resonance_consistency(p=EXAMPLE_POTENTIAL, cfg=EXAMPLE_SYSTEM):
    title = "resonance: |dA/dx - k0| <= 1e-8 1/A at H_R; k0 matches CODATA; 0.100 within 5% of k0"
    k0 = wkb_rate(cfg)
    constants_ok = abs(k0 - K0_REFERENCE) <= 5e-7 and abs(0.100 - k0) <= 0.05 * k0
    res = _resonance(p, cfg)
    if isinstance(res, NoBracket):
        crit = _no_resonance("2", title, res)
        return Criterion("2", title, False, f"k0={k0:.7g} 1/A; " + crit.detail)
    residual = abs(res.cycle.delta_A / res.cycle.delta_x - k0)
    return Criterion("2", title, constants_ok and residual <= RESIDUAL_TOL, f"k0={k0:.7g} 1/A, residual={residual:.3g}")


def _rel(a, b):
    return abs(a - b) / abs(b)


def oracle_triangle(p, cfg, H, N=3):
    """Relative differences between quadrature, ODE and closed-form action at field H."""
    run = cfg.with_field(H)
    well = find_turning_point(p, run)
    c = compute_cycle(p, run, well)
    rec = integrate_full(p, run, well, N)
    one = integrate_full(p, run, well, 1)
    # per-cycle action from the trajectory: 4 * integral of (E - v) over one period
    dA_ode = 4.0 * integrate.simpson(transverse_gap(p, run, one.eta), x=one.tau)
    closed = action_at(run, c, N)
    return {
        "delta_tau": _rel(rec.measured_delta_tau, c.delta_tau),
        "delta_x": _rel(rec.measured_delta_x, c.delta_x),
        "delta_A": _rel(dA_ode, c.delta_A),
        # A can pass through zero, so its error is scaled by A_WKB
        "A": abs(rec.action_direct - closed.A) / closed.A_wkb,
    }


def check_oracle_triangle(H_label, p=EXAMPLE_POTENTIAL, cfg=EXAMPLE_SYSTEM):
    title = f"oracle triangle at {H_label}: quadrature vs ODE vs closed-form action, rel <= 1e-6"
    cid = f"3@{H_label}"
    if H_label == "H_R":
        res = _resonance(p, cfg)
        if isinstance(res, NoBracket):
            return _no_resonance(cid, title, res)
        H = res.H_R
    else:
        H = float(H_label.rstrip("T"))
    errs = oracle_triangle(p, cfg, H)
    ok = all(v <= ORACLE_RTOL for v in errs.values())
    return Criterion(cid, title, ok, ", ".join(f"{k}={v:.2g}" for k, v in errs.items()))


def toy_cycle(c=1.0, width=1.0, mass=1.0, rel_tol=1e-12):
    return cycle_from_gap(
        lambda x: c * x * (width - x), lambda x: c * (width - 2 * x), width, mass, 1.0, 0.0, rel_tol
    )


def check_toy_well():
    title = "toy well E-v = c*eta*(w-eta): d_tau and dA match closed forms, rel <= 1e-9"
    c, width, m = 1.0, 1.0, 1.0
    r = toy_cycle(c, width, m)
    tau_exact = math.sqrt(2 * m) * math.pi / math.sqrt(c)
    area_exact = 4 * math.sqrt(2 * m) * math.sqrt(c) * math.pi * width**2 / 8
    e1, e2 = _rel(r.delta_tau, tau_exact), _rel(r.delta_A, area_exact)
    return Criterion("4", title, e1 <= TOY_RTOL and e2 <= TOY_RTOL, f"d_tau err={e1:.2g}, dA err={e2:.2g}")


def check_conservation(p=EXAMPLE_POTENTIAL, cfg=EXAMPLE_SYSTEM, N=10):
    title = "conservation: drift <= 1e-9 over 10 cycles; joints <= 1e-8; terminal x' rel <= 1e-9"
    well = find_turning_point(p, cfg)
    rec = integrate_full(p, cfg, well, N)
    c = compute_cycle(p, cfg, well)
    joints = np.arange(N + 1) * c.delta_tau
    rows = integrate_unreduced(p, cfg, well, joints[-1], joints)
    x_dot, eta, eta_dot = rows[:, 2], rows[:, 3], rows[:, 4]
    target = -math.sqrt(2 * cfg.energy_depth / well.mass)
    joint_err = max(np.max(np.abs(eta)), np.max(np.abs(eta_dot)))
    record_joint = max(np.max(np.abs(rec.eta[rec.joints()])), np.max(np.abs(rec.eta_dot[rec.joints()])))
    terminal = max(_rel(x_dot[0], target), _rel(x_dot[-1], target), _rel(rec.x_dot[-1], target))
    ok = rec.max_energy_drift <= DRIFT_TOL and max(joint_err, record_joint) <= JOINT_TOL and terminal <= TERMINAL_RTOL
    return Criterion(
        "5", title, ok,
        f"drift={rec.max_energy_drift:.2g}, joints={max(joint_err, record_joint):.2g}, terminal={terminal:.2g}",
    )


def check_weak_field_limit(p=EXAMPLE_POTENTIAL, cfg=EXAMPLE_SYSTEM):
    title = "weak field: A/A_WKB >= 0.99 at 0.01 T; dx(0.01 T) > dx(0.1 T)"
    lo = compute_cycle(p, cfg.with_field(0.01))
    hi = compute_cycle(p, cfg.with_field(0.1))
    a = action_at(cfg, lo, 1)
    ratio = a.A / a.A_wkb
    ok = ratio >= 0.99 and lo.delta_x > hi.delta_x
    return Criterion("6", title, ok, f"A/A_WKB={ratio:.4g}, dx(0.01)={lo.delta_x:.5g} A, dx(0.1)={hi.delta_x:.5g} A")


def check_admissibility(cfg=EXAMPLE_SYSTEM):
    title = "admissibility: pure harmonic, quadratic -> NoWell; quadratic-quartic, double harmonic -> well"
    outcome = {}
    for p in (
        BarrierPotential.pure_harmonic(1.0, 50.0),
        BarrierPotential.quadratic(1.0, 50.0),
        BarrierPotential.quadratic_quartic(1.0, 50.0),
        EXAMPLE_POTENTIAL,
    ):
        try:
            outcome[p.family.value] = find_turning_point(p, cfg).valid
        except NoWell:
            outcome[p.family.value] = False
    ok = outcome == {
        "pure_harmonic": False,
        "quadratic": False,
        "quadratic_quartic": True,
        "double_harmonic": True,
    }
    return Criterion("7", title, ok, ", ".join(f"{k}={'well' if v else 'NoWell'}" for k, v in outcome.items()))


def resonance_periodicity(p, cfg, n_max=5):
    """Node errors at H_R and at h_3 < H_R.  Raises NoBracket without a resonance."""
    res = _resonance(p, cfg)
    if isinstance(res, NoBracket):
        raise res
    at_res = psi_envelope(p, cfg, res, n_max)
    err_res = float(np.max(np.abs(at_res.nodes[1:, 2])))
    table, failures = find_commensurate_fields(p, cfg, [3], *RESONANCE_FIELD_RANGE)
    if 3 in failures:
        raise failures[3]
    h3 = dict(table)[3]
    if not h3 < res.H_R:
        raise BeyondOneInstanton(f"h_3 = {h3:g} T is not below H_R = {res.H_R:g} T")
    below = psi_envelope(p, cfg, h3, 3, H_R=res.H_R)
    run = cfg.with_field(h3)
    c = compute_cycle(p, run)
    expected = np.array([-action_at(run, c, n).A for n in range(4)])
    err_h3 = float(np.max(np.abs(below.nodes[:, 2] - expected)))
    return res.H_R, h3, err_res, err_h3


def check_periodicity(p=EXAMPLE_POTENTIAL, cfg=EXAMPLE_SYSTEM, label=""):
    title = "psi nodes: zero at H_R for N=1..5; equal -A(N dx) at h_3 < H_R; tol 1e-6"
    cid = "8" + label
    try:
        H_R, h3, e_res, e_h3 = resonance_periodicity(p, cfg)
    except NoBracket as exc:
        if exc.samples and "resonance" in str(exc):
            return _no_resonance(cid, title, exc)
        return Criterion(cid, title, False, str(exc))
    except TunnelingError as exc:
        return Criterion(cid, title, False, str(exc))
    ok = e_res <= NODE_TOL and e_h3 <= NODE_TOL
    return Criterion(cid, title, ok, f"H_R={H_R:.6g} T, h_3={h3:.6g} T, node err {e_res:.2g} / {e_h3:.2g}")


def check_dissipation(cfg=EXAMPLE_SYSTEM):
    title = "dissipation: lambda_dB ~ 27.6 A; R_max(0.1) within 2x of 1000 A; 4|E| = 0.04 eV"
    lam = de_broglie_length(cfg)
    r_max = linewidth_criterion(0.1, lam, cfg.barrier_length_R).R_max
    threshold_ok = inhomogeneity_criterion(0.0399999, cfg.energy) and not inhomogeneity_criterion(0.04, cfg.energy)
    ok = abs(lam - 27.6) <= 0.05 and 500.0 <= r_max <= 2000.0 and threshold_ok
    return Criterion("9", title, ok, f"lambda_dB={lam:.4g} A, R_max={r_max:.5g} A, threshold_ok={threshold_ok}")


CHECKS = (
    ("1", check_example_reproduction),
    ("2", check_resonance_consistency),
    ("3@8T", functools.partial(check_oracle_triangle, "8T")),
    ("3@10T", functools.partial(check_oracle_triangle, "10T")),
    ("3@H_R", functools.partial(check_oracle_triangle, "H_R")),
    ("4", check_toy_well),
    ("5", check_conservation),
    ("6", check_weak_field_limit),
    ("7", check_admissibility),
    ("8", check_periodicity),
    ("8[resonant-demo]", functools.partial(check_periodicity, RESONANT_POTENTIAL, RESONANT_SYSTEM, "[resonant-demo]")),
    ("9", check_dissipation),
)


def run_all():
    return [check() for _, check in CHECKS]
