"""Euclidean action at commensurate lengths and the resonance field.

The tunneling exponent over R = N * Delta x is

    A = A_WKB - N * Delta A = (k0 - Delta A / Delta x) * R,

with k0 = 2 sqrt(2 m |E|) / hbar.  The resonance field H_R is the root of
f(H) = k0 - Delta A(H) / Delta x(H).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import optimize

from .cycle import CycleResult, compute_cycle
from .errors import NoBracket, NoWell
from .potential import BarrierPotential, SystemConfig, wkb_rate

logger = logging.getLogger(__name__)

DEFAULT_FIELD_RANGE = (1.0, 30.0)
DEFAULT_N_RANGE = range(1, 9)
SCAN_POINTS = 64


@dataclass(frozen=True)
class ActionResult:
    A: float
    A_wkb: float
    N: int
    R_used: float
    delta_A: float
    delta_x: float

    @property
    def per_length_form(self) -> float:
        """(k0 - Delta A / Delta x) * R, equal to A up to rounding."""
        if self.N == 0:
            return 0.0
        k0 = self.A_wkb / self.R_used
        return (k0 - self.delta_A / self.delta_x) * self.R_used

    @property
    def beyond_one_instanton(self) -> bool:
        return self.A < 0


def action_at(cfg: SystemConfig, cycle: CycleResult, N: int) -> ActionResult:
    """Exponent over N whole cycles, R = N * Delta x."""
    if N < 0:
        raise ValueError("N must be non-negative")
    R = N * cycle.delta_x
    a_wkb = wkb_rate(cfg) * R
    return ActionResult(a_wkb - N * cycle.delta_A, a_wkb, N, R, cycle.delta_A, cycle.delta_x)


def resonance_function(cycle: CycleResult, cfg: SystemConfig) -> float:
    """f = k0 - Delta A / Delta x in 1/A; zero at H_R."""
    return wkb_rate(cfg) - cycle.delta_A / cycle.delta_x


@dataclass
class FieldScan:
    """Cycle results on a log-spaced field grid; ``None`` where no well forms."""

    fields: np.ndarray
    cycles: list

    @property
    def skipped(self):
        return [float(h) for h, c in zip(self.fields, self.cycles) if c is None]

    def valid_pairs(self):
        return [(float(h), c) for h, c in zip(self.fields, self.cycles) if c is not None]


def scan_fields(p: BarrierPotential, cfg: SystemConfig, H_lo: float, H_hi: float, n: int = SCAN_POINTS) -> FieldScan:
    if not 0 < H_lo < H_hi:
        raise ValueError(f"need 0 < H_lo < H_hi, got [{H_lo}, {H_hi}]")
    fields = np.geomspace(H_lo, H_hi, n)
    cycles = []
    for H in fields:
        try:
            cycles.append(compute_cycle(p, cfg.with_field(float(H))))
        except NoWell as exc:
            logger.info("no well at H = %.6g T: %s", H, exc)
            cycles.append(None)
    return FieldScan(fields, cycles)


def _first_bracket(samples):
    for (h0, y0), (h1, y1) in zip(samples, samples[1:]):
        if y0 == 0:
            return h0, h0
        if y0 * y1 < 0:
            return h0, h1
    if samples and samples[-1][1] == 0:
        return samples[-1][0], samples[-1][0]
    return None


def _refine(fun, bracket, tol):
    lo, hi = bracket
    if lo == hi:
        return lo
    return optimize.bisect(fun, lo, hi, xtol=tol, maxiter=500)


@dataclass(frozen=True)
class ResonanceResult:
    H_R: float
    peak_width: float
    h_list: tuple  # of (N, h_N)
    action_curve: np.ndarray  # columns H, A(H) at R, Delta x, Delta A; H <= H_R only
    residual: float
    cycle: CycleResult
    skipped_fields: tuple = ()
    f_samples: tuple = field(default=(), repr=False)


def find_resonance_field(
    p: BarrierPotential,
    cfg: SystemConfig,
    H_lo: float = DEFAULT_FIELD_RANGE[0],
    H_hi: float = DEFAULT_FIELD_RANGE[1],
    N_range=DEFAULT_N_RANGE,
    n_scan: int = SCAN_POINTS,
) -> ResonanceResult:
    """Root of k0 - Delta A / Delta x on [H_lo, H_hi].

    Bracketed on ``n_scan`` log-spaced fields, refined by bisection to
    ``root_abs_tol`` tesla.  Fields without a well are skipped.  Raises
    NoBracket (with the sampled f-curve attached) if f keeps one sign.
    """
    scan = scan_fields(p, cfg, H_lo, H_hi, n_scan)
    samples = [(h, resonance_function(c, cfg)) for h, c in scan.valid_pairs()]
    bracket = _first_bracket(samples)
    if bracket is None:
        sign = "positive" if samples and samples[0][1] > 0 else "negative"
        raise NoBracket(
            f"k0 - Delta A/Delta x stays {sign} on [{H_lo:g}, {H_hi:g}] T; no resonance field in range",
            samples,
        )

    def f(H):
        return resonance_function(compute_cycle(p, cfg.with_field(H)), cfg)

    H_R = _refine(f, bracket, cfg.tolerances.root_abs_tol)
    cycle = compute_cycle(p, cfg.with_field(H_R))
    residual = resonance_function(cycle, cfg)

    R = cfg.barrier_length_R
    rows = [
        (h, fh * R, c.delta_x, c.delta_A)
        for (h, c), (_, fh) in zip(scan.valid_pairs(), samples)
        if h < H_R
    ]
    rows.append((H_R, residual * R, cycle.delta_x, cycle.delta_A))
    h_list, _ = commensurate_from_scan(p, cfg, scan, N_range)

    res = ResonanceResult(
        H_R=H_R,
        peak_width=math.nan,
        h_list=tuple(h_list),
        action_curve=np.array(rows),
        residual=residual,
        cycle=cycle,
        skipped_fields=tuple(scan.skipped),
        f_samples=tuple(samples),
    )
    return replace(res, peak_width=peak_width_estimate(res, cfg))


def peak_width_estimate(res: ResonanceResult, cfg: SystemConfig) -> float:
    """H_R / A_WKB(R), in tesla."""
    return res.H_R / (wkb_rate(cfg) * cfg.barrier_length_R)


def commensurate_from_scan(p, cfg, scan: FieldScan, N_range):
    R = cfg.barrier_length_R
    tol = cfg.tolerances.root_abs_tol
    found, failures = [], {}
    pairs = scan.valid_pairs()
    for N in N_range:
        if N < 1:
            raise ValueError("N must be >= 1")
        samples = [(h, N * c.delta_x - R) for h, c in pairs]
        bracket = _first_bracket(samples)
        if bracket is None:
            failures[N] = NoBracket(f"R = {R:g} A is not {N} * Delta x(H) anywhere in the scanned range", samples)
            continue

        def g(H, N=N):
            return N * compute_cycle(p, cfg.with_field(H)).delta_x - R

        found.append((N, _refine(g, bracket, tol)))
    return found, failures


def find_commensurate_fields(
    p: BarrierPotential,
    cfg: SystemConfig,
    N_range=DEFAULT_N_RANGE,
    H_lo: float = DEFAULT_FIELD_RANGE[0],
    H_hi: float = DEFAULT_FIELD_RANGE[1],
    n_scan: int = SCAN_POINTS,
):
    """Fields h_N with R = N * Delta x(h_N), for each N in ``N_range``.

    Returns ``(table, failures)``: ``table`` lists (N, h_N) for the N that
    were solvable, ``failures`` maps the remaining N to their NoBracket.
    """
    N_range = list(N_range)
    if not N_range:
        raise ValueError("N_range is empty")
    scan = scan_fields(p, cfg, H_lo, H_hi, n_scan)
    return commensurate_from_scan(p, cfg, scan, N_range)


def field_step_diagnostic(
    p: BarrierPotential,
    cfg: SystemConfig,
    N: int,
    H_lo: float = DEFAULT_FIELD_RANGE[0],
    H_hi: float = DEFAULT_FIELD_RANGE[1],
    n_scan: int = SCAN_POINTS,
) -> float:
    """[A(h_{N-1}) - A(h_N)] - Delta A(h_N) at fixed R.

    Vanishes when Delta A and Delta x do not depend on the field.
    """
    if N < 2:
        raise ValueError("need N >= 2")
    table, failures = find_commensurate_fields(p, cfg, [N - 1, N], H_lo, H_hi, n_scan)
    for k in (N - 1, N):
        if k in failures:
            raise failures[k]
    h = dict(table)
    R = cfg.barrier_length_R
    k0 = wkb_rate(cfg)
    dA_prev = compute_cycle(p, cfg.with_field(h[N - 1])).delta_A
    dA_here = compute_cycle(p, cfg.with_field(h[N])).delta_A
    A_prev = k0 * R - (N - 1) * dA_prev
    A_here = k0 * R - N * dA_here
    return (A_prev - A_here) - dA_here
