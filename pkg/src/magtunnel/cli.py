"""Command-line entry point.

    magtunnel --config example.ini --command resonance --out runs/

Exit codes: 0 ok, 1 validate-example found a failing criterion, 2 config
or argument error, 3 NoWell, 4 NoBracket, 5 numerical failure, 6 field
beyond the one-trajectory regime.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import acceptance
from .cycle import compute_cycle, velocity_heuristic_ratio
from .dissipation import dissipation_report
from .errors import ConfigError, NoBracket, NoWell, TunnelingError
from .io import PlotTable, RunRecord, load_config
from .potential import EXAMPLE_POTENTIAL, EXAMPLE_SYSTEM, wkb_rate
from .resonance import (
    DEFAULT_FIELD_RANGE,
    SCAN_POINTS,
    action_at,
    field_step_diagnostic,
    find_commensurate_fields,
    find_resonance_field,
)
from .trajectory import action_forms, integrate_full, psi_envelope
from .well import find_turning_point, sample_effective_potential, v_of_eta

logger = logging.getLogger("magtunnel")

COMMANDS = (
    "well", "cycle", "action", "resonance", "harmonics", "trajectory",
    "psi", "dissipation", "validate-example", "sweep",
)


def parse_grid(text: str, need_steps: bool = True):
    parts = text.split(":")
    try:
        if len(parts) == 3:
            lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
        elif len(parts) == 2 and not need_steps:
            lo, hi, steps = float(parts[0]), float(parts[1]), SCAN_POINTS
        else:
            raise ValueError
    except ValueError:
        raise ConfigError(f"--grid expects lo:hi:steps, got {text!r}") from None
    if steps < 1 or hi < lo or (steps > 1 and hi == lo) or lo < 0:
        raise ConfigError(f"--grid {text!r} describes an empty or invalid field grid")
    return lo, hi, steps


def _cycle_summary(cycle, cfg, well):
    return {
        "H_tesla": cycle.field_H,
        "delta_tau": cycle.delta_tau,
        "delta_x_angstrom": cycle.delta_x,
        "delta_A": cycle.delta_A,
        "delta_eta_angstrom": cycle.delta_eta,
        "quadrature_rel_err": list(cycle.err_estimates),
        "velocity_heuristic_ratio": velocity_heuristic_ratio(cycle, cfg, well.mass),
        "resonance_function_per_angstrom": wkb_rate(cfg) - cycle.delta_A / cycle.delta_x,
    }


def _well_summary(well, p, cfg):
    return {
        "eta0_angstrom": well.eta0,
        "E_eV": well.energy_E,
        "delta_eta_angstrom": well.delta_eta,
        "valid": well.valid,
        "v_at_zero_eV": v_of_eta(p, cfg, 0.0),
        "hbar_omega_c_eV": well.omega_c,
    }


def cmd_well(p, cfg, args, record):
    well = find_turning_point(p, cfg)
    record.add("well", _well_summary(well, p, cfg))
    return [PlotTable("fig2", ["eta [A]", "v [eV]"], sample_effective_potential(p, cfg, well))]


def cmd_cycle(p, cfg, args, record):
    well = find_turning_point(p, cfg)
    record.add("well", _well_summary(well, p, cfg))
    record.add("cycle", _cycle_summary(compute_cycle(p, cfg, well), cfg, well))
    return []


def cmd_action(p, cfg, args, record):
    well = find_turning_point(p, cfg)
    cycle = compute_cycle(p, cfg, well)
    record.add("cycle", _cycle_summary(cycle, cfg, well))
    ratio = cfg.barrier_length_R / cycle.delta_x
    lower, upper = max(1, math.floor(ratio)), max(1, math.ceil(ratio))
    record.add("R_over_delta_x", ratio)
    if args.N is not None:
        picks = [args.N]
    else:
        # A(R, H) exists only at R = N * delta x; report the bracketing N
        picks = sorted({lower, upper})
    actions = [action_at(cfg, cycle, n) for n in picks]
    record.add("actions", [
        {"N": a.N, "R_used_angstrom": a.R_used, "A": a.A, "A_wkb": a.A_wkb,
         "beyond_one_instanton": a.beyond_one_instanton}
        for a in actions
    ])
    n_max = max(picks + [upper])
    rows = [(a.R_used, a.A, a.A_wkb) for a in (action_at(cfg, cycle, n) for n in range(1, n_max + 1))]
    return [PlotTable("fig4a", ["R=N*dx [A]", "A [1]", "A_WKB [1]"], rows)]


def _grid_range(args):
    if args.grid:
        lo, hi, steps = parse_grid(args.grid, need_steps=False)
        return lo, hi, max(steps, 2)
    return DEFAULT_FIELD_RANGE[0], DEFAULT_FIELD_RANGE[1], SCAN_POINTS


def cmd_resonance(p, cfg, args, record):
    lo, hi, steps = _grid_range(args)
    try:
        res = find_resonance_field(p, cfg, lo, hi, n_scan=steps)
    except NoBracket as exc:
        record.add("f_curve", [{"H_tesla": h, "f_per_angstrom": f} for h, f in exc.samples])
        raise
    record.add("resonance", {
        "H_R_tesla": res.H_R,
        "peak_width_tesla": res.peak_width,
        "residual_per_angstrom": res.residual,
        "h_N": [{"N": n, "h_tesla": h} for n, h in res.h_list],
        "skipped_fields": list(res.skipped_fields),
        "above_H_R": "beyond one-instanton validity; no probabilities emitted",
    })
    record.add("cycle_at_resonance", {
        "delta_x_angstrom": res.cycle.delta_x,
        "delta_eta_angstrom": res.cycle.delta_eta,
        "delta_A": res.cycle.delta_A,
        "delta_tau": res.cycle.delta_tau,
    })
    return [PlotTable("fig5", ["H [T]", "A(R) [1]", "dx [A]", "dA [1]"], res.action_curve)]


def cmd_harmonics(p, cfg, args, record):
    lo, hi, steps = _grid_range(args)
    n_top = args.N or 8
    table, failures = find_commensurate_fields(p, cfg, range(1, n_top + 1), lo, hi, steps)
    record.add("h_N", [{"N": n, "h_tesla": h} for n, h in table])
    record.add("unsolved_N", {str(n): str(e) for n, e in failures.items()})
    found = dict(table)
    diagnostics = {}
    for n in range(2, n_top + 1):
        if n in found and n - 1 in found:
            delta = field_step_diagnostic(p, cfg, n, lo, hi, steps)
            dA = compute_cycle(p, cfg.with_field(found[n])).delta_A
            diagnostics[str(n)] = {"delta": delta, "delta_over_dA": delta / dA}
    record.add("field_step_diagnostic", diagnostics)
    return []


def cmd_trajectory(p, cfg, args, record):
    N = args.N or 3
    well = find_turning_point(p, cfg)
    rec = integrate_full(p, cfg, well, N)
    cycle = compute_cycle(p, cfg, well)
    closed = action_at(cfg, cycle, N)
    record.add("trajectory", {
        "N": N,
        "measured_delta_tau": rec.measured_delta_tau,
        "measured_delta_x_angstrom": rec.measured_delta_x,
        "distance_angstrom": rec.distance,
        "max_energy_drift": rec.max_energy_drift,
        "action_forms": action_forms(p, cfg, rec),
        "action_closed_form": closed.A,
    })
    step = max(1, len(rec.tau) // 2000)
    sl = slice(None, None, step)
    return [
        PlotTable("fig3a", ["tau [hbar/eV]", "eta [A]"], np.column_stack([rec.tau[sl], rec.eta[sl]])),
        PlotTable("fig3b", ["tau [hbar/eV]", "x [A]"], np.column_stack([rec.tau[sl], rec.x[sl]])),
    ]


def _psi_table(name, env):
    step = max(1, len(env.table) // 2000)
    return PlotTable(name, ["x [A]", "log|psi/psi0|^2 [1]", "WKB [1]"], env.table[::step])


def cmd_psi(p, cfg, args, record):
    N = args.N or 3
    tables = []
    try:
        res = find_resonance_field(p, cfg, *DEFAULT_FIELD_RANGE)
    except NoBracket:
        res = None
        record.add("resonance", "none in the default field range")
    H_R = res.H_R if res else None
    env = psi_envelope(p, cfg, cfg.field_H, N, H_R=H_R)
    record.add("psi", {
        "H_tesla": env.field_H,
        "action_per_cycle": env.action_per_cycle,
        "nodes": [{"N": int(n), "x_angstrom": x, "log_ratio": v} for n, x, v in env.nodes],
        "note": "exponential accuracy only",
    })
    tables.append(_psi_table("fig4b", env))
    if res is not None:
        at_res = psi_envelope(p, cfg, res, N)
        record.add("psi_at_resonance", {
            "H_R_tesla": res.H_R,
            "nodes": [{"N": int(n), "x_angstrom": x, "log_ratio": v} for n, x, v in at_res.nodes],
        })
        tables.append(_psi_table("fig6", at_res))
    return tables


def cmd_dissipation(p, cfg, args, record):
    N = args.N or 3
    well = find_turning_point(p, cfg)
    cycle = compute_cycle(p, cfg, well)
    record.add("dissipation", dissipation_report(cfg, cycle.delta_tau, cycle.delta_x, N, args.dE_over_E, args.delta_u))
    return []


def cmd_validate(p, cfg, args, record):
    results = acceptance.run_all()
    for c in results:
        print(c.line())
    record.add("criteria", [{"id": c.id, "passed": c.passed, "detail": c.detail} for c in results])
    record.add("all_passed", all(c.passed for c in results))
    return []


def _sweep_point(payload):
    p, cfg, H = payload
    run = cfg.with_field(H)
    try:
        well = find_turning_point(p, run)
        c = compute_cycle(p, run, well)
    except NoWell:
        return (H, 0.0) + (math.nan,) * 7
    f = wkb_rate(run) - c.delta_A / c.delta_x
    return (H, 1.0, well.eta0, c.delta_eta, c.delta_tau, c.delta_x, c.delta_A, f, f / wkb_rate(run))


def cmd_sweep(p, cfg, args, record):
    if not args.grid:
        raise ConfigError("sweep needs --grid lo:hi:steps")
    lo, hi, steps = parse_grid(args.grid)
    fields = np.linspace(lo, hi, steps)
    if np.any(fields <= 0):
        raise ConfigError("sweep fields must be positive")
    payloads = [(p, cfg, float(H)) for H in fields]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_point, payloads))
    else:
        rows = [_sweep_point(x) for x in payloads]
    rows.sort(key=lambda r: r[0])
    record.add("sweep", {"points": len(rows), "valid": int(sum(r[1] for r in rows))})
    headers = ["H [T]", "valid [1]", "eta0 [A]", "d_eta [A]", "d_tau [hbar/eV]", "dx [A]", "dA [1]",
               "f [1/A]", "A/A_WKB [1]"]
    return [PlotTable("sweep", headers, rows)]


HANDLERS = {
    "well": cmd_well,
    "cycle": cmd_cycle,
    "action": cmd_action,
    "resonance": cmd_resonance,
    "harmonics": cmd_harmonics,
    "trajectory": cmd_trajectory,
    "psi": cmd_psi,
    "dissipation": cmd_dissipation,
    "validate-example": cmd_validate,
    "sweep": cmd_sweep,
}


def build_parser():
    ap = argparse.ArgumentParser(prog="magtunnel", description=__doc__.split("\n\n")[0])
    ap.add_argument("--config", help="INI config file (default: built-in double-harmonic example)")
    ap.add_argument("--out", default=".", help="output directory for summary and tables")
    ap.add_argument("--command", required=True, choices=COMMANDS)
    ap.add_argument("--H", type=float, help="override the field in tesla")
    ap.add_argument("--N", type=int, help="number of cycles / top N")
    ap.add_argument("--grid", help="field grid lo:hi:steps (resonance and harmonics accept lo:hi)")
    ap.add_argument("--dE-over-E", dest="dE_over_E", type=float, default=0.1, help="level width ratio")
    ap.add_argument("--delta-u", dest="delta_u", type=float, default=0.0, help="barrier inhomogeneity in eV")
    ap.add_argument("--jobs", type=int, default=1, help="worker processes for sweep")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    record = None
    out = Path(args.out)
    try:
        if args.config:
            p, cfg = load_config(args.config)
        else:
            p, cfg = EXAMPLE_POTENTIAL, EXAMPLE_SYSTEM
        if args.H is not None:
            if args.H < 0:
                raise ConfigError("--H must be non-negative")
            cfg = cfg.with_field(args.H)
        if args.N is not None and args.N < 1:
            raise ConfigError("--N must be >= 1")
        out.mkdir(parents=True, exist_ok=True)
        record = RunRecord.start(args.command, p, cfg)
        tables = HANDLERS[args.command](p, cfg, args, record)
        for t in tables:
            t.write(out)
        record.provenance["tables"] = [f"{t.name}.csv" for t in tables]
        path = record.write(out)
        print(f"summary written to {path}", file=sys.stderr)
        if args.command == "validate-example" and not record.results["all_passed"]:
            return 1
        return 0
    except (TunnelingError, ValueError) as exc:
        code = exc.exit_code if isinstance(exc, TunnelingError) else 2
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        if record is not None:
            record.results.setdefault("error", {"type": type(exc).__name__, "message": str(exc), "exit_code": code})
            record.write(out)
        return code


if __name__ == "__main__":
    sys.exit(main())
