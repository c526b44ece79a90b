#!/usr/bin/env python3
"""Computed cycle quantities for the worked double-harmonic example next to the quoted ones.

    python scripts/reproduce_example.py [--fields 8 10 12]
"""

import argparse

from magtunnel.cycle import compute_cycle
from magtunnel.errors import NoBracket
from magtunnel.potential import EXAMPLE_POTENTIAL, EXAMPLE_SYSTEM, wkb_rate
from magtunnel.resonance import find_resonance_field

QUOTED = {"H_R [T]": 10.0, "d_eta [A]": 110.0, "dx [A]": 120.0, "dA": 12.0}


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--fields", type=float, nargs="+", default=[8.0, 10.0, 12.0])
    args = ap.parse_args()

    p, cfg = EXAMPLE_POTENTIAL, EXAMPLE_SYSTEM
    k0 = wkb_rate(cfg)
    print(f"k0 = 2 sqrt(2 m |E|) / hbar = {k0:.7f} 1/A")
    print(f"quoted: {', '.join(f'{k} ~ {v:g}' for k, v in QUOTED.items())}")
    print(f"{'H [T]':>8} {'d_eta [A]':>11} {'dx [A]':>10} {'dA':>10} {'dA/dx':>10} {'k0-dA/dx':>10}")
    for H in args.fields:
        c = compute_cycle(p, cfg.with_field(H))
        print(f"{H:8.3f} {c.delta_eta:11.4f} {c.delta_x:10.4f} {c.delta_A:10.4f} "
              f"{c.action_per_length:10.5f} {k0 - c.action_per_length:10.5f}")
    try:
        res = find_resonance_field(p, cfg)
        print(f"H_R = {res.H_R:.10g} T")
    except NoBracket as exc:
        print(f"no resonance: {exc}")


if __name__ == "__main__":
    main()
