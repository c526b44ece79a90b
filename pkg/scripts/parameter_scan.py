#!/usr/bin/env python3
"""Where does a double-harmonic barrier have its resonance?

Scans barrier height u0 and particle mass at a = 50 A, lambda = 0.215,
|E| = 0.01 eV and reports H_R with the cycle quantities there.  Shows that
no point reproduces the quoted set (H_R ~ 10 T, dx ~ 120 A, dA ~ 12) at once.

    python scripts/parameter_scan.py --u0 0.01 0.03 0.1 1 --mass 0.067 0.2 1
"""

import argparse
import itertools

from magtunnel.errors import NoBracket, NoWell
from magtunnel.potential import BarrierPotential, SystemConfig
from magtunnel.resonance import find_resonance_field


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--u0", type=float, nargs="+", default=[0.01, 0.03, 0.1, 0.3, 1.0])
    ap.add_argument("--mass", type=float, nargs="+", default=[0.067, 0.2, 0.5, 1.0])
    ap.add_argument("--range", type=float, nargs=2, default=[0.5, 30.0], metavar=("H_LO", "H_HI"))
    ap.add_argument("--points", type=int, default=32)
    args = ap.parse_args()

    print(f"{'u0 [eV]':>8} {'mass':>6} {'H_R [T]':>9} {'d_eta [A]':>10} {'dx [A]':>9} {'dA':>8}")
    for u0, mass in itertools.product(args.u0, args.mass):
        p = BarrierPotential.double_harmonic(u0, 50.0, 0.215)
        cfg = SystemConfig(energy_depth=0.01, barrier_length_R=1000.0, field_H=10.0, mass=mass)
        try:
            res = find_resonance_field(p, cfg, *args.range, N_range=[], n_scan=args.points)
        except (NoBracket, NoWell) as exc:
            print(f"{u0:8.3g} {mass:6.3g} {'none':>9}  ({type(exc).__name__})")
            continue
        c = res.cycle
        print(f"{u0:8.3g} {mass:6.3g} {res.H_R:9.4f} {c.delta_eta:10.3f} {c.delta_x:9.3f} {c.delta_A:8.3f}")


if __name__ == "__main__":
    main()
