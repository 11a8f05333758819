#!/usr/bin/env python3
"""Relax the charge-1 seed at zero coupling across several resolutions and
print the minimizer energy, charge, core length even and virial ratio.
Useful for judging how much desk-scale numbers drift with the mesh."""

import argparse
import sys
import time

from hopfrelax.ansatz import AnsatzParams, hopfion_ansatz
from hopfrelax.diagnostics import core_curve, derrick_ratio, hopf_charge
from hopfrelax.lattice import LatticeSpec
from hopfrelax.optimizer import OptimizerConfig, minimize


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+", default=[32, 48, 64])
    parser.add_argument("--edge", type=float, default=6.0)
    parser.add_argument("--charge", type=int, default=1)
    args = parser.parse_args()

    print(f"{'N':>4} {'h':>9} {'E':>12} {'Q':>9} {'core':>8} {'D':>9} {'iters':>6} {'sec':>6}")
    for n in args.sizes:
        spec = LatticeSpec(n, args.edge / (n - 1))
        phi, c = hopfion_ansatz(spec, AnsatzParams(args.charge))
        t0 = time.time()
        res = minimize(phi, c, 0.0, OptimizerConfig())
        curve = core_curve(res.phi)
        print(
            f"{n:>4} {spec.spacing:>9.5f} {res.energy.total:>12.5f} "
            f"{hopf_charge(res.phi):>9.5f} {curve.length:>8.4f} "
            f"{derrick_ratio(res.energy):>+9.5f} {res.iterations:>6} "
            f"{time.time() - t0:>6.0f}"
        )
        if not res.converged:
            print(f"     (N={n} did not converge: {res.status})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
