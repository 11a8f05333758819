#!/usr/bin/env python3
"""Run the desk-scale continuation experiment end to end.

Seeds a charge-Q ring, relaxes it at zero coupling, then sweeps the
supercurrent coupling to 1 with the default schedule, writing the records
CSV, per-step checkpoints, and periodic VTK volumes under the output
directory. Equivalent to `hopfrelax run --config configs/desk64.cfg` with
the chosen overrides.
"""

import argparse
import sys
from pathlib import Path

from hopfrelax.cli import main as cli_main

CONFIG = Path(__file__).resolve().parent.parent / "configs" / "desk64.cfg"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--charge", type=int, default=1, help="Hopf charge of the seed")
    parser.add_argument("--n", type=int, default=64, help="grid points per axis")
    parser.add_argument("--outdir", default=None, help="output directory override")
    parser.add_argument("--resume", default=None, help="checkpoint to resume from")
    args = parser.parse_args()

    edge = 6.0
    overrides = [
        f"ansatz.charge={args.charge}",
        f"lattice.n={args.n}",
        f"lattice.h={edge / args.n}",
    ]
    if args.outdir:
        overrides.append(f"output.directory={args.outdir}")
    else:
        overrides.append(f"output.directory=out_desk{args.n}_q{args.charge}")

    argv = ["run", "--config", str(CONFIG)]
    for item in overrides:
        argv += ["--set", item]
    if args.resume:
        argv += ["--resume", args.resume]
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())
