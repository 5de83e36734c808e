#!/usr/bin/env python3
"""Run both size sweeps and write plot-ready CSVs.

Produces sweep_random_sparse.csv (direct methods vs column LS on random
sparse chains) and sweep_random_walk.csv (column LS on the tridiagonal walk
family). Sizes defaults are desk-scale; pass --full for the published
ranges (the walk sweep then reaches n=2000 and takes a long time).

Usage: python scripts/scaling_sweep.py [--full] [--repeats 3] [--outdir .]
"""

import argparse
import sys
from pathlib import Path

from mfpt.cli import main as cli_main

DESK = {"random-sparse": [10, 110, 210], "random-walk": [100, 300, 500]}
FULL = {"random-sparse": [10, 110, 210, 310, 410, 510],
        "random-walk": [100, 500, 1000, 1500, 2000]}


def main(argv=None):
    parser = argparse.ArgumentParser()
    parser.add_argument("--full", action="store_true", help="published size ranges")
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--outdir", default=".")
    args = parser.parse_args(argv)

    sizes = FULL if args.full else DESK
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    for family, algos in (("random-sparse", ["ls", "fundamental"]),
                          ("random-walk", ["ls", "fundamental"])):
        out = outdir / f"sweep_{family.replace('-', '_')}.csv"
        argv = ["bench", "--family", family,
                "--sizes", *map(str, sizes[family]),
                "--repeats", str(args.repeats), "--seed", str(args.seed),
                "--out", str(out)]
        for algo in algos:
            argv += ["--algo", algo]
        print(f"running {family} sweep -> {out}", file=sys.stderr)
        code = cli_main(argv)
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
