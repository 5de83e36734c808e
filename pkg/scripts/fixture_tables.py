#!/usr/bin/env python3
"""Reproduce the three comparison tables on the published 5- and 6-state
fixtures: mean wall time, percentage of exactly-zero residuals, and summed
absolute residual, for each solver.

Divergent solver/matrix cells print as "--" (the parameterized iteration
stalls on the near-absorbing P4, and PZE/timance columns are
machine-dependent by nature).

Usage: python scripts/fixture_tables.py [--repeats 20] [--alpha 0.5] [--out tables.csv]
"""

import argparse
import csv
import statistics
import sys

from mfpt import fixture, report, solve_fundamental, solve_ls, solve_xu, timed
from mfpt.exceptions import MfptError

FIXTURES = ("P1", "P2", "P3", "P4")
SOLVERS = ("ls", "xu", "fundamental")


def run_cell(name, solver, repeats, alpha):
    P = fixture(name)
    dispatch = {
        "ls": lambda: solve_ls(P),
        "xu": lambda: solve_xu(P, alpha=alpha),
        "fundamental": lambda: solve_fundamental(P),
    }[solver]
    try:
        times = []
        for _ in range(repeats):
            M, elapsed = timed(dispatch)
            times.append(elapsed)
        return report(P, M, wall_time_s=statistics.fmean(times))
    except MfptError:
        return None


def print_table(title, cells, fmt):
    print(f"\n{title}")
    print(f"{'':14s}" + "".join(f"{name:>14s}" for name in FIXTURES))
    for solver in SOLVERS:
        row = [fmt(cells[name, solver]) if cells[name, solver] else "--"
               for name in FIXTURES]
        print(f"{solver:14s}" + "".join(f"{v:>14s}" for v in row))


def main(argv=None):
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=20)
    parser.add_argument("--alpha", type=float, default=0.5)
    parser.add_argument("--out", help="also write the cells as CSV")
    args = parser.parse_args(argv)

    cells = {}
    for name in FIXTURES:
        for solver in SOLVERS:
            cells[name, solver] = run_cell(name, solver, args.repeats, args.alpha)

    print_table("Mean computation time (seconds)", cells,
                lambda r: f"{r.wall_time_s:.4e}")
    print_table("Percentage of zero residuals", cells, lambda r: f"{r.pze:.4f}")
    print_table("Overall residual (sum of |eps|)", cells, lambda r: f"{r.ore:.4e}")

    if args.out:
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["matrix", "solver", "mean_time_s", "pze", "ore"])
            for (name, solver), rep in cells.items():
                if rep is None:
                    writer.writerow([name, solver, "failed", "failed", "failed"])
                else:
                    writer.writerow([name, solver, rep.wall_time_s, rep.pze, rep.ore])
        print(f"\nwrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
