"""Benchmark front end: solve | bench | validate | gen.

Every run emits CSV rows with the schema
``n,matrix,algorithm,alpha,repeats,mean_time_s,pze,near_zero_frac,ore,iterations,warning``
(one row per matrix/algorithm pair). Timing and PZE are machine-dependent
and recorded as-is; ORE is the portable accuracy column. Exit codes:
0 success, 1 input or config error, 2 solver failure.
"""

from __future__ import annotations

import argparse
import csv
import re
import statistics
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import dense_txt
from .chain import StochasticMatrix, diagnose, validate_stochastic
from .exceptions import MfptError
from .generators import GeneratorSpec, fixture_raw
from .linalg import min_norm_solve
from .metrics import report, timed
from .solvers import (
    CONDITION_DECAY_LIMIT,
    XU_ALPHA_DEFAULT,
    XU_MAX_ITER_DEFAULT,
    XU_TOL_DEFAULT,
    build_column_system,
    estimate_mc,
    solve_fundamental,
    solve_ls,
    solve_xu,
    thread_count,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_SOLVER = 2

CSV_HEADER = [
    "n", "matrix", "algorithm", "alpha", "repeats", "mean_time_s",
    "pze", "near_zero_frac", "ore", "iterations", "warning",
]

ALGORITHMS = ("ls", "xu", "fundamental", "mc")

DEFAULT_SWEEP = {
    "random_sparse": [10, 110, 210, 310, 410, 510],
    "random_walk": [100, 500, 1000, 1500, 2000],
}


@dataclass
class RunConfig:
    source: GeneratorSpec | str | None = None
    algorithms: list[str] = field(default_factory=list)
    repeats: int = 20
    alpha: float = XU_ALPHA_DEFAULT
    tol: float = XU_TOL_DEFAULT
    max_iter: int = XU_MAX_ITER_DEFAULT
    rank_tol: float | None = None
    seed: int = 0
    trials: int = 10_000
    horizon: int | None = None
    out: str | None = None
    renormalize: bool = False
    emit_matrix: bool = False
    timing_strict: bool = False
    threads: int | None = None


@dataclass
class BenchRow:
    n: int
    matrix: str
    algorithm: str
    alpha: str
    repeats: int
    mean_time_s: str
    pze: str
    near_zero_frac: str
    ore: str
    iterations: str
    warning: str

    def as_list(self):
        return [self.n, self.matrix, self.algorithm, self.alpha, self.repeats,
                self.mean_time_s, self.pze, self.near_zero_frac, self.ore,
                self.iterations, self.warning]


def _sanitize(label: str) -> str:
    return re.sub(r"[^\w.+-]+", "_", label).strip("_")


def _load_matrix(config: RunConfig) -> tuple[StochasticMatrix, str]:
    src = config.source
    if isinstance(src, str):
        raw = dense_txt.load_dense(src)
        if config.renormalize:
            raw = raw / raw.sum(axis=1, keepdims=True)
        return validate_stochastic(raw), Path(src).stem
    if isinstance(src, GeneratorSpec):
        return src.build(), src.label
    raise MfptError("no matrix source given")


def _run_cell(P: StochasticMatrix, algo: str, config: RunConfig,
              solver_threads: int | None):
    """Run one (matrix, algorithm) cell `repeats` times, averaging the time.

    Returns (BenchRow, result); result is None when the solver failed and
    the row's numeric fields say "failed".
    """

    def dispatch():
        if algo == "ls":
            return solve_ls(P, rank_tol=config.rank_tol, threads=solver_threads)
        if algo == "xu":
            return solve_xu(P, alpha=config.alpha, tol=config.tol, max_iter=config.max_iter)
        if algo == "fundamental":
            return solve_fundamental(P)
        if algo == "mc":
            return estimate_mc(P, trials=config.trials, seed=config.seed,
                               horizon=config.horizon).mfpt
        raise MfptError(f"unknown algorithm {algo!r}")

    alpha_field = repr(config.alpha) if algo == "xu" else ""
    result = None
    times = []
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            for _ in range(config.repeats):
                result, elapsed = timed(dispatch)
                times.append(elapsed)
        notes = sorted({type(w.message).__name__ for w in caught})
    except MfptError as exc:
        row = BenchRow(
            n=P.n, matrix="", algorithm=algo, alpha=alpha_field,
            repeats=config.repeats, mean_time_s="failed", pze="failed",
            near_zero_frac="failed", ore="failed", iterations="failed",
            warning=type(exc).__name__,
        )
        return row, None
    rep = report(P, result, wall_time_s=statistics.fmean(times))
    row = BenchRow(
        n=P.n, matrix="", algorithm=algo, alpha=alpha_field,
        repeats=config.repeats, mean_time_s=f"{rep.wall_time_s:.6g}",
        pze=repr(rep.pze), near_zero_frac=repr(rep.near_zero_frac),
        ore=repr(rep.ore), iterations=str(result.iterations), warning=";".join(notes),
    )
    return row, result


def _emit_matrix(result, label: str, algo: str, config: RunConfig) -> None:
    directory = Path(config.out).parent if config.out else Path(".")
    path = directory / f"{_sanitize(label)}_{algo}.txt"
    dense_txt.save_dense(path, result.matrix)
    print(f"wrote {path}", file=sys.stderr)


def _write_rows(rows: list[BenchRow], out: str | None) -> None:
    sink = open(out, "w", newline="") if out else sys.stdout
    try:
        writer = csv.writer(sink)
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow(row.as_list())
    finally:
        if out:
            sink.close()


def cmd_solve(config: RunConfig) -> int:
    try:
        P, label = _load_matrix(config)
    except MfptError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    rows = []
    failed = False
    for algo in config.algorithms:
        row, result = _run_cell(P, algo, config, solver_threads=config.threads)
        if result is None:
            failed = True
        elif config.emit_matrix:
            _emit_matrix(result, label, algo, config)
        row.matrix = label
        rows.append(row)
    _write_rows(rows, config.out)
    return EXIT_SOLVER if failed else EXIT_OK


def cmd_bench(config: RunConfig, family: str, sizes: list[int]) -> int:
    if not sizes:
        print("error: empty size sweep", file=sys.stderr)
        return EXIT_INPUT
    if any(n < 2 for n in sizes):
        print("error: sweep sizes must be >= 2", file=sys.stderr)
        return EXIT_INPUT
    base = GeneratorSpec(kind=family, n=0, a=0.4 if family == "random_sparse" else None,
                         seed=config.seed)
    if isinstance(config.source, GeneratorSpec) and config.source.a is not None:
        base = GeneratorSpec(kind=family, n=0, a=config.source.a, seed=config.seed)

    cells = []
    for n in sorted(sizes):
        spec = base.with_size(n)
        try:
            P = spec.build()
        except MfptError as exc:
            print(f"error generating {spec.label}: {exc}", file=sys.stderr)
            return EXIT_INPUT
        for algo in config.algorithms:
            cells.append((P, spec.label, algo))

    workers = thread_count(config.threads)
    parallel_cells = workers > 1 and not config.timing_strict

    def run(cell):
        P, label, algo = cell
        row, result = _run_cell(P, algo, config,
                                solver_threads=1 if parallel_cells else config.threads)
        if result is not None and config.emit_matrix:
            _emit_matrix(result, label, algo, config)
        row.matrix = label
        return row

    if parallel_cells:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run, cells))
    else:
        rows = [run(cell) for cell in cells]

    rows.sort(key=lambda r: (r.n, r.algorithm))
    _write_rows(rows, config.out)
    return EXIT_OK


def cmd_validate(path: str, renormalize: bool = False) -> int:
    try:
        raw = dense_txt.load_dense(path)
    except (MfptError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sums = raw.sum(axis=1)
    worst = int(np.argmax(np.abs(sums - 1.0)))
    print(f"n: {raw.shape[0]}")
    print(f"worst row-sum deviation: row {worst}, |sum-1| = {abs(sums[worst] - 1.0):.3e}")
    if renormalize:
        raw = raw / sums[:, None]
    try:
        P = validate_stochastic(raw)
    except MfptError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_INPUT
    d = diagnose(P)
    print(f"irreducible: {d.irreducible}")
    print(f"aperiodic: {d.aperiodic} (period {d.period})")
    probe = min_norm_solve(build_column_system(P, 0).matrix, np.ones(P.n))
    flagged = probe.pivot_decay > CONDITION_DECAY_LIMIT
    print(f"pivot decay ratio (column 0 system): {probe.pivot_decay:.3e}"
          + (" [ConditionWarning]" if flagged else ""))
    return EXIT_OK


def cmd_gen(config: RunConfig, out: str) -> int:
    src = config.source
    if not isinstance(src, GeneratorSpec):
        print("error: gen needs a generator source, not a file", file=sys.stderr)
        return EXIT_INPUT
    try:
        if src.kind == "fixture":
            matrix = fixture_raw(src.name)  # printed values, not re-normalized
        else:
            matrix = src.build().entries
    except MfptError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT if not hasattr(exc, "attempts") else EXIT_SOLVER
    dense_txt.save_dense(out, matrix)
    print(f"wrote {out}", file=sys.stderr)
    return EXIT_OK


def _add_source_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--fixture", metavar="NAME", help="published fixture (P1..P4)")
    p.add_argument("--matrix", metavar="PATH", help="dense-txt matrix file")
    p.add_argument("--random-sparse", type=int, metavar="N",
                   help="random sparse irreducible chain of size N")
    p.add_argument("--random-walk", type=int, metavar="N",
                   help="one-dimensional walk chain of size N")
    p.add_argument("--two-state", type=float, nargs=2, metavar=("A", "B"),
                   help="two-state chain [[1-A, A], [B, 1-B]]")
    p.add_argument("--a", type=float, default=0.4,
                   help="sparsity threshold for --random-sparse (default 0.4)")


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--algo", action="append", choices=ALGORITHMS, required=True,
                   help="solver to run (repeatable)")
    p.add_argument("--alpha", type=float, default=XU_ALPHA_DEFAULT)
    p.add_argument("--tol", type=float, default=XU_TOL_DEFAULT)
    p.add_argument("--max-iter", type=int, default=XU_MAX_ITER_DEFAULT)
    p.add_argument("--rank-tol", type=float, default=None)
    p.add_argument("--trials", type=int, default=10_000, help="mc trajectories per cell")
    p.add_argument("--horizon", type=int, default=None, help="mc step cap (default 1000n)")
    p.add_argument("--repeats", type=int, default=20, help="timing repetitions")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: MFPT_THREADS, 0 = sequential)")
    p.add_argument("--out", metavar="PATH", help="CSV output (default stdout)")
    p.add_argument("--emit-matrix", action="store_true",
                   help="also write each result matrix as dense-txt")
    p.add_argument("--renormalize", action="store_true",
                   help="divide file rows by their sums before validating")
    p.add_argument("--timing-strict", action="store_true",
                   help="never run benchmark cells concurrently")


def _source_from_args(args) -> GeneratorSpec | str | None:
    values = {name: getattr(args, name, None)
              for name in ("fixture", "matrix", "random_sparse", "random_walk",
                           "two_state")}
    chosen = [name for name, val in values.items() if val is not None]
    if len(chosen) != 1:
        return None
    kind = chosen[0]
    if kind == "matrix":
        return args.matrix
    if kind == "fixture":
        return GeneratorSpec(kind="fixture", name=args.fixture)
    if kind == "random_sparse":
        return GeneratorSpec(kind="random_sparse", n=args.random_sparse, a=args.a,
                             seed=args.seed)
    if kind == "random_walk":
        return GeneratorSpec(kind="random_walk", n=args.random_walk)
    a, b = args.two_state
    return GeneratorSpec(kind="two_state", a=a, b=b)


def _config_from_args(args) -> RunConfig:
    return RunConfig(
        source=_source_from_args(args),
        algorithms=list(dict.fromkeys(args.algo)) if getattr(args, "algo", None) else [],
        repeats=args.repeats,
        alpha=args.alpha,
        tol=args.tol,
        max_iter=args.max_iter,
        rank_tol=args.rank_tol,
        seed=args.seed,
        trials=args.trials,
        horizon=args.horizon,
        out=args.out,
        renormalize=args.renormalize,
        emit_matrix=args.emit_matrix,
        timing_strict=args.timing_strict,
        threads=args.threads,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mfpt",
                                     description="Mean-first-passage-time solvers and benchmarks")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one matrix, emit a CSV report")
    _add_source_flags(p_solve)
    _add_solver_flags(p_solve)

    p_bench = sub.add_parser("bench", help="size sweep over a generator family")
    p_bench.add_argument("--family", choices=("random-sparse", "random-walk"),
                         required=True)
    p_bench.add_argument("--sizes", type=int, nargs="*", metavar="N",
                         help="sweep sizes (default mirrors the published sweeps)")
    p_bench.add_argument("--a", type=float, default=0.4)
    _add_solver_flags(p_bench)

    p_val = sub.add_parser("validate", help="diagnose a dense-txt matrix file")
    p_val.add_argument("path")
    p_val.add_argument("--renormalize", action="store_true")

    p_gen = sub.add_parser("gen", help="write a generated matrix to dense-txt")
    _add_source_flags(p_gen)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", metavar="PATH", required=True)

    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; fold that into the input-error code
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    if args.command == "validate":
        return cmd_validate(args.path, renormalize=args.renormalize)
    if args.command == "gen":
        source = _source_from_args(args)
        if source is None or isinstance(source, str):
            print("error: choose exactly one generator source", file=sys.stderr)
            return EXIT_INPUT
        cfg = RunConfig(source=source, seed=args.seed)
        return cmd_gen(cfg, args.out)

    config = _config_from_args(args)
    if args.command == "solve":
        if config.source is None:
            print("error: choose exactly one matrix source", file=sys.stderr)
            return EXIT_INPUT
        if config.repeats < 1:
            print("error: --repeats must be >= 1", file=sys.stderr)
            return EXIT_INPUT
        return cmd_solve(config)
    if args.command == "bench":
        family = args.family.replace("-", "_")
        config.source = GeneratorSpec(kind=family, n=0, a=args.a, seed=config.seed)
        sizes = args.sizes if args.sizes is not None else DEFAULT_SWEEP[family]
        if config.repeats < 1:
            print("error: --repeats must be >= 1", file=sys.stderr)
            return EXIT_INPUT
        return cmd_bench(config, family, sizes)
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
