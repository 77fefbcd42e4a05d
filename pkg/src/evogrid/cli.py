"""Command-line interface.

Subcommands: ``run`` executes experiments and writes traces/summaries,
``report`` compares an experiment directory against the reference table,
``bench`` times the kernel backends against each other.

Exit codes: 0 success, 1 usage error, 2 at least one trial failed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import backends
from .harness import (
    PROFILES,
    ExperimentConfig,
    compare_report,
    load_summaries,
    run_experiment,
)

__all__ = ["main"]


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the contract wants 1
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_functions(text: str):
    if text.strip().lower() == "all":
        return tuple(range(1, 31))
    try:
        ids = tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad function list {text!r}; use e.g. 1,2,7 or all")
    if not ids:
        raise argparse.ArgumentTypeError("empty function list")
    return ids


def _build_parser() -> _Parser:
    parser = _Parser(prog="evogrid", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", parents=[], help="run an experiment")
    p_run.add_argument("--functions", type=_parse_functions, required=True,
                       help="comma-separated function ids (1..30) or 'all'")
    p_run.add_argument("--trials", type=int, default=1)
    p_run.add_argument("--profile", choices=sorted(PROFILES), default="desk")
    p_run.add_argument("--seed", type=int, default=0, help="base seed; trial t uses seed+t")
    p_run.add_argument("--out", type=Path, required=True, help="output directory")
    p_run.add_argument("--nf", type=int, help="initial population size override")
    p_run.add_argument("--np", type=int, dest="np_", help="partitions per dimension override")
    p_run.add_argument("--ng", type=int, help="pool size override")
    p_run.add_argument("--ns", type=int, help="base offspring count override")
    p_run.add_argument("--max-loops", type=int, help="generation cap override")
    p_run.add_argument("--epsilon", type=float, help="stopping threshold override")

    p_rep = sub.add_parser("report", help="compare an experiment directory to the reference table")
    p_rep.add_argument("--in", dest="in_dir", type=Path, required=True)
    p_rep.add_argument("--json", action="store_true", help="emit the JSON report")

    p_bench = sub.add_parser("bench", help="time the kernel backends")
    p_bench.add_argument("--batch", type=int, default=160_000, help="rows per kernel call")
    p_bench.add_argument("--dims", type=int, default=30)
    p_bench.add_argument("--partitions", type=int, default=300)
    p_bench.add_argument("--repeats", type=int, default=3)
    return parser


_OVERRIDE_FLAGS = {
    "nf": "init_size",
    "np_": "partitions",
    "ng": "pool_size",
    "ns": "batch_base",
    "max_loops": "max_generations",
    "epsilon": "epsilon",
}


def _cmd_run(args) -> int:
    overrides = {}
    for flag, field in _OVERRIDE_FLAGS.items():
        value = getattr(args, flag)
        if value is not None:
            overrides[field] = value
    try:
        config = ExperimentConfig(
            functions=args.functions,
            out_dir=args.out,
            trials=args.trials,
            profile=args.profile,
            base_seed=args.seed,
            overrides=overrides,
        )
    except ValueError as exc:
        print(f"evogrid run: error: {exc}", file=sys.stderr)
        return 1
    result = run_experiment(config)
    for fid in config.functions:
        s = result.summaries.get(fid)
        if s is None:
            print(f"f{fid:02d}: all {config.trials} trial(s) failed")
            continue
        print(
            f"f{fid:02d}: trials={s['trials']} mean_best={s['mean_best']:.6g} "
            f"std_best={s['std_best']:.6g} mean_generations={s['mean_generations']:.1f} "
            f"mean_evaluations={s['mean_evaluations']:.0f} stop_reasons={s['stop_reasons']}"
        )
    for t in result.failures:
        print(f"FAILED f{t.function_id:02d} trial {t.trial} (seed {t.seed}): {t.error}")
    return 2 if result.failures else 0


def _cmd_report(args) -> int:
    if not args.in_dir.is_dir():
        print(f"evogrid report: error: {args.in_dir} is not a directory", file=sys.stderr)
        return 1
    summaries = load_summaries(args.in_dir)
    if not summaries:
        print(f"evogrid report: error: no summary files in {args.in_dir}", file=sys.stderr)
        return 1
    text, data = compare_report(summaries)
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(text, end="")
    return 0


def _time(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _cmd_bench(args) -> int:
    from .core import SearchSpace, init_population
    from .grid import IntervalGrid

    b, n, p = args.batch, args.dims, args.partitions
    rng = np.random.default_rng(0)
    space = SearchSpace.cube(n, -5.0, 5.0)
    grid = IntervalGrid.build(space, p)
    x = init_population(space, b, rng)
    f = np.sum(x * x, axis=1)
    u = rng.random((b, n))
    cells_full = np.ascontiguousarray(
        np.floor((x - space.lower) / grid.cell_width).astype(np.int64).clip(0, p - 1)
    )
    cells0 = np.ascontiguousarray(cells_full[:, 0])
    slot_f = np.full((p, 2), np.inf)
    slot_x = np.zeros((p, 2, n))
    members = x[: 2 * p + 1]
    member_f = f[: 2 * p + 1]
    cells_t = np.ascontiguousarray(cells_full[: 2 * p + 1].T)
    order = np.ascontiguousarray(np.argsort(member_f, kind="stable").astype(np.int64))
    weights = np.full(member_f.size, 1.0 / member_f.size)
    # one full-box interval per dimension
    starts = np.ascontiguousarray(space.lower)
    ends = np.ascontiguousarray(space.upper)
    offsets = np.arange(n + 1, dtype=np.int64)
    idx = np.zeros((b, n), dtype=np.int64)

    tasks = {
        "assign_cells": lambda k: k.assign_cells(x, space.lower, grid.cell_width, p),
        "update_slots": lambda k: k.update_slots(slot_f, slot_x, cells0, f, x),
        "score_accumulate": lambda k: k.score_accumulate(cells_t, order, weights, p),
        "sample_in_intervals": lambda k: k.sample_in_intervals(idx, starts, ends, offsets, u),
        "sample_in_cells": lambda k: k.sample_in_cells(cells_full, grid.boundaries, u),
    }
    names = backends.available()
    print(f"backends: {', '.join(names)} (active: {backends.active_name()})")
    print(f"batch={b} dims={n} partitions={p} repeats={args.repeats}\n")
    header = f"{'kernel':<22}" + "".join(f"{name:>14}" for name in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for label, task in tasks.items():
        times = {nm: _time(lambda k=backends.get(nm): task(k), args.repeats) for nm in names}
        row = f"{label:<22}" + "".join(f"{times[nm] * 1e3:>12.2f}ms" for nm in names)
        if len(names) == 2 and times["compiled"] > 0:
            row += f"{times['python'] / times['compiled']:>9.1f}x"
        print(row)
    if len(names) < 2:
        print("\ncompiled backend not built; only the numpy fallback was timed")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "report":
        return _cmd_report(args)
    return _cmd_bench(args)


if __name__ == "__main__":
    sys.exit(main())
