"""Experiment runner and result comparison.

Executes multi-trial experiments over the benchmark functions, writing one
trace CSV per trial and one summary JSON per function, then compares
achieved statistics against the frozen reference table, including the
order-of-magnitude miss count.
"""

from __future__ import annotations

import json
import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .benchmarks import make_problem, spec
from .core import RunConfig
from .engine import run
from .reference import REFERENCE, ReferenceEntry

__all__ = [
    "PROFILES",
    "MISS_RULE",
    "ExperimentConfig",
    "TrialResult",
    "ExperimentResult",
    "run_experiment",
    "summarize_trials",
    "is_miss",
    "order_of_magnitude_misses",
    "compare_report",
    "load_summaries",
]

log = logging.getLogger(__name__)

# run profiles: "paper" is the full-scale setting (RunConfig defaults);
# "desk" shrinks every population knob for second-scale runs
PROFILES: Dict[str, Dict[str, int]] = {
    "paper": {},
    "desk": {
        "init_size": 500,
        "partitions": 100,
        "pool_size": 500,
        "batch_base": 200,
        "max_generations": 60,
    },
}

MISS_RULE = (
    "miss rule: for a known optimum o and achieved mean m, a miss is "
    "|m - o| > 1.0 when |o| <= 1, else |m - o| >= 10^(floor(log10|o|) + 1); "
    "functions without a known optimum are excluded"
)


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: a set of functions, trial count, and run profile.

    Trial t of every function runs with seed = base_seed + t.  ``overrides``
    replace individual RunConfig fields on top of the chosen profile.
    """

    functions: Tuple[int, ...]
    out_dir: Path
    trials: int = 1
    profile: str = "desk"
    base_seed: int = 0
    overrides: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "functions", tuple(int(f) for f in self.functions))
        object.__setattr__(self, "out_dir", Path(self.out_dir))
        if not self.functions:
            raise ValueError("no functions requested")
        for fid in self.functions:
            spec(fid)  # raises for invalid ids
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.profile not in PROFILES:
            raise ValueError(f"unknown profile {self.profile!r}; choices: {sorted(PROFILES)}")

    def run_config(self, trial: int) -> RunConfig:
        params = dict(PROFILES[self.profile])
        params.update(self.overrides)
        params["seed"] = self.base_seed + trial
        return RunConfig(**params)


@dataclass
class TrialResult:
    function_id: int
    trial: int
    seed: int
    best_fitness: Optional[float] = None
    generations: Optional[int] = None
    evaluations: Optional[int] = None
    stop_reason: Optional[str] = None
    seconds: Optional[float] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass
class ExperimentResult:
    summaries: Dict[int, dict] = field(default_factory=dict)
    trials: List[TrialResult] = field(default_factory=list)

    @property
    def failures(self) -> List[TrialResult]:
        return [t for t in self.trials if not t.ok]


def summarize_trials(function_id: int, results: Sequence[TrialResult]) -> dict:
    """Fixed-schema summary of the successful trials of one function."""
    ok = [t for t in results if t.ok]
    best = np.array([t.best_fitness for t in ok], dtype=np.float64)
    reasons: Dict[str, int] = {}
    for t in ok:
        reasons[t.stop_reason] = reasons.get(t.stop_reason, 0) + 1
    return {
        "function_id": function_id,
        "trials": len(ok),
        "mean_best": float(best.mean()),
        "std_best": float(best.std()),
        "min_best": float(best.min()),
        "max_best": float(best.max()),
        "mean_generations": float(np.mean([t.generations for t in ok])),
        "mean_evaluations": float(np.mean([t.evaluations for t in ok])),
        "stop_reasons": {k: reasons[k] for k in sorted(reasons)},
    }


def _trace_path(out_dir: Path, fid: int, trial: int) -> Path:
    return out_dir / f"f{fid:02d}_trial{trial:03d}.csv"


def _summary_path(out_dir: Path, fid: int) -> Path:
    return out_dir / f"f{fid:02d}_summary.json"


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run all requested trials, writing traces and per-function summaries.

    A failing trial is recorded (with its error) and the experiment
    continues; its function's summary then covers the surviving trials.
    """
    config.out_dir.mkdir(parents=True, exist_ok=True)
    result = ExperimentResult()
    for fid in config.functions:
        per_function: List[TrialResult] = []
        for t in range(config.trials):
            cfg = config.run_config(t)
            tr = TrialResult(function_id=fid, trial=t, seed=cfg.seed)
            started = time.perf_counter()
            try:
                trace = run(make_problem(fid), cfg)
                tr.best_fitness = trace.best.f
                tr.generations = trace.generations
                tr.evaluations = trace.evaluations
                tr.stop_reason = trace.stop_reason
                _trace_path(config.out_dir, fid, t).write_text(trace.to_csv(t))
            except Exception as exc:  # noqa: BLE001 - deliberate per-trial isolation
                tr.error = f"{type(exc).__name__}: {exc}"
                log.error("f%02d trial %d failed: %s", fid, t, tr.error)
            tr.seconds = time.perf_counter() - started
            per_function.append(tr)
            result.trials.append(tr)
        if any(t.ok for t in per_function):
            summary = summarize_trials(fid, per_function)
            _summary_path(config.out_dir, fid).write_text(
                json.dumps(summary, indent=2, sort_keys=True) + "\n"
            )
            result.summaries[fid] = summary
    return result


def is_miss(mean_best: float, optimum: Optional[float]) -> Optional[bool]:
    """Apply MISS_RULE to one function; None when the optimum is unknown."""
    if optimum is None:
        return None
    diff = abs(mean_best - optimum)
    if abs(optimum) <= 1.0:
        return diff > 1.0
    return diff >= 10.0 ** (math.floor(math.log10(abs(optimum))) + 1)


def order_of_magnitude_misses(
    means: Mapping[int, float], reference: Mapping[int, ReferenceEntry] = REFERENCE
) -> int:
    """Count functions whose achieved mean misses the known optimum."""
    count = 0
    for fid, mean in means.items():
        if is_miss(mean, reference[fid].optimum):
            count += 1
    return count


def compare_report(
    summaries: Mapping[int, dict], reference: Mapping[int, ReferenceEntry] = REFERENCE
) -> Tuple[str, dict]:
    """Side-by-side comparison of achieved vs reference statistics.

    Returns (plain text, JSON-ready dict).  Rows cover the summarized
    functions in id order; the text header states the miss rule so readers
    can recompute under an alternative.
    """
    rows = []
    for fid in sorted(summaries):
        s = summaries[fid]
        ref = reference[fid]
        rows.append(
            {
                "function_id": fid,
                "name": spec(fid).name,
                "optimum": ref.optimum,
                "reference_mean": ref.mean_best,
                "reference_std": ref.std_best,
                "achieved_mean": s["mean_best"],
                "achieved_std": s["std_best"],
                "trials": s["trials"],
                "achieved_miss": is_miss(s["mean_best"], ref.optimum),
                "reference_miss": is_miss(ref.mean_best, ref.optimum),
            }
        )
    achieved = sum(1 for r in rows if r["achieved_miss"])
    expected = sum(1 for r in rows if r["reference_miss"])
    data = {
        "rule": MISS_RULE,
        "functions": rows,
        "achieved_misses": achieved,
        "reference_misses": expected,
    }

    def _num(v, width=14):
        if v is None:
            return " " * (width - 1) + "-"
        return f"{v:>{width}.4f}" if abs(v) < 1e7 else f"{v:>{width}.4e}"

    lines = [
        MISS_RULE,
        f"achieved misses: {achieved}   reference misses: {expected}",
        "",
        f"{'id':>3} {'name':<22} {'optimum':>14} {'ref_mean':>14} {'ref_std':>14} "
        f"{'mean':>14} {'std':>14} {'miss':>5}",
    ]
    for r in rows:
        miss = "-" if r["achieved_miss"] is None else ("yes" if r["achieved_miss"] else "no")
        lines.append(
            f"{r['function_id']:>3} {r['name']:<22} {_num(r['optimum'])} "
            f"{_num(r['reference_mean'])} {_num(r['reference_std'])} "
            f"{_num(r['achieved_mean'])} {_num(r['achieved_std'])} {miss:>5}"
        )
    return "\n".join(lines) + "\n", data


def load_summaries(out_dir: Path) -> Dict[int, dict]:
    """Read every per-function summary JSON from an experiment directory."""
    out_dir = Path(out_dir)
    summaries: Dict[int, dict] = {}
    for path in sorted(out_dir.glob("f*_summary.json")):
        data = json.loads(path.read_text())
        summaries[int(data["function_id"])] = data
    return summaries
