"""Generation loop, stopping rule, and convergence trace.

A run initializes a uniform population, keeps the best ``pool_size``
individuals as the elite pool, and then repeats: re-partition the pool's
current spread, score grid cells from the archive, select good intervals,
estimate the sampling model, generate offspring with all operators,
evaluate, fold into archive, truncation-select the next pool.  It stops
when the per-dimension quantile summary of the pool moves by at most
``epsilon`` in one generation (stop reason "threshold"), or after
``max_generations`` generations ("loop-limit").

The partition is rebuilt every generation over the pool's per-dimension
spread (a widened quantile window), so cell resolution sharpens as the
survivors concentrate; only the pure random sampler keeps drawing from
the full box.  The scoring archive is re-derived against each new
partition from the remembered points still competitive with the pool,
dropping what falls outside the span.
"""

from __future__ import annotations

import io
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from .core import (
    ElitePool,
    EvaluatedIndividual,
    Problem,
    RunConfig,
    SearchSpace,
    init_population,
    select_next_pool,
)
from .grid import (
    GOOD_QUANTILE,
    IntervalGrid,
    ScoringArchive,
    estimate_sampling_model,
    score_cells,
    select_good_intervals,
)
from .operators import generate_offspring

__all__ = [
    "GenerationRecord",
    "ConvergenceTrace",
    "Engine",
    "coordinate_quantiles",
    "pool_distance",
    "run",
    "TRACE_HEADER",
]

log = logging.getLogger(__name__)

TRACE_HEADER = "trial,generation,evaluations,best_fitness,pool_distance"


def coordinate_quantiles(xs: np.ndarray, levels) -> np.ndarray:
    """Nearest-rank quantiles of each column; returns (dim, len(levels)).

    The level-a quantile of N sorted values is the ceil(a * N)-th smallest.
    """
    xs = np.asarray(xs, dtype=np.float64)
    n = xs.shape[0]
    levels = np.asarray(levels, dtype=np.float64)
    ranks = np.ceil(levels * n).astype(np.int64)
    ranks = np.clip(ranks - 1, 0, n - 1)
    return np.sort(xs, axis=0)[ranks].T


def pool_distance(qa: np.ndarray, qb: np.ndarray) -> float:
    """Largest absolute difference between two quantile summaries."""
    qa = np.asarray(qa)
    qb = np.asarray(qb)
    if qa.shape != qb.shape:
        raise ValueError("quantile summaries must have identical shape")
    return float(np.max(np.abs(qa - qb)))


@dataclass
class GenerationRecord:
    generation: int
    evaluations: int
    best_fitness: float
    mean_fitness: float
    pool_distance: float
    operator_counts: Dict[str, int] = field(default_factory=dict)


@dataclass
class ConvergenceTrace:
    """Per-generation progress of one run."""

    records: List[GenerationRecord] = field(default_factory=list)
    best: Optional[EvaluatedIndividual] = None
    stop_reason: str = ""
    diagnostics: List[str] = field(default_factory=list)

    @property
    def generations(self) -> int:
        """Number of offspring generations executed (the initial population
        is generation 0)."""
        return self.records[-1].generation if self.records else 0

    @property
    def evaluations(self) -> int:
        return self.records[-1].evaluations if self.records else 0

    def to_csv(self, trial: int) -> str:
        """Render the trace in the trial CSV schema (with header)."""
        out = io.StringIO()
        out.write(TRACE_HEADER + "\n")
        for r in self.records:
            out.write(
                f"{trial},{r.generation},{r.evaluations},"
                f"{r.best_fitness!r},{r.pool_distance!r}\n"
            )
        return out.getvalue()


class Engine:
    """Stateful driver of one optimization run."""

    def __init__(self, problem: Problem, config: RunConfig):
        if config.pool_size > config.init_size:
            raise ValueError("pool_size cannot exceed init_size")
        self.problem = problem
        self.config = config
        # replaced by the pool-spread partition once a population exists
        self.grid = IntervalGrid.build(problem.space, config.partitions)
        self.rng = np.random.Generator(np.random.PCG64(config.seed))
        self.archive = ScoringArchive(self.grid)
        self.trace = ConvergenceTrace()
        self.generation = 0
        self.evaluations = 0
        self.pool: Optional[ElitePool] = None
        self._prev_quantiles: Optional[np.ndarray] = None
        self._memory_x = np.empty((0, problem.space.dim))
        self._memory_f = np.empty(0)
        # sampling reach past the scored evidence, in cells; also how far
        # the next span opens beyond it
        self._reach = max(1, config.partitions // 50)
        self._span_hint: Optional[tuple] = None

    def _evaluate(self, x: np.ndarray) -> np.ndarray:
        if self.problem.exclusive_bounds:
            space = self.problem.space
            inward_lo = np.nextafter(space.lower, space.upper)
            inward_hi = np.nextafter(space.upper, space.lower)
            x = np.clip(x, inward_lo, inward_hi)
        f = np.asarray(self.problem.batch(x), dtype=np.float64)
        if f.shape != (x.shape[0],):
            raise ValueError(
                f"fitness batch returned shape {f.shape}, expected ({x.shape[0]},)"
            )
        bad = ~np.isfinite(f)
        if bad.any():
            i = int(np.argmax(bad))
            raise FloatingPointError(
                f"non-finite fitness {f[i]} for input {x[i].tolist()} "
                f"of problem {self.problem.name}"
            )
        self.evaluations += f.size
        return f

    def _focus_grid(self) -> IntervalGrid:
        """Partition of the competitive set's per-dimension spread.

        The span shrink-wraps the pool together with the remembered
        near-misses, so it approximates the sublevel set of the memory
        margin rather than the elite cluster alone.  Elites concentrate
        on one side of a flat dimension long before the evidence does;
        spanning the rememberings keeps the out-populated side partitioned
        and sampled until it is genuinely outclassed, instead of clipping
        it off at its first thin generation.  The previous span hint
        (scored evidence plus reach) is unioned in as well, so the span
        can re-open past the population where the threshold still excluded
        cells at an edge.  Dimensions whose spread collapsed below float
        resolution get a hair of width back (clipped to the box) so cell
        arithmetic stays finite; the full box rides along for the uniform
        sampler.
        """
        space = self.problem.space
        xs = self.pool.xs
        lo = xs.min(axis=0)
        hi = xs.max(axis=0)
        if self._memory_x.shape[0]:
            lo = np.minimum(lo, self._memory_x.min(axis=0))
            hi = np.maximum(hi, self._memory_x.max(axis=0))
        if self._span_hint is not None:
            lo = np.minimum(lo, self._span_hint[0])
            hi = np.maximum(hi, self._span_hint[1])
        lo = np.maximum(lo, space.lower)
        hi = np.minimum(hi, space.upper)
        floor = np.maximum(np.maximum(np.abs(lo), np.abs(hi)), 1.0) * 1e-12
        narrow = (hi - lo) < floor
        if narrow.any():
            lo = np.where(narrow, np.maximum(space.lower, lo - floor), lo)
            hi = np.where(narrow, np.minimum(space.upper, hi + floor), hi)
        return IntervalGrid.build(SearchSpace(lo, hi), self.config.partitions, box=space)

    def _rebuild_archive(self, grid: IntervalGrid, xs: np.ndarray, fs: np.ndarray) -> ScoringArchive:
        """Fresh archive over ``grid`` holding the unique in-span rows of xs.

        Deduplication keeps first occurrences (point order is the archive's
        tiebreak), so re-offering a remembered point cannot fill both slots
        of its cell with one individual.
        """
        archive = ScoringArchive(grid)
        inside = ((xs >= grid.space.lower) & (xs <= grid.space.upper)).all(axis=1)
        xs = xs[inside]
        fs = fs[inside]
        if xs.shape[0]:
            _, first = np.unique(xs, axis=0, return_index=True)
            keep = np.sort(first)
            archive.update(xs[keep], fs[keep])
        return archive

    def _steer(self, scores: np.ndarray, good) -> tuple:
        """Span hint for the next partition.

        Rows whose threshold excluded at least one cell anchor the hint on
        the scored evidence; the rest (every cell tied at the threshold,
        common when credits are sparse) fall back to the pool's spread.
        The reach keeps a thin lip open past the anchor, so edge cells that
        keep scoring can walk the span outward instead of being pinned at
        the boundary they sit on.
        """
        p = scores.shape[1]
        rank = max(int(np.ceil(GOOD_QUANTILE * p)), 1) - 1
        thresholds = np.sort(scores, axis=1)[:, rank]
        informative = (scores < thresholds[:, None]).any(axis=1)
        lo = np.where(informative, good.starts_flat[good.offsets[:-1]], self.pool.xs.min(axis=0))
        hi = np.where(informative, good.ends_flat[good.offsets[1:] - 1], self.pool.xs.max(axis=0))
        reach = self._reach * self.grid.cell_width
        return lo - reach, hi + reach

    def initialize(self) -> None:
        """Evaluate the random initial population and record generation 0."""
        cfg = self.config
        x0 = init_population(self.problem.space, cfg.init_size, self.rng)
        f0 = self._evaluate(x0)
        self.pool = ElitePool.from_evaluations(x0, f0, cfg.pool_size)
        self.grid = self._focus_grid()
        self.archive = self._rebuild_archive(self.grid, x0, f0)
        self._memory_x, self._memory_f = self.archive.members()
        self._prev_quantiles = coordinate_quantiles(self.pool.xs, cfg.quantile_levels)
        self.trace.records.append(
            GenerationRecord(
                generation=0,
                evaluations=self.evaluations,
                best_fitness=float(self.pool.fs[0]),
                mean_fitness=float(self.pool.fs.mean()),
                pool_distance=float("inf"),
                operator_counts={},
            )
        )

    def step(self) -> GenerationRecord:
        """Run one offspring generation; returns its record."""
        if self.pool is None:
            self.initialize()
        cfg = self.config
        # stale rememberings lose their vote once the pool outruns them;
        # the margin of one pool fitness-range keeps the near-miss shell
        # around the pool scoring, without which credit rows go sparse
        live = self._memory_f <= 2.0 * self.pool.fs[-1] - self.pool.fs[0]
        self._memory_x = self._memory_x[live]
        self._memory_f = self._memory_f[live]
        self.grid = self._focus_grid()
        self.archive = self._rebuild_archive(
            self.grid,
            np.concatenate([self._memory_x, self.pool.xs]),
            np.concatenate([self._memory_f, self.pool.fs]),
        )
        scores = score_cells(self.archive, self.archive.worst_f)
        good = select_good_intervals(scores, self.grid, dilate=self._reach)
        self._span_hint = self._steer(scores, good)
        model = estimate_sampling_model(self.pool, good, self.grid)
        batches = generate_offspring(self.pool, model, self.grid, cfg.batch_base, self.rng)
        counts = {b.origin: len(b) for b in batches}
        for b in batches:
            if b.note:
                self.trace.diagnostics.append(f"generation {self.generation + 1}: {b.note}")
        x_off = np.concatenate([b.x for b in batches])
        f_off = self._evaluate(x_off) if x_off.shape[0] else np.empty(0)
        # uniform-box strays outside the span cannot be binned this round;
        # if selected they re-enter through the pool after the next rebuild
        span = self.grid.space
        inside = ((x_off >= span.lower) & (x_off <= span.upper)).all(axis=1)
        self.archive.update(x_off[inside], f_off[inside])
        self._memory_x, self._memory_f = self.archive.members()
        self.pool = select_next_pool(self.pool, x_off, f_off, cfg.pool_size)
        quantiles = coordinate_quantiles(self.pool.xs, cfg.quantile_levels)
        dist = pool_distance(self._prev_quantiles, quantiles)
        self._prev_quantiles = quantiles
        self.generation += 1
        record = GenerationRecord(
            generation=self.generation,
            evaluations=self.evaluations,
            best_fitness=float(self.pool.fs[0]),
            mean_fitness=float(self.pool.fs.mean()),
            pool_distance=dist,
            operator_counts=counts,
        )
        self.trace.records.append(record)
        return record

    def run(self) -> ConvergenceTrace:
        """Iterate until the quantile summary settles or the loop cap hits."""
        if self.pool is None:
            self.initialize()
        cfg = self.config
        self.trace.stop_reason = "loop-limit"
        while self.generation < cfg.max_generations:
            record = self.step()
            if record.pool_distance <= cfg.epsilon:
                self.trace.stop_reason = "threshold"
                break
        self.trace.best = self.pool.best
        log.info(
            "%s: stop=%s generations=%d evaluations=%d best=%.6g",
            self.problem.name,
            self.trace.stop_reason,
            self.generation,
            self.evaluations,
            self.pool.fs[0],
        )
        return self.trace


def run(problem: Problem, config: RunConfig) -> ConvergenceTrace:
    """Convenience wrapper: build an Engine and run it to completion."""
    return Engine(problem, config).run()
