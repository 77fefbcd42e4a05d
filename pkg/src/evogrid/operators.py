"""Offspring operators.

Eight operators run per generation, in the fixed order of OPERATOR_ORDER,
producing between 31 and 32 times ``batch_base`` offspring in total (the
locally adjusting mutation skips repetitions whose parent needs no change).

Determinism contract: every operator consumes random draws in a documented,
shape-stable order (parent indices first, then per-coordinate choice
uniforms, then value uniforms), drawing full (count, dim) matrices even
when a mask later discards entries.  Given the same generator state and
inputs, the emitted batches are bit-identical on every backend.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from . import backends
from .core import ElitePool
from .grid import IntervalGrid, SamplingModel

__all__ = [
    "OffspringBatch",
    "OPERATOR_ORDER",
    "crossover_importance",
    "mutate_local",
    "mutate_entire",
    "interpolate",
    "sample_importance",
    "sample_uniform",
    "crossover_random",
    "mutate_random",
    "generate_offspring",
]

log = logging.getLogger(__name__)

# canonical per-generation execution order; multipliers of batch_base are
# 2, <=1, 2, 1, 1, 5, 10, 10
OPERATOR_ORDER = (
    "crossover_importance",
    "mutate_local",
    "mutate_entire",
    "interpolate",
    "sample_importance",
    "sample_uniform",
    "crossover_random",
    "mutate_random",
)


@dataclass
class OffspringBatch:
    """Offspring of one operator, tagged with its origin."""

    origin: str
    x: np.ndarray
    note: Optional[str] = None

    def __len__(self) -> int:
        return self.x.shape[0]


def _empty(origin: str, dim: int, note: str) -> OffspringBatch:
    log.debug("%s skipped: %s", origin, note)
    return OffspringBatch(origin, np.empty((0, dim)), note)


def _draw_members(rng, cum: np.ndarray, count: int) -> np.ndarray:
    """Sample member indices by inverse CDF over cumulative probabilities.

    Entries with zero probability are never chosen except through the final
    clip, which only engages when rounding leaves cum[-1] below a drawn
    uniform (order of 1 ulp).
    """
    u = rng.random(count)
    idx = np.searchsorted(cum, u, side="right")
    return np.minimum(idx, cum.size - 1)


def _draw_distinct_pairs(rng, cum: np.ndarray, count: int, max_rounds: int = 100):
    """Pairs of member indices with both entries distinct.

    Collisions are redrawn (second index only) for up to ``max_rounds``
    vectorized rounds; any survivors fall back to the cyclically next
    member, keeping the routine total and deterministic.
    """
    i1 = _draw_members(rng, cum, count)
    i2 = _draw_members(rng, cum, count)
    for _ in range(max_rounds):
        clash = np.nonzero(i1 == i2)[0]
        if clash.size == 0:
            return i1, i2
        u = rng.random(clash.size)
        i2[clash] = np.minimum(np.searchsorted(cum, u, side="right"), cum.size - 1)
    clash = i1 == i2
    i2[clash] = (i1[clash] + 1) % cum.size
    return i1, i2


def _draw_intervals(model: SamplingModel, u: np.ndarray) -> np.ndarray:
    """Good-interval index per coordinate from pre-drawn uniforms (b, dim)."""
    out = np.empty(u.shape, dtype=np.int64)
    for i, cum in enumerate(model.interval_cum):
        idx = np.searchsorted(cum, u[:, i], side="right")
        out[:, i] = np.minimum(idx, cum.size - 1)
    return out


def _interval_values(model: SamplingModel, idx: np.ndarray, u: np.ndarray) -> np.ndarray:
    good = model.good
    return backends.active().sample_in_intervals(
        np.ascontiguousarray(idx), good.starts_flat, good.ends_flat, good.offsets, u
    )


def crossover_importance(
    pool: ElitePool, model: SamplingModel, grid: IntervalGrid, base: int, rng
) -> OffspringBatch:
    """Exchange good-interval coordinates between weighted parent pairs.

    For parents x1, x2 (distinct, drawn by member probabilities) the first
    offspring copies x2 wherever x2's coordinate sits in a good interval
    and keeps x1 elsewhere; the second swaps the roles.  ``base``
    repetitions yield 2 * base offspring.
    """
    if len(pool) < 2:
        return _empty("crossover_importance", pool.dim, "pool has fewer than 2 members")
    i1, i2 = _draw_distinct_pairs(rng, model.member_cum, base)
    in1 = model.pool_interval[i1] >= 0
    in2 = model.pool_interval[i2] >= 0
    x1 = pool.xs[i1]
    x2 = pool.xs[i2]
    y1 = np.where(in2, x2, x1)
    y2 = np.where(in1, x1, x2)
    return OffspringBatch("crossover_importance", np.concatenate([y1, y2]))


def mutate_local(
    pool: ElitePool, model: SamplingModel, grid: IntervalGrid, base: int, rng
) -> OffspringBatch:
    """Move only the coordinates that lie outside every good interval.

    Each such coordinate is resampled uniformly inside a good interval
    drawn from its dimension's interval probabilities; repetitions whose
    parent is entirely inside good intervals produce no offspring, so the
    batch holds at most ``base`` rows.
    """
    idx = _draw_members(rng, model.member_cum, base)
    choice_u = rng.random((base, pool.dim))
    value_u = rng.random((base, pool.dim))
    outside = model.pool_interval[idx] < 0
    chosen = _draw_intervals(model, choice_u)
    target = np.where(outside, chosen, 0)
    resampled = _interval_values(model, target, value_u)
    x = np.where(outside, resampled, pool.xs[idx])
    keep = outside.any(axis=1)
    note = None
    if not keep.all():
        note = f"mutate_local: {int((~keep).sum())} of {base} parents needed no adjustment"
    return OffspringBatch("mutate_local", x[keep], note)


def mutate_entire(
    pool: ElitePool, model: SamplingModel, grid: IntervalGrid, base: int, rng
) -> OffspringBatch:
    """Resample every coordinate within a good interval.

    Coordinates already inside a good interval jitter within that same
    interval; the rest land in an interval drawn from the dimension's
    interval probabilities.  2 * base repetitions.
    """
    count = 2 * base
    idx = _draw_members(rng, model.member_cum, count)
    choice_u = rng.random((count, pool.dim))
    value_u = rng.random((count, pool.dim))
    own = model.pool_interval[idx]
    chosen = _draw_intervals(model, choice_u)
    target = np.where(own >= 0, own, chosen)
    return OffspringBatch("mutate_entire", _interval_values(model, target, value_u))


def interpolate(
    pool: ElitePool, model: SamplingModel, grid: IntervalGrid, base: int, rng
) -> OffspringBatch:
    """Sample between the good intervals of two weighted parents.

    Per coordinate: when both parents sit in good intervals with local
    indices k and m, draw inside interval floor((k + m) / 2); when exactly
    one does, use its interval; when neither does, draw an interval from
    the dimension's probabilities.  ``base`` repetitions; the two parents
    are drawn independently.
    """
    i1 = _draw_members(rng, model.member_cum, base)
    i2 = _draw_members(rng, model.member_cum, base)
    choice_u = rng.random((base, pool.dim))
    value_u = rng.random((base, pool.dim))
    k1 = model.pool_interval[i1]
    k2 = model.pool_interval[i2]
    chosen = _draw_intervals(model, choice_u)
    both = (k1 >= 0) & (k2 >= 0)
    mid = (k1 + k2) // 2
    target = np.where(both, mid, np.where(k1 >= 0, k1, np.where(k2 >= 0, k2, chosen)))
    return OffspringBatch("interpolate", _interval_values(model, target, value_u))


def sample_importance(
    pool: ElitePool, model: SamplingModel, grid: IntervalGrid, base: int, rng
) -> OffspringBatch:
    """Draw whole individuals coordinate-wise from the good intervals."""
    choice_u = rng.random((base, pool.dim))
    value_u = rng.random((base, pool.dim))
    target = _draw_intervals(model, choice_u)
    return OffspringBatch("sample_importance", _interval_values(model, target, value_u))


def sample_uniform(
    pool: ElitePool, model: SamplingModel, grid: IntervalGrid, base: int, rng
) -> OffspringBatch:
    """Uniform draws over the whole box, never the narrower current span;
    5 * base rows."""
    space = grid.box if grid.box is not None else grid.space
    u = rng.random((5 * base, space.dim))
    # minimum guards the one-ulp overshoot of lower + width * u
    x = np.minimum(space.lower + (space.upper - space.lower) * u, space.upper)
    return OffspringBatch("sample_uniform", x)


def crossover_random(
    pool: ElitePool, model: SamplingModel, grid: IntervalGrid, base: int, rng
) -> OffspringBatch:
    """Uniform-parent coordinate swap; 5 * base repetitions, 2 each.

    Each coordinate independently swaps between the two (distinct,
    equiprobable) parents with probability 1/2, producing complementary
    offspring y1, y2.
    """
    if len(pool) < 2:
        return _empty("crossover_random", pool.dim, "pool has fewer than 2 members")
    reps = 5 * base
    uniform_cum = np.arange(1, len(pool) + 1) / len(pool)
    i1, i2 = _draw_distinct_pairs(rng, uniform_cum, reps)
    swap = rng.random((reps, pool.dim)) < 0.5
    x1 = pool.xs[i1]
    x2 = pool.xs[i2]
    y1 = np.where(swap, x2, x1)
    y2 = np.where(swap, x1, x2)
    return OffspringBatch("crossover_random", np.concatenate([y1, y2]))


def mutate_random(
    pool: ElitePool, model: SamplingModel, grid: IntervalGrid, base: int, rng
) -> OffspringBatch:
    """Per-coordinate resampling inside the parent's home cell of the
    predefined box partition.

    Parents are drawn uniformly; each coordinate is replaced, with
    probability 1/2, by a uniform draw from the fixed-width cell it
    occupies in the partition of the whole box.  Deliberately not the
    focus span's cells: those contract with the span, which would shrink
    this into one more micro-refiner.  Against the original partition the
    perturbation keeps its scale for the entire run, so a coordinate the
    elites settled on the wrong side of a boundary can still jump back.
    10 * base repetitions.
    """
    reps = 10 * base
    uniform_cum = np.arange(1, len(pool) + 1) / len(pool)
    idx = _draw_members(rng, uniform_cum, reps)
    swap = rng.random((reps, pool.dim)) < 0.5
    value_u = rng.random((reps, pool.dim))
    home = IntervalGrid.build(grid.box, grid.partitions)
    cells = home.assign(pool.xs[idx])
    resampled = backends.active().sample_in_cells(cells, home.boundaries, value_u)
    x = np.where(swap, resampled, pool.xs[idx])
    return OffspringBatch("mutate_random", x)


_OPERATORS = {
    "crossover_importance": crossover_importance,
    "mutate_local": mutate_local,
    "mutate_entire": mutate_entire,
    "interpolate": interpolate,
    "sample_importance": sample_importance,
    "sample_uniform": sample_uniform,
    "crossover_random": crossover_random,
    "mutate_random": mutate_random,
}


def generate_offspring(
    pool: ElitePool, model: SamplingModel, grid: IntervalGrid, base: int, rng
) -> List[OffspringBatch]:
    """Run all operators in canonical order against one generator."""
    return [_OPERATORS[name](pool, model, grid, base, rng) for name in OPERATOR_ORDER]
