"""Interval partition of the searched span, cell scoring, and sampling distributions.

Each dimension is split into ``partitions`` equal cells.  A small archive
keeps the two best individuals ever seen per cell of the first dimension
plus the single worst individual; scoring those members against the grid
yields a per-dimension score per cell, the top quarter of which (by a
nearest-rank 75% quantile threshold) become "good" cells.  Runs of adjacent
good cells merge into good intervals, from which two discrete sampling
distributions are estimated over the current pool: one over members, one
over intervals per dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from . import backends
from .core import ElitePool, SearchSpace

__all__ = [
    "IntervalGrid",
    "ScoringArchive",
    "GoodIntervals",
    "SamplingModel",
    "archive_weights",
    "score_cells",
    "select_good_intervals",
    "member_probabilities",
    "interval_probabilities",
    "estimate_sampling_model",
    "GOOD_QUANTILE",
]

# score threshold for the good-cell cut: nearest-rank quantile level
GOOD_QUANTILE = 0.75


@dataclass(frozen=True)
class IntervalGrid:
    """Uniform partition of every dimension into the same number of cells.

    boundaries[i, j] is the j-th cell edge of dimension i; the last edge is
    forced to the exact upper bound so that in-span points always land in a
    cell.  Cells are half-open except the last.

    ``space`` is the span actually partitioned; ``box`` is the full search
    box, kept separately because the engine re-partitions the pool's
    current spread each generation while pure random sampling must keep
    covering the whole box.  They coincide unless a caller says otherwise.
    """

    space: SearchSpace
    partitions: int
    cell_width: np.ndarray
    boundaries: np.ndarray
    box: SearchSpace = None

    @classmethod
    def build(cls, space: SearchSpace, partitions: int, box: SearchSpace = None) -> "IntervalGrid":
        partitions = int(partitions)
        if partitions < 1:
            raise ValueError("partitions must be positive")
        width = (space.upper - space.lower) / partitions
        edges = space.lower[:, None] + width[:, None] * np.arange(partitions + 1)
        edges[:, -1] = space.upper
        width.flags.writeable = False
        edges.flags.writeable = False
        return cls(space, partitions, width, edges, box if box is not None else space)

    @property
    def dim(self) -> int:
        return self.space.dim

    def locate(self, dim: int, value: float) -> int:
        """0-based cell index of ``value`` along dimension ``dim``.

        Cell k covers [lower + k*w, lower + (k+1)*w), except the last cell
        which also contains the upper bound.  Raises for out-of-box values.
        """
        lo = self.space.lower[dim]
        hi = self.space.upper[dim]
        if not lo <= value <= hi:
            raise ValueError(
                f"value {value} outside bounds [{lo}, {hi}] of dimension {dim}"
            )
        k = int(np.floor((value - lo) / self.cell_width[dim]))
        return min(max(k, 0), self.partitions - 1)

    def assign(self, x: np.ndarray) -> np.ndarray:
        """Cell indices for points x of shape (b, dim); int64 (b, dim)."""
        x = np.ascontiguousarray(x, dtype=np.float64)
        return backends.active().assign_cells(
            x, self.space.lower, self.cell_width, self.partitions
        )


class ScoringArchive:
    """Two best-ever individuals per first-dimension cell, plus the worst.

    Slots are ordered best-first inside each cell; +inf fitness marks an
    empty slot.  Fitness ties keep the earlier arrival.  The worst slot
    holds the highest-fitness individual ever offered, again keeping the
    earlier one on ties.
    """

    __slots__ = ("grid", "slot_f", "slot_x", "worst_x", "worst_f")

    def __init__(self, grid: IntervalGrid):
        self.grid = grid
        self.slot_f = np.full((grid.partitions, 2), np.inf)
        self.slot_x = np.zeros((grid.partitions, 2, grid.dim))
        self.worst_x = None
        self.worst_f = -np.inf

    def update(self, x: np.ndarray, f: np.ndarray) -> None:
        """Fold a batch of evaluated individuals into the archive."""
        x = np.ascontiguousarray(x, dtype=np.float64)
        f = np.ascontiguousarray(f, dtype=np.float64)
        if f.size == 0:
            return
        kern = backends.active()
        first_col = np.ascontiguousarray(x[:, :1])
        cells = kern.assign_cells(
            first_col, self.grid.space.lower[:1], self.grid.cell_width[:1], self.grid.partitions
        )[:, 0]
        self.slot_f, self.slot_x = kern.update_slots(
            self.slot_f, self.slot_x, np.ascontiguousarray(cells), f, x
        )
        top = int(np.argmax(f))
        if f[top] > self.worst_f:
            self.worst_f = float(f[top])
            self.worst_x = x[top].copy()

    def members(self):
        """All stored individuals: filled slots in cell order, worst last.

        Returns (xs, fs) with xs of shape (m, dim).  Cell slots come out in
        ascending cell order, best slot before second; the worst individual
        is appended even when it also occupies a slot.
        """
        mask = np.isfinite(self.slot_f).ravel()
        xs = self.slot_x.reshape(-1, self.grid.dim)[mask]
        fs = self.slot_f.ravel()[mask]
        if self.worst_x is not None:
            xs = np.concatenate([xs, self.worst_x[None, :]])
            fs = np.concatenate([fs, [self.worst_f]])
        return xs, fs

    def __len__(self) -> int:
        n = int(np.isfinite(self.slot_f).sum())
        return n + (0 if self.worst_x is None else 1)


def archive_weights(fs: np.ndarray, worst_seen: float) -> np.ndarray:
    """Same weighting as fitness_scores, over archive member fitnesses."""
    fs = np.asarray(fs, dtype=np.float64)
    denom = fs.size * worst_seen - fs.sum()
    if not denom > 0:
        return np.full(fs.size, 1.0 / fs.size)
    return (worst_seen - fs) / denom


def score_cells(archive: ScoringArchive, worst_seen: float) -> np.ndarray:
    """Score every (dimension, cell) pair from the archive's members.

    For each dimension i, each cell with at least two members contributes
    credit through its two lowest-fitness members x1, x2 (weights w1 >= w2):
    for every dimension k, the cell holding x1's k-th coordinate gains
    w1 + w2 when x2's coordinate shares it, else 2 * w1.  Returns the
    (dim, partitions) score matrix.
    """
    grid = archive.grid
    xs, fs = archive.members()
    s = np.zeros((grid.dim, grid.partitions))
    if fs.size < 2:
        return s
    weights = archive_weights(fs, worst_seen)
    cells_t = np.ascontiguousarray(grid.assign(xs).T)
    order = np.ascontiguousarray(np.argsort(fs, kind="stable").astype(np.int64))
    return backends.active().score_accumulate(cells_t, order, weights, grid.partitions)


@dataclass(frozen=True)
class GoodIntervals:
    """Merged runs of good cells per dimension, with flat views for kernels.

    starts/ends: list over dimensions of interval bound arrays; cell_map:
    (dim, partitions) int64 mapping each cell to its covering interval's
    local index, -1 where the cell is not good; offsets: (dim + 1,) prefix
    of interval counts; starts_flat/ends_flat: bounds concatenated across
    dimensions in order.
    """

    starts: List[np.ndarray]
    ends: List[np.ndarray]
    cell_map: np.ndarray
    offsets: np.ndarray
    starts_flat: np.ndarray
    ends_flat: np.ndarray

    @property
    def counts(self) -> np.ndarray:
        return np.diff(self.offsets)

    def covers(self, cells: np.ndarray) -> np.ndarray:
        """Local interval index for each coordinate's cell; -1 if not good."""
        dims = np.arange(cells.shape[1])
        return self.cell_map[dims, cells]


def select_good_intervals(scores: np.ndarray, grid: IntervalGrid, dilate: int = 0) -> GoodIntervals:
    """Threshold scores at the per-dimension 75% nearest-rank quantile.

    Cells scoring at or above the threshold are good; adjacent good cells
    merge into one interval.  Every dimension keeps at least one interval
    (an all-equal row marks the whole dimension good).

    ``dilate`` widens every good run by that many cells on each side
    before merging, giving samplers reach just past the scored evidence;
    the engine uses it so a decaying partition can still walk toward an
    optimum sitting outside the current population.
    """
    n, p = scores.shape
    rank = max(int(np.ceil(GOOD_QUANTILE * p)), 1) - 1
    thresholds = np.sort(scores, axis=1)[:, rank]
    good = scores >= thresholds[:, None]
    if dilate > 0:
        # windowed any() via prefix sums: cell j is good when any cell in
        # [j - dilate, j + dilate] was
        run = np.zeros((n, p + 1), dtype=np.int64)
        np.cumsum(good, axis=1, out=run[:, 1:])
        lo = np.clip(np.arange(p) - dilate, 0, p)
        hi = np.clip(np.arange(p) + dilate + 1, 0, p)
        good = (run[:, hi] - run[:, lo]) > 0
    cell_map = np.full((n, p), -1, dtype=np.int64)
    starts, ends = [], []
    for i in range(n):
        mask = good[i]
        # run boundaries of the good mask
        diff = np.diff(mask.astype(np.int8))
        run_lo = np.flatnonzero(diff == 1) + 1
        run_hi = np.flatnonzero(diff == -1) + 1
        if mask[0]:
            run_lo = np.concatenate([[0], run_lo])
        if mask[-1]:
            run_hi = np.concatenate([run_hi, [p]])
        starts.append(grid.boundaries[i, run_lo])
        ends.append(grid.boundaries[i, run_hi])
        for j, (a, b) in enumerate(zip(run_lo, run_hi)):
            cell_map[i, a:b] = j
    counts = np.array([a.size for a in starts], dtype=np.int64)
    offsets = np.concatenate([[0], np.cumsum(counts)])
    return GoodIntervals(
        starts=starts,
        ends=ends,
        cell_map=cell_map,
        offsets=offsets,
        starts_flat=np.ascontiguousarray(np.concatenate(starts)),
        ends_flat=np.ascontiguousarray(np.concatenate(ends)),
    )


def member_probabilities(pool: ElitePool, good: GoodIntervals, cells: np.ndarray) -> np.ndarray:
    """Selection probabilities over pool members.

    Each member counts how many of its coordinates lie inside a good
    interval of their dimension; probabilities are those counts normalized.
    If no member has any coordinate in a good interval, fall back to
    uniform.  ``cells`` is the (size, dim) cell assignment of the pool.
    """
    inside = good.covers(cells) >= 0
    counts = inside.sum(axis=1).astype(np.float64)
    total = counts.sum()
    if total <= 0:
        return np.full(len(pool), 1.0 / len(pool))
    return counts / total


def interval_probabilities(good: GoodIntervals, cells: np.ndarray):
    """Per-dimension selection probabilities over good intervals.

    Probability of an interval is the share of the given individuals whose
    coordinate in that dimension falls inside it; dimensions where no
    member hits any good interval fall back to uniform over that
    dimension's intervals.  Returns (counts, probs), both lists over
    dimensions.
    """
    idx = good.covers(cells)
    counts, probs = [], []
    for i in range(cells.shape[1]):
        k = int(good.counts[i])
        col = idx[:, i]
        q = np.bincount(col[col >= 0], minlength=k).astype(np.float64)
        total = q.sum()
        counts.append(q)
        if total <= 0:
            probs.append(np.full(k, 1.0 / k))
        else:
            probs.append(q / total)
    return counts, probs


@dataclass(frozen=True)
class SamplingModel:
    """Everything the offspring operators need, estimated once per generation.

    member_probs / member_cum: distribution over pool members and its
    cumulative sums; interval_probs / interval_cum: per-dimension interval
    distributions, ``interval_cum`` flattened in dimension order alongside
    ``good.offsets``; pool_cells: cached cell assignment of the pool;
    pool_interval: cached good-interval index per pool coordinate (-1 when
    outside all good intervals).
    """

    good: GoodIntervals
    member_probs: np.ndarray
    member_cum: np.ndarray
    interval_counts: List[np.ndarray]
    interval_probs: List[np.ndarray]
    interval_cum: List[np.ndarray]
    pool_cells: np.ndarray
    pool_interval: np.ndarray


def estimate_sampling_model(
    pool: ElitePool,
    good: GoodIntervals,
    grid: IntervalGrid,
    evidence: Optional[np.ndarray] = None,
) -> SamplingModel:
    """Build the generation's sampling model.

    Member probabilities always come from the pool; interval occupancy is
    taken over ``evidence`` rows when given (e.g. the scored near-miss
    shell), so a region the elites have temporarily vacated keeps a share
    of the draw as long as it stays competitive, instead of dropping to
    zero the first generation it loses its last elite.
    """
    cells = grid.assign(pool.xs)
    member_probs = member_probabilities(pool, good, cells)
    occ = cells if evidence is None else grid.assign(evidence)
    counts, probs = interval_probabilities(good, occ)
    return SamplingModel(
        good=good,
        member_probs=member_probs,
        member_cum=np.cumsum(member_probs),
        interval_counts=counts,
        interval_probs=probs,
        interval_cum=[np.cumsum(p) for p in probs],
        pool_cells=cells,
        pool_interval=good.covers(cells),
    )
