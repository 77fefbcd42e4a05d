"""Shared builders and brute-force oracles for the test suite."""

import numpy as np

from evogrid.core import ElitePool, Problem, SearchSpace, select_next_pool
from evogrid.grid import (
    GOOD_QUANTILE,
    IntervalGrid,
    ScoringArchive,
    estimate_sampling_model,
    score_cells,
    select_good_intervals,
)


class State:
    """Bundle of everything one generation of operators consumes."""

    def __init__(self, space, grid, pool, archive, scores, good, model):
        self.space = space
        self.grid = grid
        self.pool = pool
        self.archive = archive
        self.scores = scores
        self.good = good
        self.model = model


def random_space(rng, n):
    lower = rng.uniform(-5.0, 0.0, size=n)
    upper = lower + rng.uniform(0.5, 10.0, size=n)
    return SearchSpace(lower, upper)


def random_points(rng, space, count):
    return space.lower + (space.upper - space.lower) * rng.random((count, space.dim))


def random_state(rng, n=3, partitions=6, pool_size=12, extra_batches=1, batch=8):
    """Pool, archive, scores, good intervals, and sampling model from random data.

    Mirrors the engine's bookkeeping: every evaluated batch feeds both the
    pool (truncation selection) and the archive.
    """
    space = random_space(rng, n)
    grid = IntervalGrid.build(space, partitions)
    x = random_points(rng, space, pool_size)
    f = rng.random(pool_size) * 10.0
    pool = ElitePool.from_evaluations(x, f, pool_size)
    archive = ScoringArchive(grid)
    archive.update(x, f)
    for _ in range(extra_batches):
        xb = random_points(rng, space, batch)
        fb = rng.random(batch) * 10.0
        archive.update(xb, fb)
        pool = select_next_pool(pool, xb, fb, pool_size)
    scores = score_cells(archive, pool.worst_seen)
    good = select_good_intervals(scores, grid)
    model = estimate_sampling_model(pool, good, grid)
    return State(space, grid, pool, archive, scores, good, model)


def score_oracle(xs, fs, weights, grid):
    """Triple-loop score matrix over (dimension, cell, member pair).

    Structured deliberately unlike the vectorized kernels: explicit loops
    plus per-value locate calls.
    """
    n, p = grid.dim, grid.partitions
    order = np.argsort(fs, kind="stable")
    s = np.zeros((n, p))
    for i in range(n):
        for j in range(p):
            members = [m for m in order if grid.locate(i, xs[m, i]) == j]
            if len(members) < 2:
                continue
            m1, m2 = members[0], members[1]
            for k in range(n):
                c1 = grid.locate(k, xs[m1, k])
                c2 = grid.locate(k, xs[m2, k])
                if c1 == c2:
                    s[k, c1] += weights[m1] + weights[m2]
                else:
                    s[k, c1] += 2.0 * weights[m1]
    return s


def good_cells_oracle(scores):
    """Per-dimension set of qualifying cells under the nearest-rank cut."""
    import math

    n, p = scores.shape
    rank = max(math.ceil(GOOD_QUANTILE * p), 1)
    out = []
    for i in range(n):
        thr = sorted(scores[i])[rank - 1]
        out.append({j for j in range(p) if scores[i][j] >= thr})
    return out


def good_cell_sets(good, partitions):
    """Cells covered by the merged intervals, per dimension."""
    return [
        {j for j in range(partitions) if good.cell_map[i, j] >= 0}
        for i in range(good.cell_map.shape[0])
    ]


def sphere_problem(dim=4, half_width=5.0):
    space = SearchSpace.cube(dim, -half_width, half_width)
    return Problem(name="sphere", space=space, batch=lambda x: np.sum(x * x, axis=1))
