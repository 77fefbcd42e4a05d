"""Pure-numpy kernels for the per-coordinate hot loops.

This module is the reference implementation; ``_kernels`` (Cython) mirrors it.
Both backends must agree bit-for-bit, so every function here fixes not just
the result but the floating-point expression order.  Keep the arithmetic in
the exact written form (no algebraic rewrites) when touching either side.

All kernels take C-contiguous float64 / int64 arrays and never consume
random state themselves; callers pass pre-drawn uniforms.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "assign_cells",
    "update_slots",
    "score_accumulate",
    "sample_in_intervals",
    "sample_in_cells",
]


def assign_cells(x, lower, width, n_cells):
    """Map coordinates to 0-based cell indices of a uniform partition.

    x: (b, n) points, lower/width: (n,) per-dimension cell origin and width.
    Cells are half-open [lo, lo+w) except the last, which also takes the
    upper boundary; out-of-range values clip to the nearest cell.
    """
    cells = np.floor((x - lower) / width).astype(np.int64)
    np.clip(cells, 0, n_cells - 1, out=cells)
    return cells


def update_slots(slot_f, slot_x, cells, f, x):
    """Fold a batch into the per-cell two-best archive slots.

    slot_f: (p, 2) fitness per cell ordered best-first (+inf marks an empty
    slot), slot_x: (p, 2, n) the matching points.  cells/f/x describe the
    batch.  Ties keep the earlier arrival: an incoming member displaces a
    stored one only with strictly lower fitness.  Returns new arrays.
    """
    p = slot_f.shape[0]
    n = slot_x.shape[2]
    b = cells.shape[0]
    all_cells = np.concatenate([np.repeat(np.arange(p, dtype=np.int64), 2), cells])
    all_f = np.concatenate([slot_f.ravel(), f])
    all_x = np.concatenate([slot_x.reshape(2 * p, n), x])
    # seniority: stored entries (in slot order) strictly before the batch
    seniority = np.arange(2 * p + b, dtype=np.int64)
    order = np.lexsort((seniority, all_f, all_cells))
    sorted_cells = all_cells[order]
    # every cell holds >= 2 entries thanks to the +inf placeholders
    pos = np.searchsorted(sorted_cells, np.arange(p, dtype=np.int64), side="left")
    first = order[pos]
    second = order[pos + 1]
    new_f = np.stack([all_f[first], all_f[second]], axis=1)
    new_x = np.stack([all_x[first], all_x[second]], axis=1)
    return new_f, new_x


def score_accumulate(cells_t, order, weights, n_cells):
    """Accumulate the cell-score matrix from archive members.

    cells_t: (n, m) cell index of member j in dimension i; order: (m,)
    member indices sorted by ascending fitness; weights: (m,).  For each
    dimension i and cell j holding >= 2 members, take the two best members
    there and credit, per dimension k, the cell holding the better member's
    k-th coordinate: w1 + w2 if both members share that cell, else 2 * w1.
    Returns S: (n, n_cells).
    """
    n, m = cells_t.shape
    s = np.zeros((n, n_cells))
    s_flat = s.ravel()
    col = np.arange(n, dtype=np.int64) * n_cells
    for i in range(n):
        ci = cells_t[i, order]
        u1, first = np.unique(ci, return_index=True)
        rest_mask = np.ones(m, dtype=bool)
        rest_mask[first] = False
        rest = np.nonzero(rest_mask)[0]
        u2, second_rel = np.unique(ci[rest], return_index=True)
        if u2.size == 0:
            continue
        second = rest[second_rel]
        pos1 = first[np.searchsorted(u1, u2)]
        m1 = order[pos1]
        m2 = order[second]
        w1 = weights[m1]
        w2 = weights[m2]
        c1 = cells_t[:, m1]
        c2 = cells_t[:, m2]
        vals = np.where(c1 == c2, w1 + w2, 2.0 * w1)
        idx = col[:, None] + c1
        # transpose so additions run pair-major, dimension-minor: the same
        # order the compiled loop uses, keeping float accumulation identical
        np.add.at(s_flat, idx.T.ravel(), vals.T.ravel())
    return s


def sample_in_intervals(idx, starts, ends, offsets, u):
    """Uniform draws inside per-dimension intervals chosen per coordinate.

    idx: (b, n) 0-based interval index within each dimension's list;
    starts/ends: flattened interval bounds for all dimensions; offsets:
    (n + 1,) start of each dimension's slice in the flat arrays; u: (b, n)
    uniforms.  Results stay strictly below the interval's upper end so that
    half-open cell membership is preserved after rounding.
    """
    flat = offsets[:-1] + idx
    s = starts[flat]
    e = ends[flat]
    y = s + (e - s) * u
    return np.minimum(y, np.nextafter(e, s))


def sample_in_cells(cells, bounds, u):
    """Uniform draws inside the given grid cell of each coordinate.

    cells: (b, n) cell indices, bounds: (n, p + 1) cell boundaries per
    dimension, u: (b, n) uniforms.  Same upper-edge clamping as
    sample_in_intervals.
    """
    dims = np.arange(cells.shape[1])
    lo = bounds[dims, cells]
    hi = bounds[dims, cells + 1]
    y = lo + (hi - lo) * u
    return np.minimum(y, np.nextafter(hi, lo))
