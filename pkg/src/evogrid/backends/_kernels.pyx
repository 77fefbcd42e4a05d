# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the per-coordinate hot loops.

Mirrors backends.pykernels function for function.  The two backends must
stay bit-identical: keep every floating-point expression in the same
written order as the numpy version (the build disables fused
multiply-add for the same reason), and keep tie handling the same.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport floor, nextafter

cnp.import_array()


def assign_cells(const double[:, ::1] x, const double[::1] lower,
                 const double[::1] width, Py_ssize_t n_cells):
    cdef Py_ssize_t b = x.shape[0], n = x.shape[1], i, j
    cdef cnp.int64_t k
    out_arr = np.empty((b, n), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] out = out_arr
    for i in range(b):
        for j in range(n):
            k = <cnp.int64_t>floor((x[i, j] - lower[j]) / width[j])
            if k < 0:
                k = 0
            elif k > n_cells - 1:
                k = n_cells - 1
            out[i, j] = k
    return out_arr


def update_slots(const double[:, ::1] slot_f, const double[:, :, ::1] slot_x,
                 const cnp.int64_t[::1] cells, const double[::1] f,
                 const double[:, ::1] x):
    cdef Py_ssize_t b = cells.shape[0], n = slot_x.shape[2], i, j, c
    cdef double fv
    new_f_arr = np.array(slot_f, copy=True)
    new_x_arr = np.array(slot_x, copy=True)
    cdef double[:, ::1] nf = new_f_arr
    cdef double[:, :, ::1] nx = new_x_arr
    # sequential strict-< insertion keeps the earlier arrival on ties,
    # matching the stable lexsort the numpy backend uses
    for i in range(b):
        c = cells[i]
        fv = f[i]
        if fv < nf[c, 0]:
            nf[c, 1] = nf[c, 0]
            for j in range(n):
                nx[c, 1, j] = nx[c, 0, j]
            nf[c, 0] = fv
            for j in range(n):
                nx[c, 0, j] = x[i, j]
        elif fv < nf[c, 1]:
            nf[c, 1] = fv
            for j in range(n):
                nx[c, 1, j] = x[i, j]
    return new_f_arr, new_x_arr


def score_accumulate(const cnp.int64_t[:, ::1] cells_t, const cnp.int64_t[::1] order,
                     const double[::1] weights, Py_ssize_t n_cells):
    cdef Py_ssize_t n = cells_t.shape[0], m = cells_t.shape[1]
    cdef Py_ssize_t i, j, t, k
    cdef cnp.int64_t mem, m1, m2, c1, c2
    cdef double w1, w2
    s_arr = np.zeros((n, n_cells))
    cdef double[:, ::1] s = s_arr
    first_arr = np.empty(n_cells, dtype=np.int64)
    second_arr = np.empty(n_cells, dtype=np.int64)
    cdef cnp.int64_t[::1] first = first_arr
    cdef cnp.int64_t[::1] second = second_arr
    for i in range(n):
        for j in range(n_cells):
            first[j] = -1
            second[j] = -1
        # members arrive in ascending-fitness order; keep first two per cell
        for t in range(m):
            mem = order[t]
            j = cells_t[i, mem]
            if first[j] < 0:
                first[j] = mem
            elif second[j] < 0:
                second[j] = mem
        # pair-major, dimension-minor accumulation, cells ascending: the
        # same float addition order as the numpy backend's add.at call
        for j in range(n_cells):
            if second[j] >= 0:
                m1 = first[j]
                m2 = second[j]
                w1 = weights[m1]
                w2 = weights[m2]
                for k in range(n):
                    c1 = cells_t[k, m1]
                    c2 = cells_t[k, m2]
                    if c1 == c2:
                        s[k, c1] += w1 + w2
                    else:
                        s[k, c1] += 2.0 * w1
    return s_arr


def sample_in_intervals(const cnp.int64_t[:, ::1] idx, const double[::1] starts,
                        const double[::1] ends, const cnp.int64_t[::1] offsets,
                        const double[:, ::1] u):
    cdef Py_ssize_t b = idx.shape[0], n = idx.shape[1], i, j, flat
    cdef double lo, hi, y, cap
    out_arr = np.empty((b, n))
    cdef double[:, ::1] out = out_arr
    for i in range(b):
        for j in range(n):
            flat = offsets[j] + idx[i, j]
            lo = starts[flat]
            hi = ends[flat]
            y = lo + (hi - lo) * u[i, j]
            cap = nextafter(hi, lo)
            if y > cap:
                y = cap
            out[i, j] = y
    return out_arr


def sample_in_cells(const cnp.int64_t[:, ::1] cells, const double[:, ::1] bounds,
                    const double[:, ::1] u):
    cdef Py_ssize_t b = cells.shape[0], n = cells.shape[1], i, j, c
    cdef double lo, hi, y, cap
    out_arr = np.empty((b, n))
    cdef double[:, ::1] out = out_arr
    for i in range(b):
        for j in range(n):
            c = cells[i, j]
            lo = bounds[j, c]
            hi = bounds[j, c + 1]
            y = lo + (hi - lo) * u[i, j]
            cap = nextafter(hi, lo)
            if y > cap:
                y = cap
            out[i, j] = y
    return out_arr
