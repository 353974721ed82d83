"""Jitted integer kernels (the hot lane).

Every kernel works on integer numerators over a caller-held common
denominator, so results are exact.  The pure-numpy twins live in
``_kernels_numpy``; both lanes must return identical values, including
tie-breaks (first occurrence in row-major scan order).
"""

import numpy as np
from numba import njit

NAME = "numba"


@njit(cache=True)
def bfs_all_pairs(indptr, indices):
    n = indptr.shape[0] - 1
    dist = np.full((n, n), -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for src in range(n):
        row = dist[src]
        row[src] = 0
        queue[0] = src
        head, tail = 0, 1
        while head < tail:
            u = queue[head]
            head += 1
            du = row[u]
            for ei in range(indptr[u], indptr[u + 1]):
                w = indices[ei]
                if row[w] < 0:
                    row[w] = du + 1
                    queue[tail] = w
                    tail += 1
    return dist


@njit(cache=True)
def first_triangle_violation(num):
    n = num.shape[0]
    out = np.full(3, -1, dtype=np.int64)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if num[i, k] > num[i, j] + num[j, k]:
                    out[0], out[1], out[2] = i, j, k
                    return out
    return out


@njit(cache=True)
def pairwise_sup(img):
    n = img.shape[0]
    d = img.shape[1]
    out = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            best = np.int64(0)
            for c in range(d):
                v = np.int64(img[i, c]) - np.int64(img[j, c])
                if v < 0:
                    v = -v
                if v > best:
                    best = v
            out[i, j] = best
            out[j, i] = best
    return out


@njit(cache=True)
def ratio_extremes(src, img):
    # extremes of src[i,j]/img[i,j] over pairs i<j; img > 0 off-diagonal.
    n = src.shape[0]
    out = np.empty(4, dtype=np.int64)
    lo_n = lo_d = hi_n = hi_d = np.int64(0)
    first = True
    for i in range(n):
        for j in range(i + 1, n):
            a = src[i, j]
            b = img[i, j]
            if first:
                lo_n, lo_d, hi_n, hi_d = a, b, a, b
                out[0], out[1], out[2], out[3] = i, j, i, j
                first = False
                continue
            if a * lo_d < lo_n * b:
                lo_n, lo_d = a, b
                out[0], out[1] = i, j
            if a * hi_d > hi_n * b:
                hi_n, hi_d = a, b
                out[2], out[3] = i, j
    return out


@njit(cache=True)
def partition_normings(set_rows, k):
    """Norming coordinate of f(Set(A)) - f(Set(complement)) for every mask A.

    set_rows[mask - 1] is the image of the subset vertex with bitmask
    ``mask``; mask 0 uses -f(full) and the full mask uses +f(full).
    Returns (coordinate index, sign, |value| at that coordinate).
    """
    total = 1 << k
    full = total - 1
    d = set_rows.shape[1]
    s_idx = np.zeros(total, dtype=np.int64)
    eps = np.zeros(total, dtype=np.int8)
    nval = np.zeros(total, dtype=np.int64)
    for mask in range(total):
        best = np.int64(-1)
        best_s = 0
        best_e = np.int8(1)
        if mask == 0 or mask == full:
            sgn = np.int64(-1) if mask == 0 else np.int64(1)
            for c in range(d):
                v = sgn * np.int64(set_rows[full - 1, c])
                a = -v if v < 0 else v
                if a > best:
                    best = a
                    best_s = c
                    best_e = np.int8(1) if v > 0 else np.int8(-1)
        else:
            ra = mask - 1
            rb = (full ^ mask) - 1
            for c in range(d):
                v = np.int64(set_rows[ra, c]) - np.int64(set_rows[rb, c])
                a = -v if v < 0 else v
                if a > best:
                    best = a
                    best_s = c
                    best_e = np.int8(1) if v > 0 else np.int8(-1)
        s_idx[mask] = best_s
        eps[mask] = best_e
        nval[mask] = best
    return s_idx, eps, nval


@njit(cache=True)
def grid_min_abs(zs, fam):
    """min over grid rows z of max_coord |sum_i z_i * fam[i]| (all int64)."""
    p = zs.shape[0]
    n = zs.shape[1]
    d = fam.shape[1]
    best = np.int64(-1)
    for r in range(p):
        rowmax = np.int64(0)
        for c in range(d):
            acc = np.int64(0)
            for i in range(n):
                acc += zs[r, i] * fam[i, c]
            if acc < 0:
                acc = -acc
            if acc > rowmax:
                rowmax = acc
        if best < 0 or rowmax < best:
            best = rowmax
    return best
