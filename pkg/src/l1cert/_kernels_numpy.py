"""Pure-numpy fallbacks for the jitted kernels.

Selected with L1CERT_BACKEND=numpy (or automatically when numba is not
importable).  Must agree with ``_kernels_numba`` bit for bit, including
the first-occurrence tie-break rules.
"""

import numpy as np

NAME = "numpy"

_CHUNK = 1024


def bfs_all_pairs(indptr, indices):
    n = indptr.shape[0] - 1
    dist = np.full((n, n), -1, dtype=np.int64)
    for src in range(n):
        row = dist[src]
        row[src] = 0
        frontier = np.array([src], dtype=np.int64)
        level = 0
        while frontier.size:
            level += 1
            starts = indptr[frontier]
            counts = indptr[frontier + 1] - starts
            total = int(counts.sum())
            if total == 0:
                break
            base = np.repeat(starts, counts)
            excl = np.repeat(np.cumsum(counts) - counts, counts)
            neigh = indices[base + (np.arange(total) - excl)]
            fresh = neigh[row[neigh] < 0]
            if fresh.size == 0:
                break
            row[fresh] = level
            frontier = np.unique(fresh)
    return dist


def first_triangle_violation(num):
    n = num.shape[0]
    for i in range(n):
        bad = num[i][None, :] > num[i][:, None] + num
        if bad.any():
            j, k = np.unravel_index(int(np.argmax(bad)), bad.shape)
            return np.array([i, j, k], dtype=np.int64)
    return np.full(3, -1, dtype=np.int64)


def pairwise_sup(img):
    n = img.shape[0]
    wide = img.astype(np.int64)
    out = np.zeros((n, n), dtype=np.int64)
    for lo in range(0, n, _CHUNK):
        hi = min(lo + _CHUNK, n)
        block = np.abs(wide[lo:hi, None, :] - wide[None, :, :]).max(axis=2)
        out[lo:hi] = block
    return out


def _exact_argopt(s, t, sign):
    # index minimizing (sign=+1) or maximizing (-1) s/t; first index on ties.
    ratios = s / t
    c = int(np.argmin(ratios) if sign > 0 else np.argmax(ratios))
    while True:
        cross = s * t[c] - s[c] * t
        better = np.nonzero(cross < 0 if sign > 0 else cross > 0)[0]
        if better.size == 0:
            ties = np.nonzero(cross == 0)[0]
            return int(ties[0])
        sub = better
        c = int(sub[np.argmin(ratios[sub]) if sign > 0 else np.argmax(ratios[sub])])


def ratio_extremes(src, img):
    n = src.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    s = src[iu, ju].astype(np.int64)
    t = img[iu, ju].astype(np.int64)
    pmin = _exact_argopt(s, t, +1)
    pmax = _exact_argopt(s, t, -1)
    return np.array([iu[pmin], ju[pmin], iu[pmax], ju[pmax]], dtype=np.int64)


def _norm_rows(v):
    a = np.abs(v)
    s = np.argmax(a, axis=1)
    rows = np.arange(v.shape[0])
    nval = a[rows, s]
    eps = np.where(v[rows, s] > 0, 1, -1).astype(np.int8)
    return s.astype(np.int64), eps, nval.astype(np.int64)


def partition_normings(set_rows, k):
    total = 1 << k
    full = total - 1
    s_idx = np.zeros(total, dtype=np.int64)
    eps = np.zeros(total, dtype=np.int8)
    nval = np.zeros(total, dtype=np.int64)
    full_row = set_rows[full - 1].astype(np.int64)
    for mask, sgn in ((0, -1), (full, 1)):
        s, e, nv = _norm_rows(sgn * full_row[None, :])
        s_idx[mask], eps[mask], nval[mask] = s[0], e[0], nv[0]
    masks = np.arange(1, full, dtype=np.int64)
    for lo in range(0, masks.size, _CHUNK):
        part = masks[lo:lo + _CHUNK]
        va = set_rows[part - 1].astype(np.int64)
        vb = set_rows[(full ^ part) - 1].astype(np.int64)
        s, e, nv = _norm_rows(va - vb)
        s_idx[part], eps[part], nval[part] = s, e, nv
    return s_idx, eps, nval


def grid_min_abs(zs, fam):
    best = None
    for lo in range(0, zs.shape[0], _CHUNK * 8):
        block = zs[lo:lo + _CHUNK * 8] @ fam
        m = int(np.abs(block).max(axis=1).min())
        best = m if best is None else min(best, m)
    return np.int64(best)
