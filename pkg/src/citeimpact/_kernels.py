"""Numba kernels over CSR adjacency arrays.

All kernels release the GIL so a thread pool can run them concurrently on
disjoint slices of the focal set.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# Above this length ratio the short list is galloped through the long one.
GALLOP_RATIO = 32

# Column layout of the per-focal count matrix produced by ``focal_counts``.
COL_CP = 0
COL_CITING_EQ0 = 1
COL_CITING_GT0 = 2
COL_TR_CITING = 3
COL_CITED_EQ0 = 4
COL_CITED_GT0 = 5
COL_TR_CITED = 6
N_COLS = 7


@njit(cache=True, nogil=True)
def _merge_count(a, b):
    i = 0
    j = 0
    n = 0
    la = a.shape[0]
    lb = b.shape[0]
    while i < la and j < lb:
        x = a[i]
        y = b[j]
        if x < y:
            i += 1
        elif x > y:
            j += 1
        else:
            n += 1
            i += 1
            j += 1
    return n


@njit(cache=True, nogil=True)
def _gallop_count(small, big):
    # Exponential probe from the last match position, then binary search.
    n = 0
    lo = 0
    lb = big.shape[0]
    for k in range(small.shape[0]):
        x = small[k]
        if lo >= lb:
            break
        step = 1
        hi = lo
        while hi < lb and big[hi] < x:
            lo = hi + 1
            hi = lo + step
            step <<= 1
        if hi > lb:
            hi = lb
        # big[lo-1] < x (or lo == start); find first index in [lo, hi] with big >= x
        while lo < hi:
            mid = (lo + hi) >> 1
            if big[mid] < x:
                lo = mid + 1
            else:
                hi = mid
        if lo < lb and big[lo] == x:
            n += 1
            lo += 1
    return n


@njit(cache=True, nogil=True)
def intersect_count(a, b):
    """Size of the intersection of two ascending, duplicate-free arrays."""
    la = a.shape[0]
    lb = b.shape[0]
    if la == 0 or lb == 0:
        return 0
    if la * GALLOP_RATIO < lb:
        return _gallop_count(a, b)
    if lb * GALLOP_RATIO < la:
        return _gallop_count(b, a)
    return _merge_count(a, b)


@njit(cache=True, nogil=True)
def citer_profiles(ref_ptr, ref_idx, cit_ptr, cit_idx, f, out):
    """Fill ``out[k] = (r_citing, r_cited)`` for the k-th citer of ``f``."""
    citers = cit_idx[cit_ptr[f]:cit_ptr[f + 1]]
    refs_f = ref_idx[ref_ptr[f]:ref_ptr[f + 1]]
    for k in range(citers.shape[0]):
        c = citers[k]
        refs_c = ref_idx[ref_ptr[c]:ref_ptr[c + 1]]
        out[k, 0] = intersect_count(refs_c, citers)
        out[k, 1] = intersect_count(refs_c, refs_f)


@njit(cache=True, nogil=True)
def focal_counts(ref_ptr, ref_idx, cit_ptr, cit_idx, focal, out):
    """Absolute indicator counts for every publication in ``focal``.

    Row ``i`` of ``out`` receives the counts of ``focal[i]`` in the column
    layout given by the ``COL_*`` constants.
    """
    for i in range(focal.shape[0]):
        f = focal[i]
        citers = cit_idx[cit_ptr[f]:cit_ptr[f + 1]]
        refs_f = ref_idx[ref_ptr[f]:ref_ptr[f + 1]]
        citing_eq0 = 0
        tr_citing = 0
        cited_eq0 = 0
        tr_cited = 0
        for k in range(citers.shape[0]):
            c = citers[k]
            refs_c = ref_idx[ref_ptr[c]:ref_ptr[c + 1]]
            r = intersect_count(refs_c, citers)
            if r == 0:
                citing_eq0 += 1
            tr_citing += r
            r = intersect_count(refs_c, refs_f)
            if r == 0:
                cited_eq0 += 1
            tr_cited += r
        cp = citers.shape[0]
        out[i, COL_CP] = cp
        out[i, COL_CITING_EQ0] = citing_eq0
        out[i, COL_CITING_GT0] = cp - citing_eq0
        out[i, COL_TR_CITING] = tr_citing
        out[i, COL_CITED_EQ0] = cited_eq0
        out[i, COL_CITED_GT0] = cp - cited_eq0
        out[i, COL_TR_CITED] = tr_cited


def empty_counts(n: int) -> np.ndarray:
    return np.zeros((n, N_COLS), dtype=np.int64)
