# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels; mirrors ``cubecolor._kernels.pure``."""

from array import array
from libc.stdlib cimport malloc, free
from libc.stdint cimport uint64_t

DEF MAX_DIM = 5
DEF MAX_SUBSET_BITS = 20


def enumerate_proper(int d, int q):
    cdef int n = 1 << d
    cdef int v, w, i, c, k, ok
    cdef int lower[1 << MAX_DIM][MAX_DIM]
    cdef int nlower[1 << MAX_DIM]
    cdef int col[1 << MAX_DIM]
    if d < 0 or d > MAX_DIM:
        raise ValueError("dimension out of kernel range")
    if q > 255:
        raise ValueError("palette too large for byte storage")
    for v in range(n):
        nlower[v] = 0
        col[v] = -1
        for i in range(d):
            w = v ^ (1 << i)
            if w < v:
                lower[v][nlower[v]] = w
                nlower[v] += 1
    out = bytearray()
    cdef bytearray row = bytearray(n)
    cdef unsigned char[::1] rv = row
    v = 0
    while v >= 0:
        c = col[v] + 1
        while c < q:
            ok = 1
            for k in range(nlower[v]):
                if col[lower[v][k]] == c:
                    ok = 0
                    break
            if ok:
                break
            c += 1
        if c == q:
            col[v] = -1
            v -= 1
            continue
        col[v] = c
        if v == n - 1:
            for k in range(n):
                rv[k] = <unsigned char>col[k]
            out.extend(row)
        else:
            v += 1
    return bytes(out)


def count_avoiding_pairs(const unsigned char[::1] flat, int n, Py_ssize_t start, Py_ssize_t stop):
    cdef Py_ssize_t m = flat.shape[0] // n if n > 0 else 0
    cdef Py_ssize_t i, j
    cdef int k
    cdef unsigned long long total = 0
    cdef const unsigned char* a
    cdef const unsigned char* b
    if m == 0 or start >= stop:
        return 0
    with nogil:
        for i in range(start, stop):
            a = &flat[i * n]
            for j in range(m):
                b = &flat[j * n]
                for k in range(n):
                    if a[k] == b[k]:
                        break
                else:
                    total += 1
    return int(total)


def independent_masks(int d):
    cdef int n = 1 << d
    cdef int i, v, ok
    cdef uint64_t s, limit
    cdef uint64_t dirmask[MAX_DIM]
    cdef int shift[MAX_DIM]
    if n > MAX_SUBSET_BITS:
        raise ValueError("subset scan over 2^%d sets refused" % n)
    for i in range(d):
        dirmask[i] = 0
        shift[i] = 1 << i
        for v in range(n):
            if not (v >> i) & 1:
                dirmask[i] |= (<uint64_t>1) << v
    limit = (<uint64_t>1) << n
    out = array("Q")
    s = 0
    while s < limit:
        ok = 1
        for i in range(d):
            if s & dirmask[i] & (s >> shift[i]):
                ok = 0
                break
        if ok:
            out.append(s)
        s += 1
    return out


def count_independent(int d):
    return len(independent_masks(d))


def count_disjoint_pairs(masks, Py_ssize_t start, Py_ssize_t stop):
    cdef const uint64_t[::1] mv
    cdef Py_ssize_t i, j, m
    cdef uint64_t a
    cdef unsigned long long total = 0
    if not isinstance(masks, array):
        masks = array("Q", masks)
    mv = masks
    m = mv.shape[0]
    with nogil:
        for i in range(start, stop):
            a = mv[i]
            for j in range(m):
                if not (a & mv[j]):
                    total += 1
    return int(total)
