# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled max-plus kernels.  See ``_kernels_py`` for the reference version."""

from libc.stdint cimport int64_t
from cpython.array cimport array, clone

NEG = -(1 << 62)
cdef int64_t CNEG = -(1 << 62)
cdef array _proto = array("q")


cdef array _flat(rows, Py_ssize_t n, Py_ssize_t m):
    cdef array out = clone(_proto, n * m, False)
    cdef Py_ssize_t i, j
    for i in range(n):
        r = rows[i]
        for j in range(m):
            out.data.as_longlongs[i * m + j] = r[j]
    return out


def maxplus_conv1(a, b):
    cdef Py_ssize_t na = len(a), nb = len(b), i, j
    cdef array A = array("q", a), B = array("q", b)
    cdef array C = clone(_proto, na + nb - 1, False)
    cdef int64_t[:] av = A, bv = B, cv = C
    cdef int64_t x, y
    for i in range(na + nb - 1):
        cv[i] = CNEG
    for i in range(na):
        x = av[i]
        if x == CNEG:
            continue
        for j in range(nb):
            y = bv[j]
            if y != CNEG and x + y > cv[i + j]:
                cv[i + j] = x + y
    return list(C)


def maxplus_conv2(a, b):
    cdef Py_ssize_t na = len(a), ma = len(a[0]), nb = len(b), mb = len(b[0])
    cdef Py_ssize_t n = na + nb - 1, m = ma + mb - 1
    cdef Py_ssize_t i, k, j, l, o
    cdef array A = _flat(a, na, ma), B = _flat(b, nb, mb)
    cdef array C = clone(_proto, n * m, False)
    cdef int64_t[:] av = A, bv = B, cv = C
    cdef int64_t x, y
    for i in range(n * m):
        cv[i] = CNEG
    for i in range(na):
        for k in range(ma):
            x = av[i * ma + k]
            if x == CNEG:
                continue
            for j in range(nb):
                o = (i + j) * m + k
                for l in range(mb):
                    y = bv[j * mb + l]
                    if y != CNEG and x + y > cv[o + l]:
                        cv[o + l] = x + y
    return [list(C[i * m:(i + 1) * m]) for i in range(n)]
