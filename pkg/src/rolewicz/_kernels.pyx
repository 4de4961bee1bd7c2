# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled word-value kernel on int64 with overflow detection.

Maps arrive encoded as rows ``(kind, a, b, ov_start, ov_end)``: kind 0 is
``a*n + b``, kind 1 is ``pairing(n, ceil(a*n/b))``; overrides for patched maps
live in ``ovk``/``ovv`` at ``[ov_start, ov_end)``.  Any intermediate that would
leave int64 raises OverflowError so the caller can fall back to Python ints.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cdef int64_t BIG = 9223372036854775807
cdef int64_t ROOT = 3037000499


cdef inline int64_t _apply(const int64_t[:, ::1] table, const int64_t[::1] ovk,
                           const int64_t[::1] ovv, Py_ssize_t letter, int64_t k,
                           bint* overflow) noexcept nogil:
    cdef Py_ssize_t idx
    cdef int64_t kind = table[letter, 0]
    cdef int64_t a = table[letter, 1]
    cdef int64_t b = table[letter, 2]
    cdef int64_t num, g, s
    for idx in range(table[letter, 3], table[letter, 4]):
        if ovk[idx] == k:
            return ovv[idx]
    if kind == 0:
        if k > (BIG - (b if b > 0 else 0)) // a:
            overflow[0] = True
            return 0
        return a * k + b
    if k > (BIG - b) // a:
        overflow[0] = True
        return 0
    num = a * k
    g = (num + b - 1) // b
    s = k + g - 1
    if s > ROOT:
        overflow[0] = True
        return 0
    return (s - 1) * s // 2 + k


def word_values(const int64_t[:, ::1] table, const int64_t[::1] ovk,
                const int64_t[::1] ovv, int r, starts):
    """int64 array of shape (len(starts), t**r); see the pure-Python twin."""
    cdef Py_ssize_t t = table.shape[0]
    cdef Py_ssize_t width = t ** r
    cdef Py_ssize_t nstart = len(starts)
    out = np.empty((nstart, width), dtype=np.int64)
    cdef int64_t[:, ::1] view = out
    cdef const int64_t[::1] st = np.ascontiguousarray(starts, dtype=np.int64)
    cdef Py_ssize_t row, level, idx, letter, size
    cdef int64_t v
    cdef bint overflow = False
    with nogil:
        for row in range(nstart):
            view[row, 0] = st[row]
            size = 1
            for level in range(r):
                # expand in place from the back so unread entries survive
                idx = size - 1
                while idx >= 0:
                    v = view[row, idx]
                    for letter in range(t):
                        view[row, idx * t + letter] = _apply(table, ovk, ovv, letter, v, &overflow)
                    idx -= 1
                if overflow:
                    break
                size = size * t
            if overflow:
                break
    if overflow:
        raise OverflowError("word values exceed int64")
    return out
