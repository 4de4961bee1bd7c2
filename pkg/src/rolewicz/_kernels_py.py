"""Pure-Python word-value kernel; arbitrary-precision, never overflows."""

from __future__ import annotations


def word_values(maps, r, starts):
    """Rows of ``f_sigma(k)`` over all words of length ``r``, one row per start.

    Words are in lexicographic order with ``sigma[0]`` most significant;
    ``sigma[0]`` is applied first.
    """
    t = len(maps)
    rows = []
    for k in starts:
        layer = [k]
        for _ in range(r):
            nxt = []
            push = nxt.extend
            for v in layer:
                push([f(v) for f in maps])
            layer = nxt
        rows.append(layer)
    return rows
