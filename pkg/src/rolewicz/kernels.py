"""Hot-loop dispatch: compiled extension when built, pure Python otherwise.

The only hot kernel is the evaluation of ``f_sigma(k)`` over every word of a
given length.  The extension works on int64 and signals overflow, at which
point the pure-Python path (arbitrary precision) takes over transparently.
Set ``ROLEWICZ_PURE=1`` to disable the extension.
"""

from __future__ import annotations

import os
from typing import Optional, Sequence

from . import _kernels_py
from .maps import Affine, CeilPair, IncreasingMap, PatchedTable

try:
    if os.environ.get("ROLEWICZ_PURE"):
        raise ImportError("disabled by ROLEWICZ_PURE")
    import numpy as np

    from . import _kernels as _ext
except ImportError:  # pragma: no cover - depends on build
    _ext = None
    np = None

HAVE_EXTENSION = _ext is not None

_INT64_MAX = 2**63 - 1
_encoding_cache: dict = {}


def backend() -> str:
    return "cython" if HAVE_EXTENSION else "python"


def _encode(maps: Sequence[IncreasingMap]):
    key = tuple(maps)
    if key in _encoding_cache:
        return _encoding_cache[key]
    rows, ovk, ovv = [], [], []
    enc = None
    try:
        for f in maps:
            start = len(ovk)
            base = f
            if isinstance(f, PatchedTable):
                for k, v in f.overrides:
                    ovk.append(k)
                    ovv.append(v)
                base = f.base_map
            if isinstance(base, CeilPair):
                p, q = base._pq
                rows.append((1, p, q, start, len(ovk)))
            elif isinstance(base, Affine):
                rows.append((0, base.a, base.b, start, len(ovk)))
            else:
                raise TypeError
        flat = [x for row in rows for x in row] + ovk + ovv
        if all(-_INT64_MAX <= x <= _INT64_MAX for x in flat):
            enc = (
                np.array(rows, dtype=np.int64).reshape(len(rows), 5),
                np.array(ovk or [0], dtype=np.int64),
                np.array(ovv or [0], dtype=np.int64),
            )
    except TypeError:
        enc = None
    _encoding_cache[key] = enc
    return enc


def word_values(maps: Sequence[IncreasingMap], r: int, starts: Sequence[int],
                force: Optional[str] = None) -> list[list[int]]:
    """``f_sigma(k)`` for every word of length ``r`` and every ``k`` in ``starts``.

    Row ``s`` lists values in lexicographic word order, ``sigma[0]`` applied
    first.  ``force`` pins the backend ("cython" or "python") for benchmarks.
    """
    starts = list(starts)
    use_ext = HAVE_EXTENSION if force is None else force == "cython"
    if use_ext and starts and max(starts) <= _INT64_MAX:
        if not HAVE_EXTENSION:
            raise RuntimeError("compiled extension not available")
        enc = _encode(maps)
        if enc is not None:
            try:
                return _ext.word_values(enc[0], enc[1], enc[2], r, starts).tolist()
            except OverflowError:
                if force == "cython":
                    raise
    return _kernels_py.word_values(maps, r, starts)
