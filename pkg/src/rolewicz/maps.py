"""Strictly increasing maps N -> N with the pairing bijection and map families.

Every map here satisfies ``f(k) > k``; that is what makes ``T_f`` shrink the
support of a finitely supported sequence and it excludes the identity.

Each map also knows its exact preimage function, which is what lets the
operator act on sparse inputs without scanning and lets family validation
decide almost-disjointness analytically for the closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Optional, Sequence

from .errors import FamilyError
from .scalars import fmt, rational

ALPHA_NAME = "cantor-1indexed"

DEFAULT_HORIZON = 2000


def pairing(i: int, j: int) -> int:
    """1-indexed Cantor pairing ``(i+j-2)(i+j-1)/2 + i``.

    Bijective N x N -> N and strictly increasing when both arguments increase.
    """
    if i < 1 or j < 1:
        raise ValueError(f"pairing is defined on positive integers, got ({i}, {j})")
    s = i + j - 1
    return (s - 1) * s // 2 + i


# every map of a family asks for the same unpairing of a coordinate
@lru_cache(maxsize=1 << 16)
def unpair(n: int) -> tuple[int, int]:
    if n < 1:
        raise ValueError(f"unpair is defined on positive integers, got {n}")
    # diagonal s is the least s with s(s+1)/2 >= n
    s = (math.isqrt(8 * n) + 1) // 2
    while s * (s + 1) // 2 < n:
        s += 1
    while s > 1 and (s - 1) * s // 2 >= n:
        s -= 1
    i = n - (s - 1) * s // 2
    return i, s + 1 - i


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


class IncreasingMap:
    """Base class.  Subclasses are frozen dataclasses."""

    kind: str = ""

    #: largest argument handled by an explicit override table (0 if none)
    override_bound = 0

    def __call__(self, k: int) -> int:
        raise NotImplementedError

    def preimage(self, v: int) -> Optional[int]:
        """The unique ``k >= 1`` with ``f(k) == v``, or None."""
        raise NotImplementedError

    def base(self) -> "IncreasingMap":
        """Closed form governing arguments above ``override_bound``."""
        return self

    def affine(self) -> Optional[tuple[int, int]]:
        """``(a, b)`` when the closed form is ``a*n + b``."""
        return None

    def expands_from(self, k0: int) -> bool:
        """True if ``f(k) > k`` for every ``k >= k0``."""
        raise NotImplementedError

    def descriptor(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Affine(IncreasingMap):
    """``f(n) = a*n + b`` with ``a >= 1``."""

    a: int
    b: int
    kind = "affine"

    def __post_init__(self):
        if self.a < 1:
            raise FamilyError(f"affine slope must be >= 1, got {self.a}")

    def __call__(self, k: int) -> int:
        return self.a * k + self.b

    def preimage(self, v: int) -> Optional[int]:
        q, r = divmod(v - self.b, self.a)
        return q if r == 0 and q >= 1 else None

    def affine(self):
        return self.a, self.b

    def expands_from(self, k0: int) -> bool:
        return (self.a - 1) * max(k0, 1) + self.b > 0

    def descriptor(self) -> dict:
        return {"kind": "affine", "a": self.a, "b": self.b}


@dataclass(frozen=True)
class Shift(Affine):
    """``f(n) = n + d``; the classical backward shift when ``d = 1``."""

    kind = "shift"

    def __init__(self, d: int):
        if d < 1:
            raise FamilyError(f"shift amount must be >= 1, got {d}")
        object.__setattr__(self, "a", 1)
        object.__setattr__(self, "b", int(d))

    @property
    def d(self) -> int:
        return self.b

    def __repr__(self):
        return f"Shift({self.d})"

    def descriptor(self) -> dict:
        return {"kind": "shift", "d": self.d}


@dataclass(frozen=True)
class Interleaved(Affine):
    """``f(n) = t*n + (i - 1)``: the ``i``-th of ``t`` maps with disjoint residues."""

    kind = "interleaved"

    def __init__(self, t: int, i: int):
        if t < 1 or not 1 <= i <= t:
            raise FamilyError(f"interleaved map needs t >= 1 and 1 <= i <= t, got t={t}, i={i}")
        if t == 1:
            raise FamilyError("interleaved map with t=1 is the identity")
        object.__setattr__(self, "a", int(t))
        object.__setattr__(self, "b", int(i) - 1)

    @property
    def t(self) -> int:
        return self.a

    @property
    def i(self) -> int:
        return self.b + 1

    def __repr__(self):
        return f"Interleaved(t={self.t}, i={self.i})"

    def descriptor(self) -> dict:
        return {"kind": "interleaved", "t": self.t, "i": self.i}


@dataclass(frozen=True)
class CeilPair(IncreasingMap):
    """``f(n) = pairing(n, ceil(c*n))`` for a rational ``c > 1``."""

    c: object
    kind = "ceil"

    def __post_init__(self):
        c = rational(self.c)
        if c <= 1:
            raise FamilyError(f"ceil parameter must exceed 1, got {fmt(c)}")
        object.__setattr__(self, "c", c)

    @cached_property
    def _pq(self) -> tuple[int, int]:
        return int(self.c.numerator), int(self.c.denominator)

    def g(self, k: int) -> int:
        p, q = self._pq
        return _ceil_div(p * k, q)

    def __call__(self, k: int) -> int:
        return pairing(k, self.g(k))

    def preimage(self, v: int) -> Optional[int]:
        if v < 1:
            return None
        i, j = unpair(v)
        return i if j == self.g(i) else None

    def expands_from(self, k0: int) -> bool:
        return True

    def descriptor(self) -> dict:
        return {"kind": "ceil", "c": fmt(self.c)}

    def __repr__(self):
        return f"CeilPair({fmt(self.c)})"


@dataclass(frozen=True)
class PatchedTable(IncreasingMap):
    """A closed-form map with finitely many values overridden."""

    base_map: IncreasingMap
    overrides: tuple = field(default=())
    kind = "patched"

    def __post_init__(self):
        table = {}
        for k, v in self.overrides:
            k, v = int(k), int(v)
            if k < 1 or k in table:
                raise FamilyError(f"bad override key {k}")
            table[k] = v
        object.__setattr__(self, "overrides", tuple(sorted(table.items())))
        bound = max(table, default=0)
        object.__setattr__(self, "override_bound", bound)
        # arguments up to bound+1 are checked directly; the base covers the rest
        prev = 0
        for k in range(1, bound + 2):
            v = self(k)
            if v <= prev:
                raise FamilyError(f"patched map not strictly increasing at k={k}", witness=k)
            prev = v
        if not isinstance(self.base_map, (Affine, CeilPair)):
            raise FamilyError("patched map needs a closed-form base")

    @cached_property
    def _table(self) -> dict[int, int]:
        return dict(self.overrides)

    @cached_property
    def _reverse(self) -> dict[int, int]:
        return {v: k for k, v in self.overrides}

    def __call__(self, k: int) -> int:
        v = self._table.get(k)
        return self.base_map(k) if v is None else v

    def preimage(self, v: int) -> Optional[int]:
        k = self._reverse.get(v)
        if k is not None:
            return k
        k = self.base_map.preimage(v)
        if k is None or k in self._table:
            return None
        return k

    def base(self) -> IncreasingMap:
        return self.base_map

    def affine(self):
        return None

    def expands_from(self, k0: int) -> bool:
        bound = self.override_bound
        if any(self(k) <= k for k in range(max(k0, 1), bound + 1)):
            return False
        return self.base_map.expands_from(max(k0, bound + 1))

    def descriptor(self) -> dict:
        return {
            "kind": "patched",
            "base": self.base_map.descriptor(),
            "overrides": [[k, v] for k, v in self.overrides],
        }


def map_from_descriptor(desc: dict) -> IncreasingMap:
    if not isinstance(desc, dict) or "kind" not in desc:
        raise FamilyError(f"map descriptor must be an object with 'kind': {desc!r}")
    kind = desc["kind"]
    try:
        if kind == "shift":
            return Shift(int(desc["d"]))
        if kind == "interleaved":
            return Interleaved(int(desc["t"]), int(desc["i"]))
        if kind == "affine":
            return Affine(int(desc["a"]), int(desc["b"]))
        if kind == "ceil":
            return CeilPair(rational(str(desc["c"])))
        if kind == "patched":
            overrides = tuple((int(k), int(v)) for k, v in desc.get("overrides", []))
            return PatchedTable(map_from_descriptor(desc["base"]), overrides)
    except KeyError as exc:
        raise FamilyError(f"map descriptor {desc!r} is missing {exc}") from None
    raise FamilyError(f"unknown map kind {kind!r}")


# -- families ---------------------------------------------------------------


@dataclass(frozen=True)
class Family:
    """Validated maps ``(f_1, ..., f_t)`` with disjointness threshold ``m``.

    ``m`` is the least index with ``f_i(k) != f_j(k)`` for all ``i < j`` and
    ``k >= m``.  ``m_status`` is ``"exact"`` when every pair was settled
    analytically and ``"horizon-bounded"`` when a finite scan was needed.
    """

    maps: tuple
    m: int
    m_status: str = "exact"
    horizon: int = DEFAULT_HORIZON
    validated: bool = True

    @property
    def t(self) -> int:
        return len(self.maps)

    def __getitem__(self, letter: int) -> IncreasingMap:
        return self.maps[letter - 1]

    def descriptors(self) -> list[dict]:
        return [f.descriptor() for f in self.maps]

    def to_json(self) -> dict:
        return {
            "family": self.descriptors(),
            "m": self.m,
            "m_status": self.m_status,
            "horizon": self.horizon,
            "alpha": ALPHA_NAME,
        }


def unchecked_family(maps: Sequence[IncreasingMap], m: int = 1) -> Family:
    """Build a family without validation.  Negative controls only."""
    return Family(tuple(maps), m, "unchecked", 0, validated=False)


@dataclass
class _PairReport:
    agreements: list
    exact: bool


def _cross_violation(f, g, k):
    """Witness ``(k, k')`` with ``f(k) == g(k')`` and ``k != k'``, if any."""
    kk = g.preimage(f(k))
    if kk is not None and kk != k:
        return (k, kk)
    return None


def _affine_witness(f, g, start: int, span: int):
    for k in range(start, start + span):
        w = _cross_violation(f, g, k)
        if w:
            return w
        w = _cross_violation(g, f, k)
        if w:
            return (w[1], w[0])
    return None


def _analyze_pair(f: IncreasingMap, g: IncreasingMap, horizon: int, labels) -> _PairReport:
    low = max(f.override_bound, g.override_bound)
    agreements = []

    def fail(w):
        k, kk = w
        raise FamilyError(
            f"maps {labels[0]} and {labels[1]} violate almost-disjointness: "
            f"f_{labels[0]}({k}) = f_{labels[1]}({kk}) = {f(k)}",
            witness=(labels[0], labels[1], k, kk),
        )

    for k in range(1, low + 1):
        w = _cross_violation(f, g, k)
        if w:
            fail(w)
        w = _cross_violation(g, f, k)
        if w:
            fail((w[1], w[0]))
        if f(k) == g(k):
            agreements.append(k)

    fb, gb = f.base(), g.base()
    fa, ga = fb.affine(), gb.affine()
    if fa is not None and ga is not None:
        (a, b), (a2, b2) = fa, ga
        if (a, b) == (a2, b2):
            raise FamilyError(f"maps {labels[0]} and {labels[1]} coincide on a tail")
        diff = b2 - b
        if diff % math.gcd(a, a2) == 0:
            # a*k - a2*k' = diff has infinitely many positive solutions, and
            # they include k != k' (either a == a2 and k - k' = diff/a != 0,
            # or k/k' tends to a2/a != 1)
            span = 4 * (a + a2) * (abs(diff) + a + a2) + 8
            w = _affine_witness(f, g, low + 1, span)
            if w is None:  # pragma: no cover - arithmetic guarantees a hit
                raise FamilyError(f"maps {labels[0]} and {labels[1]} share values")
            fail(w)
        return _PairReport(agreements, True)

    if isinstance(fb, CeilPair) and isinstance(gb, CeilPair):
        if fb.c == gb.c:
            raise FamilyError(f"maps {labels[0]} and {labels[1]} coincide on a tail")
        # |c k - d k| >= 1 forces distinct ceilings, so agreements lie below 1/|c-d|
        bound = math.ceil(1 / abs(fb.c - gb.c))
        for k in range(low + 1, bound + 1):
            if fb.g(k) == gb.g(k):
                agreements.append(k)
        return _PairReport(agreements, True)

    for k in range(low + 1, horizon + 1):
        w = _cross_violation(f, g, k)
        if w:
            fail(w)
        w = _cross_violation(g, f, k)
        if w:
            fail((w[1], w[0]))
        if f(k) == g(k):
            agreements.append(k)
    return _PairReport(agreements, False)


def make_family(maps: Sequence[IncreasingMap], horizon: int = DEFAULT_HORIZON) -> Family:
    """Validate a family and compute its minimal disjointness threshold."""
    maps = tuple(maps)
    if not maps:
        raise FamilyError("a family needs at least one map")
    for idx, f in enumerate(maps, 1):
        if not isinstance(f, IncreasingMap):
            raise FamilyError(f"map {idx} is not an IncreasingMap: {f!r}")
        if not f.expands_from(1):
            raise FamilyError(f"map {idx} has a fixed or decreasing point (f(k) <= k)", witness=idx)
    m = 1
    exact = True
    for a in range(len(maps)):
        for b in range(a + 1, len(maps)):
            rep = _analyze_pair(maps[a], maps[b], horizon, (a + 1, b + 1))
            if rep.agreements:
                m = max(m, max(rep.agreements) + 1)
            exact = exact and rep.exact
    return Family(maps, m, "exact" if exact else "horizon-bounded", horizon)


def family_from_descriptors(descs: Sequence[dict], horizon: int = DEFAULT_HORIZON) -> Family:
    return make_family([map_from_descriptor(d) for d in descs], horizon)


@dataclass(frozen=True)
class RangeCheck:
    """Outcome of the disjoint-ranges test.

    ``witness`` is ``(i, j, k, k')`` with ``f_i(k) == f_j(k')`` when the ranges meet.
    """

    disjoint: bool
    exact: bool
    witness: Optional[tuple] = None

    @property
    def status(self) -> str:
        if not self.disjoint:
            return "false"
        return "true-exact" if self.exact else "true-horizon"


def _ranges_meet(f, g, k):
    kk = g.preimage(f(k))
    return None if kk is None else (k, kk)


def disjoint_ranges(fam: Family, horizon: Optional[int] = None) -> RangeCheck:
    horizon = fam.horizon if horizon is None else horizon
    exact = True
    maps = fam.maps
    for a in range(len(maps)):
        for b in range(a + 1, len(maps)):
            f, g = maps[a], maps[b]
            low = max(f.override_bound, g.override_bound)
            for k in range(1, low + 1):
                w = _ranges_meet(f, g, k)
                if w:
                    return RangeCheck(False, True, (a + 1, b + 1, *w))
                w = _ranges_meet(g, f, k)
                if w:
                    return RangeCheck(False, True, (a + 1, b + 1, w[1], w[0]))
            fb, gb = f.base(), g.base()
            fa, ga = fb.affine(), gb.affine()
            if fa is not None and ga is not None:
                (p, q), (p2, q2) = fa, ga
                if (q2 - q) % math.gcd(p, p2) == 0:
                    span = 4 * (p + p2) * (abs(q2 - q) + p + p2) + 8 + low
                    for k in range(1, span):
                        w = _ranges_meet(f, g, k)
                        if w:
                            return RangeCheck(False, True, (a + 1, b + 1, *w))
                continue
            if isinstance(fb, CeilPair) and isinstance(gb, CeilPair):
                # equal values force equal arguments; meet iff the ceilings agree
                bound = math.ceil(1 / abs(fb.c - gb.c)) if fb.c != gb.c else horizon
                for k in range(low + 1, bound + 1):
                    if f(k) == g(k):
                        return RangeCheck(False, True, (a + 1, b + 1, k, k))
                continue
            exact = False
            for k in range(low + 1, horizon + 1):
                w = _ranges_meet(f, g, k)
                if w:
                    return RangeCheck(False, False, (a + 1, b + 1, *w))
                w = _ranges_meet(g, f, k)
                if w:
                    return RangeCheck(False, False, (a + 1, b + 1, w[1], w[0]))
    return RangeCheck(True, exact)


# -- generators used by the CLI and the acceptance trials --------------------


def interleaved_family(t: int) -> Family:
    return make_family([Interleaved(t, i) for i in range(1, t + 1)])


def ceil_family(cs: Sequence, horizon: int = DEFAULT_HORIZON) -> Family:
    return make_family([CeilPair(rational(c)) for c in cs], horizon)


def shift_family(d: int = 1) -> Family:
    return make_family([Shift(d)])


def counterexample_family() -> Family:
    """``f_1(n) = 2n`` and ``f_2`` equal to ``2n - 1`` except ``f_2(1) = 2``."""
    return make_family([Interleaved(2, 1), PatchedTable(Affine(2, -1), ((1, 2),))])
