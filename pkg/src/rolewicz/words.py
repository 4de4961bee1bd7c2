"""Words over {1..t} and the partition of {1..t}^r by the value ``f_sigma(i)``.

Convention: for ``sigma = (s_1, ..., s_r)``, ``f_sigma = f_{s_r} o ... o f_{s_1}``,
so ``s_1`` is applied first.  Under this convention the tail of a word is the
outer part, and for ``r >= m`` the class of ``sigma = inner + outer`` with
``len(inner) == m`` is ``[inner]_i`` followed by the fixed ``outer``.
Words are enumerated lexicographically; word index ``idx`` has ``s_1`` as its
most significant base-t digit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Optional, Sequence

from . import kernels
from .errors import BudgetExceeded, NonZeroConditionViolation
from .maps import Family
from .scalars import Q, fmt, is_rational

Word = tuple

DEFAULT_BUDGET = 2**20


def all_words(t: int, r: int):
    return product(range(1, t + 1), repeat=r)


def word_index(word: Sequence[int], t: int) -> int:
    idx = 0
    for a in word:
        idx = idx * t + (a - 1)
    return idx


def word_at(idx: int, t: int, r: int) -> Word:
    letters = [0] * r
    for pos in range(r - 1, -1, -1):
        idx, d = divmod(idx, t)
        letters[pos] = d + 1
    return tuple(letters)


def eval_word(fam: Family, word: Sequence[int], k: int) -> int:
    for a in word:
        if not 1 <= a <= fam.t:
            raise ValueError(f"letter {a} outside 1..{fam.t}")
        k = fam.maps[a - 1](k)
    return k


def word_coeff(coeffs: Sequence, word: Sequence[int]):
    out = 1
    for a in word:
        out *= coeffs[a - 1]
    return out


def coeff_table(coeffs: Sequence, r: int) -> list:
    """``c_sigma`` for every word of length ``r`` in lexicographic order."""
    layer = [1]
    for _ in range(r):
        layer = [v * c for v in layer for c in coeffs]
    return layer


def _guard(t: int, r: int, budget: int, what: str) -> None:
    need = t**r
    if need > budget:
        raise BudgetExceeded(what, need, budget)


@dataclass
class WordClass:
    """One class of ``~_i``: the words whose composition sends ``i`` to ``value``."""

    value: int
    indices: list
    total: object = None

    @property
    def size(self) -> int:
        return len(self.indices)


@dataclass
class ClassTable:
    r: int
    i: int
    t: int
    classes: dict = field(default_factory=dict)
    has_sums: bool = False
    collisions: int = 0

    @property
    def count(self) -> int:
        """The number of classes, written sharp(r, i) in the literature."""
        return len(self.classes)

    def members(self, value: int) -> list:
        return [word_at(idx, self.t, self.r) for idx in self.classes[value].indices]

    def representative(self, value: int) -> Word:
        return word_at(min(self.classes[value].indices), self.t, self.r)

    def class_of(self, word: Sequence[int]) -> WordClass:
        idx = word_index(word, self.t)
        for cls in self.classes.values():
            if idx in cls.indices:
                return cls
        raise KeyError(word)

    def partition(self) -> set:
        return {frozenset(c.indices) for c in self.classes.values()}

    def to_json(self) -> dict:
        out = []
        for value in sorted(self.classes):
            cls = self.classes[value]
            entry = {"value": value, "members": [list(w) for w in self.members(value)]}
            if self.has_sums:
                entry["sum"] = fmt(cls.total)
            out.append(entry)
        return {"r": self.r, "i": self.i, "classes": out, "count": self.count}


def enumerate_classes(fam: Family, r: int, i: int, coeffs: Optional[Sequence] = None,
                      budget: int = DEFAULT_BUDGET) -> ClassTable:
    """Partition all ``t**r`` words by ``f_sigma(i)``, by direct enumeration."""
    t = fam.t
    _guard(t, r, budget, f"class table r={r}")
    values = kernels.word_values(fam.maps, r, [i])[0]
    groups: dict = {}
    for idx, v in enumerate(values):
        groups.setdefault(v, []).append(idx)
    table = ClassTable(r, i, t, {v: WordClass(v, idxs) for v, idxs in groups.items()})
    if coeffs is not None:
        cs = coeff_table(coeffs, r)
        for cls in table.classes.values():
            total = 0
            for idx in cls.indices:
                total += cs[idx]
            cls.total = total
        table.has_sums = True
    return table


def factorized_classes(fam: Family, r: int, i: int, coeffs: Optional[Sequence] = None,
                       m: Optional[int] = None, budget: int = DEFAULT_BUDGET) -> ClassTable:
    """Class table for ``r >= m`` built from the length-``m`` table.

    Every class is ``[inner]_i`` followed by a fixed outer word, with sum
    ``c_outer * c([inner]_i)``; only ``t**m`` words are enumerated directly.
    """
    m = fam.m if m is None else m
    if r < m:
        raise ValueError(f"factorization needs r >= m, got r={r}, m={m}")
    t = fam.t
    _guard(t, r, budget, f"factorized class table r={r}")
    base = enumerate_classes(fam, m, i, coeffs, budget)
    outer_len = r - m
    scale = t**outer_len
    outer_c = coeff_table(coeffs, outer_len) if coeffs is not None else None
    keys = list(base.classes)
    rows = kernels.word_values(fam.maps, outer_len, keys)
    table = ClassTable(r, i, t, has_sums=coeffs is not None)
    for key, row in zip(keys, rows):
        inner = base.classes[key]
        for u, v in enumerate(row):
            cls = WordClass(v, [idx * scale + u for idx in inner.indices])
            if outer_c is not None:
                cls.total = outer_c[u] * inner.total
            old = table.classes.get(v)
            if old is not None:
                # impossible for a valid family; kept visible for the sweeps
                table.collisions += 1
                old.indices.extend(cls.indices)
                if outer_c is not None:
                    old.total += cls.total
                continue
            table.classes[v] = cls
    return table


def class_count(fam: Family, r: int, i: int, budget: int = DEFAULT_BUDGET) -> int:
    """sharp(r, i), using ``t**(r-m) * sharp(m, i)`` once ``r >= m``."""
    if r >= fam.m:
        return fam.t ** (r - fam.m) * enumerate_classes(fam, fam.m, i, budget=budget).count
    return enumerate_classes(fam, r, i, budget=budget).count


@dataclass(frozen=True)
class GammaReport:
    gamma: object
    attained_at: Optional[tuple]
    m: int

    def to_json(self) -> dict:
        at = None if self.attained_at is None else {
            "word": list(self.attained_at[0]), "i": self.attained_at[1]}
        return {"gamma": fmt(self.gamma), "attained_at": at or "floor 1", "m": self.m}


def scan_class_sums(fam: Family, coeffs: Sequence, m: int, budget: int = DEFAULT_BUDGET):
    """Yield ``(r, i, table)`` for word lengths ``1..m`` and base indices ``1..m``."""
    _guard(fam.t, m, budget, f"non-zero condition sweep m={m}")
    for r in range(1, m + 1):
        for i in range(1, m + 1):
            yield r, i, enumerate_classes(fam, r, i, coeffs, budget)


def first_zero_class(fam: Family, coeffs: Sequence, m: int, budget: int = DEFAULT_BUDGET):
    """First ``(sigma, i)`` in (length, word, i) order with ``c([sigma]_i) == 0``."""
    for r in range(1, m + 1):
        hits = []
        for i in range(1, m + 1):
            table = enumerate_classes(fam, r, i, coeffs, budget)
            for value, cls in table.classes.items():
                if cls.total == 0:
                    hits.append((table.representative(value), i))
        if hits:
            return min(hits)
    return None


def compute_gamma(fam: Family, coeffs: Sequence, m: Optional[int] = None,
                  budget: int = DEFAULT_BUDGET) -> GammaReport:
    """``min(1, |c([sigma]_i)|)`` over word lengths ``1..m`` and ``1 <= i <= m``.

    Raises NonZeroConditionViolation with the first vanishing class.
    """
    m = fam.m if m is None else m
    best = None
    best_at = None
    for r, i, table in scan_class_sums(fam, coeffs, m, budget):
        for value, cls in table.classes.items():
            size = abs(cls.total)
            if size == 0:
                word, i0 = first_zero_class(fam, coeffs, m, budget)
                raise NonZeroConditionViolation(word, i0)
            at = (table.representative(value), i)
            if best is None or size < best or (size == best and at < best_at):
                best, best_at = size, at
    if best is None or best >= 1:
        one = Q(1) if all(is_rational(c) for c in coeffs) else 1.0
        return GammaReport(one, None, m)
    return GammaReport(best, best_at, m)
