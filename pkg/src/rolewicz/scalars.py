"""Exact scalars and finitely supported sequences.

Rationals come from gmpy2's ``mpq`` when it is importable and from
:class:`fractions.Fraction` otherwise; the choice is made once at import
(``ROLEWICZ_PURE=1`` forces the fallback).  Both keep values in lowest terms
with a positive denominator, so equality is structural.

A float mode exists for diagnostics only.  A computation never mixes the two.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

if os.environ.get("ROLEWICZ_PURE"):
    Q = Fraction
    BACKEND = "fractions"
else:
    try:
        from gmpy2 import mpq as Q
        BACKEND = "gmpy2"
    except ImportError:  # pragma: no cover - depends on environment
        Q = Fraction
        BACKEND = "fractions"

RATIONAL_TYPES = (Fraction, type(Q(0)))

Scalar = Union[Fraction, float, "Q"]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def rational(value) -> Scalar:
    """Coerce ``value`` to the exact rational type.

    Accepts ints and rationals of either backend; strings look like ``"p/q"``.
    Floats are refused: they would smuggle rounding into exact computations.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Q(value)
    if isinstance(value, RATIONAL_TYPES):
        return Q(int(value.numerator), int(value.denominator))
    if isinstance(value, str):
        match = _RATIONAL_RE.match(value)
        if not match:
            raise ValueError(f"not a rational literal: {value!r}")
        num = int(match.group(1))
        den = int(match.group(2)) if match.group(2) is not None else 1
        if den == 0:
            raise ZeroDivisionError(f"zero denominator in {value!r}")
        return Q(num, den)
    if isinstance(value, float):
        raise TypeError("floats are not accepted in rational mode")
    # gmpy2 mpz and similar integer-likes
    if hasattr(value, "__index__"):
        return Q(int(value))
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def fmt(value) -> str:
    """Serialize a scalar: ``"p/q"`` or ``"n"`` for rationals, repr for floats."""
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, int):
        return str(value)
    num, den = int(value.numerator), int(value.denominator)
    return str(num) if den == 1 else f"{num}/{den}"


def is_rational(value) -> bool:
    return isinstance(value, (int, *RATIONAL_TYPES)) and not isinstance(value, bool)


class Field:
    """Scalar mode of a computation: exact rationals or diagnostic floats."""

    def __init__(self, name: str):
        self.name = name

    @property
    def exact(self) -> bool:
        return self.name == "rational"

    def convert(self, value):
        if self.exact:
            return rational(value)
        if isinstance(value, str):
            return float(rational(value)) if "/" in value else float(value)
        return float(value)

    def __repr__(self):
        return f"Field({self.name!r})"


RATIONAL = Field("rational")
FLOAT = Field("float")


class SparseSeq(Mapping[int, Scalar]):
    """Finitely supported sequence indexed by positive integers.

    Missing indices read as zero and zero entries are never stored.  Instances
    are treated as immutable once built.
    """

    __slots__ = ("_data", "_max")

    def __init__(self, entries: Union[Mapping[int, Scalar], Iterable[tuple[int, Scalar]], None] = None):
        data: dict[int, Scalar] = {}
        if entries is not None:
            items = entries.items() if isinstance(entries, Mapping) else entries
            for k, v in items:
                k = int(k)
                if k < 1:
                    raise ValueError(f"indices start at 1, got {k}")
                if v:
                    data[k] = v
        self._data = data
        self._max = None

    @classmethod
    def _trusted(cls, data: dict) -> "SparseSeq":
        # caller guarantees positive int keys and no zero values
        seq = cls.__new__(cls)
        seq._data = data
        seq._max = None
        return seq

    def __getitem__(self, k: int) -> Scalar:
        return self._data.get(k, 0)

    def __contains__(self, k) -> bool:
        return k in self._data

    def __iter__(self) -> Iterator[int]:
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def __eq__(self, other) -> bool:
        if isinstance(other, SparseSeq):
            return self._data == other._data
        if isinstance(other, Mapping):
            return self._data == {k: v for k, v in other.items() if v}
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._data.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {fmt(v)}" for k, v in sorted(self._data.items()))
        return f"SparseSeq({{{body}}})"

    @property
    def support(self) -> list[int]:
        return sorted(self._data)

    @property
    def max_index(self) -> int:
        """Largest support index, 0 for the zero sequence."""
        if self._max is None:
            self._max = max(self._data, default=0)
        return self._max

    def __add__(self, other: "SparseSeq") -> "SparseSeq":
        return seq_axpy(1, other, self)

    def __sub__(self, other: "SparseSeq") -> "SparseSeq":
        return seq_axpy(-1, other, self)

    def __neg__(self) -> "SparseSeq":
        return self.scale(-1)

    def scale(self, a) -> "SparseSeq":
        if not a:
            return SparseSeq()
        return SparseSeq._trusted({k: a * v for k, v in self._data.items()})

    def restrict(self, keys) -> "SparseSeq":
        return SparseSeq._trusted({k: self._data[k] for k in keys if k in self._data})

    def truncate(self, upto: int) -> "SparseSeq":
        """Entries with index <= ``upto``."""
        return SparseSeq._trusted({k: v for k, v in self._data.items() if k <= upto})

    def to_json(self) -> dict[str, str]:
        return {str(k): fmt(v) for k, v in sorted(self._data.items())}

    @classmethod
    def from_json(cls, obj: Mapping[str, str], field: Field = RATIONAL) -> "SparseSeq":
        entries = []
        for key, value in obj.items():
            if not re.fullmatch(r"\d+", str(key)):
                raise ValueError(f"sequence index must be a decimal string, got {key!r}")
            entries.append((int(key), field.convert(value)))
        return cls(entries)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=False)


@dataclass(frozen=True)
class NormValue:
    """A norm reading; ``p_power`` values hold ``||x||_p**p``."""

    value: Scalar
    kind: str
    p: int | float | None = None

    def __lt__(self, other):
        return self.value < (other.value if isinstance(other, NormValue) else other)

    def __le__(self, other):
        return self.value <= (other.value if isinstance(other, NormValue) else other)

    def to_json(self) -> dict:
        return {"value": fmt(self.value), "kind": self.kind, "p": self.p}


def _check_p(p, x: SparseSeq) -> None:
    if isinstance(p, bool):
        raise TypeError("p must be a number")
    if isinstance(p, int):
        if p < 1:
            raise ValueError(f"p must be >= 1, got {p}")
        return
    if any(not isinstance(v, float) for v in x.values()):
        raise ValueError("non-integer p is only available in float mode")
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")


def lp_norm_pow(x: SparseSeq, p) -> NormValue:
    """Sum of ``|x_i|**p`` over the support; exact for rationals and integer p."""
    _check_p(p, x)
    total = 0
    for v in x.values():
        total += abs(v) ** p
    return NormValue(rational(total) if isinstance(total, int) else total, "p_power", p)


def sup_norm(x: SparseSeq) -> NormValue:
    best = 0
    for v in x.values():
        a = abs(v)
        if a > best:
            best = a
    return NormValue(rational(best) if isinstance(best, int) else best, "sup")


def seq_axpy(a, x: SparseSeq, y: SparseSeq) -> SparseSeq:
    """Return ``a*x + y`` with cancelled entries pruned."""
    out = dict(y._data)
    if a:
        for k, v in x._data.items():
            s = out.get(k, 0) + a * v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return SparseSeq._trusted(out)
