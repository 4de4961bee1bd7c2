"""The operators ``T_f x = (x_{f(1)}, x_{f(2)}, ...)`` and ``T = sum c_i T_{f_i}``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import kernels
from .errors import BudgetExceeded
from .maps import Family, family_from_descriptors
from .scalars import Field, RATIONAL, SparseSeq, fmt
from .words import DEFAULT_BUDGET, coeff_table


@dataclass(frozen=True)
class OperatorSpec:
    """``lam * sum_i coeffs[i] * T_{f_i}`` acting on l_p."""

    fam: Family
    coeffs: tuple
    lam: object
    p: int = 1

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if len(self.coeffs) != self.fam.t:
            raise ValueError(f"{len(self.coeffs)} coefficients for {self.fam.t} maps")
        if not self.lam > 0:
            raise ValueError("lambda must be positive")
        if isinstance(self.p, bool) or not isinstance(self.p, int) or self.p < 1:
            raise ValueError(f"p must be a positive integer, got {self.p!r}")

    @property
    def t(self) -> int:
        return self.fam.t

    def to_json(self) -> dict:
        return {
            "family": self.fam.descriptors(),
            "coeffs": [fmt(c) for c in self.coeffs],
            "lambda": fmt(self.lam),
            "p": self.p,
        }

    @classmethod
    def from_json(cls, obj: dict, field: Field = RATIONAL, horizon: int = 2000) -> "OperatorSpec":
        fam = family_from_descriptors(obj["family"], horizon)
        coeffs = [field.convert(c) for c in obj["coeffs"]]
        return cls(fam, coeffs, field.convert(obj.get("lambda", "1")), int(obj.get("p", 1)))


def apply(op: OperatorSpec, x: SparseSeq) -> SparseSeq:
    """``T x`` (without the factor lambda), computed by pulling back the support."""
    out: dict = {}
    maps = op.fam.maps
    coeffs = op.coeffs
    for s, xs in x.items():
        for f, c in zip(maps, coeffs):
            k = f.preimage(s)
            if k is not None:
                out[k] = out.get(k, 0) + c * xs
    return SparseSeq._trusted({k: v for k, v in out.items() if v})


def iterate(op: OperatorSpec, x: SparseSeq, n: int, scaled: bool = False) -> SparseSeq:
    """``T^n x``, times ``lam**n`` when ``scaled``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    for _ in range(n):
        if not x:
            break
        x = apply(op, x)
    if scaled and n:
        x = x.scale(op.lam**n)
    return x


def _word_pullbacks(op: OperatorSpec, x: SparseSeq, n: int) -> set:
    # coordinates k with f_sigma(k) in supp(x) for some |sigma| = n
    frontier = set(x)
    for _ in range(n):
        nxt = set()
        for s in frontier:
            for f in op.fam.maps:
                k = f.preimage(s)
                if k is not None:
                    nxt.add(k)
        frontier = nxt
    return frontier


def iterate_via_words(op: OperatorSpec, x: SparseSeq, n: int, scaled: bool = False,
                      budget: int = DEFAULT_BUDGET, scan_limit: int = 4096) -> SparseSeq:
    """``T^n x`` from the word expansion ``sum_sigma c_sigma x(f_sigma(k))``.

    Candidate coordinates are all ``k <= max supp x`` when that is at most
    ``scan_limit`` (forward evaluation only), otherwise the word pullbacks.
    """
    t = op.t
    if t**n > budget:
        raise BudgetExceeded(f"word expansion n={n}", t**n, budget)
    if not x:
        return SparseSeq()
    top = x.max_index
    if top <= scan_limit:
        candidates = range(1, top + 1)
    else:
        candidates = sorted(_word_pullbacks(op, x, n))
    cs = coeff_table(op.coeffs, n)
    out = {}
    candidates = list(candidates)
    rows = kernels.word_values(op.fam.maps, n, candidates)
    for k, row in zip(candidates, rows):
        total = 0
        for c, v in zip(cs, row):
            xv = x[v]
            if xv:
                total += c * xv
        if total:
            out[k] = total
    y = SparseSeq._trusted(out)
    if scaled and n:
        y = y.scale(op.lam**n)
    return y
