"""Brute-force sweeps of the structural identities behind the chaos certificate.

Each sweep enumerates words and base indices up to the configured bounds and
returns concrete counterexamples, never a bare boolean.  The negative-control
configurations below are deliberately invalid and must produce violations;
they guard against sweeps that pass vacuously.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import kernels
from .errors import BudgetExceeded
from .maps import Family, Shift, counterexample_family, unchecked_family
from .scalars import Q, fmt
from .words import (
    DEFAULT_BUDGET,
    coeff_table,
    compute_gamma,
    enumerate_classes,
    factorized_classes,
    word_at,
)


@dataclass
class SweepConfig:
    fam: Family
    coeffs: Optional[Sequence] = None
    r_max: int = 4
    k_max: int = 25
    i_max: Optional[int] = None
    budget: int = DEFAULT_BUDGET
    mode: str = "ci"
    m: Optional[int] = None
    gamma: Optional[object] = None

    def __post_init__(self):
        if self.fam.t ** self.r_max > self.budget:
            raise BudgetExceeded(f"sweep r_max={self.r_max}", self.fam.t ** self.r_max, self.budget)
        if self.mode not in ("ci", "audit"):
            raise ValueError(f"mode must be 'ci' or 'audit', got {self.mode!r}")
        if self.i_max is None:
            self.i_max = self.k_max

    @property
    def level(self) -> int:
        return self.fam.m if self.m is None else self.m

    @property
    def early_exit(self) -> bool:
        return self.mode == "ci"


@dataclass
class SweepResult:
    name: str
    checks_run: int = 0
    violations: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "checks_run": self.checks_run,
            "violations": self.violations,
            "notes": self.notes,
        }


class _Stop(Exception):
    pass


def _flag(res: SweepResult, cfg: SweepConfig, **violation):
    res.violations.append(violation)
    if cfg.early_exit:
        raise _Stop


def _run(name, cfg, body) -> SweepResult:
    res = SweepResult(name)
    try:
        body(res)
    except _Stop:
        res.notes.append("stopped at first violation (ci mode)")
    return res


def _word(idx, t, r):
    return list(word_at(idx, t, r))


def sweep_prop0(cfg: SweepConfig) -> SweepResult:
    """Equal compositions of equal length force equal arguments."""
    fam, t = cfg.fam, cfg.fam.t

    def body(res):
        for r in range(1, cfg.r_max + 1):
            rows = kernels.word_values(fam.maps, r, range(1, cfg.k_max + 1))
            seen: dict = {}
            for k, row in enumerate(rows, 1):
                for idx, v in enumerate(row):
                    res.checks_run += 1
                    prev = seen.get(v)
                    if prev is None:
                        seen[v] = (k, idx)
                    elif prev[0] != k:
                        _flag(res, cfg, r=r, value=v, sigma=_word(prev[1], t, r), k=prev[0],
                              tau=_word(idx, t, r), k2=k)

    return _run("prop0", cfg, body)


def sweep_prop_quarter(cfg: SweepConfig) -> SweepResult:
    """For ``k >= m`` the map ``sigma -> f_sigma(k)`` is injective."""
    fam, t, m = cfg.fam, cfg.fam.t, cfg.level

    def body(res):
        below = 0
        for r in range(1, cfg.r_max + 1):
            rows = kernels.word_values(fam.maps, r, range(1, cfg.k_max + 1))
            for k, row in enumerate(rows, 1):
                seen: dict = {}
                for idx, v in enumerate(row):
                    if k >= m:
                        res.checks_run += 1
                    prev = seen.setdefault(v, idx)
                    if prev != idx:
                        if k < m:
                            below += 1
                        else:
                            _flag(res, cfg, r=r, k=k, value=v, sigma=_word(prev, t, r),
                                  tau=_word(idx, t, r))
        if below:
            res.notes.append(f"{below} coincidences below m={m} (expected, not violations)")

    return _run("prop_quarter", cfg, body)


def _table_key(table):
    return {v: frozenset(c.indices) for v, c in table.classes.items()}


def sweep_prop_half(cfg: SweepConfig) -> SweepResult:
    """Classes of length ``r > m`` factor as ``[inner]_i`` times a fixed outer word."""
    fam, t, m = cfg.fam, cfg.fam.t, cfg.level

    def body(res):
        for r in range(m + 1, cfg.r_max + 1):
            for i in range(1, cfg.i_max + 1):
                res.checks_run += 1
                direct = _table_key(enumerate_classes(fam, r, i, budget=cfg.budget))
                table = factorized_classes(fam, r, i, m=m, budget=cfg.budget)
                built = _table_key(table)
                if table.collisions:
                    # two distinct concatenation sets landed on one value
                    _flag(res, cfg, r=r, i=i, collisions=table.collisions,
                          direct_count=len(direct), factorized_count=len(built) + table.collisions)
                elif direct != built:
                    diff = sorted(set(direct.items()) ^ set(built.items()), key=lambda kv: min(kv[1]))
                    value, members = diff[0]
                    _flag(res, cfg, r=r, i=i, value=value,
                          direct=value in direct and direct[value] == members,
                          members=[_word(x, t, r) for x in sorted(members)],
                          direct_count=len(direct), factorized_count=len(built))

    return _run("prop_half", cfg, body)


def sweep_prop_counts(cfg: SweepConfig) -> SweepResult:
    """``sharp(s, i) = t**(s-r) * sharp(r, i)`` for ``s > r >= m``."""
    fam, t, m = cfg.fam, cfg.fam.t, cfg.level

    def body(res):
        for i in range(1, cfg.i_max + 1):
            counts = {r: enumerate_classes(fam, r, i, budget=cfg.budget).count
                      for r in range(m, cfg.r_max + 1)}
            for r in range(m, cfg.r_max + 1):
                for s in range(r + 1, cfg.r_max + 1):
                    res.checks_run += 1
                    if counts[s] != t ** (s - r) * counts[r]:
                        _flag(res, cfg, i=i, r=r, s=s, sharp_r=counts[r], sharp_s=counts[s])

    return _run("prop_counts", cfg, body)


def _require_coeffs(cfg):
    if cfg.coeffs is None:
        raise ValueError("this sweep needs coefficients")
    return [Q(c) if isinstance(c, int) else c for c in cfg.coeffs]


def sweep_prop2(cfg: SweepConfig) -> SweepResult:
    """``c([sigma]_i) = c_outer * c([inner]_i)`` for ``|sigma| >= m``."""
    fam, t, m = cfg.fam, cfg.fam.t, cfg.level
    coeffs = _require_coeffs(cfg)

    def body(res):
        for i in range(1, cfg.i_max + 1):
            inner = enumerate_classes(fam, m, i, coeffs, cfg.budget)
            inner_sum = {}
            for cls in inner.classes.values():
                for idx in cls.indices:
                    inner_sum[idx] = cls.total
            for r in range(m, cfg.r_max + 1):
                table = enumerate_classes(fam, r, i, coeffs, cfg.budget)
                outer_c = coeff_table(coeffs, r - m)
                scale = t ** (r - m)
                for cls in table.classes.values():
                    for idx in cls.indices:
                        res.checks_run += 1
                        head, tail = divmod(idx, scale)
                        expect = outer_c[tail] * inner_sum[head]
                        if cls.total != expect:
                            _flag(res, cfg, i=i, r=r, sigma=_word(idx, t, r),
                                  direct=fmt(cls.total), factorized=fmt(expect))

    return _run("prop2", cfg, body)


def sweep_prop3(cfg: SweepConfig) -> SweepResult:
    """``|c([sigma]_i)| >= gamma**r`` for ``|sigma| = r >= m`` and every ``i``."""
    fam, t, m = cfg.fam, cfg.fam.t, cfg.level
    coeffs = _require_coeffs(cfg)
    gamma = cfg.gamma if cfg.gamma is not None else compute_gamma(fam, coeffs, m, cfg.budget).gamma

    def body(res):
        res.notes.append(f"gamma={fmt(gamma)}")
        for r in range(m, cfg.r_max + 1):
            floor = gamma**r
            for i in range(1, cfg.i_max + 1):
                table = enumerate_classes(fam, r, i, coeffs, cfg.budget)
                for value, cls in table.classes.items():
                    res.checks_run += 1
                    if abs(cls.total) < floor:
                        _flag(res, cfg, r=r, i=i, sigma=list(table.representative(value)),
                              sum=fmt(cls.total), floor=fmt(floor))

    return _run("prop3", cfg, body)


SWEEPS = {
    "prop0": sweep_prop0,
    "prop_quarter": sweep_prop_quarter,
    "prop_half": sweep_prop_half,
    "prop_counts": sweep_prop_counts,
    "prop2": sweep_prop2,
    "prop3": sweep_prop3,
}

NEEDS_COEFFS = {"prop2", "prop3"}


def run_all(cfg: SweepConfig, names: Optional[Sequence[str]] = None) -> dict:
    names = list(SWEEPS) if names is None else names
    out = {}
    for name in names:
        if name in NEEDS_COEFFS and cfg.coeffs is None:
            continue
        out[name] = SWEEPS[name](cfg)
    return out


def negative_control(name: str, r_max: int = 4, k_max: int = 25, mode: str = "ci") -> SweepConfig:
    """A deliberately invalid configuration on which ``name`` must fail.

    The shift pair (n+1, n+2) breaks the cross clause of almost-disjointness
    (f_1(2) = f_2(1) = 3), which breaks every structural sweep.  The class-sum
    floor is tested with the vanishing coefficients (2, -2) and a forced gamma of 1.
    """
    if name == "prop3":
        return SweepConfig(counterexample_family(), (Q(2), Q(-2)), r_max, k_max,
                           mode=mode, gamma=Q(1))
    fam = unchecked_family([Shift(1), Shift(2)], m=1)
    return SweepConfig(fam, (Q(1), Q(1)), r_max, k_max, mode=mode)
