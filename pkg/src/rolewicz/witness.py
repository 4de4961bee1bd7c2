"""Transitivity witnesses and periodic points for a certified ``lam * T``.

Given finitely supported ``x`` and ``y`` the witness ``w`` equals ``x`` on
``1..j`` and, for every level ``l`` and every class ``[sigma]_k`` of words of
length ``l*n`` (``k <= j``), carries

    w[f_sigma(k)] = y_k * lam**(-l*n) / (c([sigma]_k) * sharp(l*n, k))

so that ``lam**n T**n w`` reproduces ``y`` on ``1..j``.  Only ``L`` levels are
materialized; the omitted levels are covered by a closed-form geometric tail.
Everything is exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from . import kernels
from .certify import Certificate, certify
from .errors import BudgetExceeded, CertificationError, ExactnessError
from .maps import Family
from .operator import OperatorSpec, iterate
from .scalars import Q, SparseSeq, fmt, lp_norm_pow, rational, sup_norm
from .words import coeff_table, enumerate_classes, word_at

DEFAULT_LEVELS = 3
WITNESS_BUDGET = 2**21
BIT_BUDGET = 2**31
MAX_ADAPT_STEPS = 64


class Assignment(NamedTuple):
    level: int
    base: int
    inner: tuple
    outer: int


@dataclass
class WitnessPlan:
    j: int
    n: int
    L: int
    epsilon: object
    m: int
    gamma: object
    lam: object
    p: int
    t: int
    assignments: dict = field(default_factory=dict)
    collisions: int = 0
    adapted: bool = False

    def word_for(self, coord: int) -> tuple:
        """Lexicographically least word sending its base index to ``coord``."""
        a = self.assignments[coord]
        outer_len = a.level * self.n - len(a.inner)
        return a.inner + word_at(a.outer, self.t, outer_len)

    def level_coords(self, level: int) -> list:
        return [c for c, a in self.assignments.items() if a.level == level]

    def to_json(self) -> dict:
        return {
            "j": self.j, "n": self.n, "L": self.L, "m": self.m,
            "epsilon": fmt(self.epsilon), "gamma": fmt(self.gamma), "lambda": fmt(self.lam),
            "p": self.p, "assignments": len(self.assignments), "adapted_n": self.adapted,
        }


@dataclass(frozen=True)
class CoordClass:
    k: int
    tag: str
    level: Optional[int] = None
    word: Optional[tuple] = None
    base: Optional[int] = None


@dataclass
class VerifyReport:
    base_exact: bool
    approach_error: object
    target_error: object
    tail_bound: Optional[object]
    epsilon: object
    level_exact_up_to: Optional[int] = None
    mismatch_mass: Optional[object] = None
    mismatch_bound: Optional[object] = None
    a_checked: int = 0
    b_checked: int = 0

    @property
    def approach_ok(self) -> bool:
        return self.tail_bound is not None and self.approach_error + self.tail_bound < self.epsilon

    @property
    def target_ok(self) -> bool:
        return self.target_error < self.epsilon

    @property
    def within_budget(self) -> bool:
        return self.approach_ok and self.target_ok

    @property
    def mismatch_ok(self) -> Optional[bool]:
        if self.mismatch_mass is None:
            return None
        return self.mismatch_mass <= self.mismatch_bound

    def to_json(self) -> dict:
        opt = lambda v: None if v is None else fmt(v)  # noqa: E731
        out = {
            "base_exact": self.base_exact,
            "approach_error": fmt(self.approach_error),
            "target_error": fmt(self.target_error),
            "tail_bound": opt(self.tail_bound),
            "epsilon": fmt(self.epsilon),
            "approach_ok": self.approach_ok,
            "target_ok": self.target_ok,
        }
        if self.level_exact_up_to is not None:
            out.update({
                "level_exact_up_to": self.level_exact_up_to,
                "mismatch_mass": opt(self.mismatch_mass),
                "mismatch_bound": opt(self.mismatch_bound),
                "mismatch_ok": self.mismatch_ok,
                "a_checked": self.a_checked,
                "b_checked": self.b_checked,
            })
        return out


def choose_n(j: int, y_sup, p: int, epsilon) -> int:
    """Least ``n > j`` with ``j * |y|_inf**p / (4**n - 1) < epsilon``."""
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    n = j + 1
    mass = j * rational(y_sup) ** p
    while mass and not mass < epsilon * (4**n - 1):
        n += 1
    return n


def padded_j(fam: Family, m: int, x: SparseSeq, y: SparseSeq) -> int:
    floor = m + 1 if fam.t >= 2 else 1
    return max(x.max_index, y.max_index, floor)


def _require_certified(op: OperatorSpec, cert: Optional[Certificate]) -> Certificate:
    cert = certify(op) if cert is None else cert
    if not cert.certified:
        raise CertificationError(f"operator not certified: {cert.verdict.value}")
    return cert


def estimate_cost(op: OperatorSpec, j: int, n: int, levels: int, bases: int) -> tuple[int, int]:
    """Upper bounds on (assigned coordinates, total coordinate bits) of a witness."""
    t = op.t
    count = bases * sum(t ** (l * n) for l in range(1, levels + 1))
    v = j
    for _ in range(levels * n):
        v = max(f(v) for f in op.fam.maps)
    return count, count * v.bit_length()


def _build(op, x, y, epsilon, levels, n, cert, budget):
    fam, t, lam = op.fam, op.t, op.lam
    m, gamma = cert.m, cert.gamma
    j = padded_j(fam, m, x, y)
    bases = [k for k in range(1, j + 1) if y[k]]
    count, bits = estimate_cost(op, j, n, levels, len(bases))
    if count > budget:
        raise BudgetExceeded(f"witness with L={levels}, n={n}", count, budget)
    if bits > BIT_BUDGET:
        raise BudgetExceeded(f"witness coordinate size with L={levels}, n={n}", bits, BIT_BUDGET)

    plan = WitnessPlan(j, n, levels, rational(epsilon), m, gamma, lam, op.p, t)
    w = {k: v for k, v in x.items() if k <= j}
    if x.max_index > j:  # pragma: no cover - padded_j covers the support
        raise ExactnessError("x supported beyond j")
    inv = [1 / c for c in op.coeffs]
    outer_tables = {}
    for k in bases:
        base = enumerate_classes(fam, m, k, op.coeffs)
        keys = list(base.classes)
        reps = {v: base.representative(v) for v in keys}
        for level in range(1, levels + 1):
            r = level * n
            outer_len = r - m
            if outer_len not in outer_tables:
                outer_tables[outer_len] = coeff_table(inv, outer_len)
            inv_outer = outer_tables[outer_len]
            sharp = t**outer_len * base.count
            scale = y[k] / (lam**r * sharp)
            rows = kernels.word_values(fam.maps, outer_len, keys)
            for key, row in zip(keys, rows):
                factor = scale / base.classes[key].total
                inner = reps[key]
                for u, coord in enumerate(row):
                    value = factor * inv_outer[u]
                    if coord <= j:
                        raise ExactnessError(f"level {level} coordinate {coord} inside base block")
                    old = w.get(coord)
                    if old is not None:
                        if old != value:
                            raise ExactnessError(f"coordinate {coord} assigned twice with different values")
                        plan.collisions += 1
                        continue
                    w[coord] = value
                    plan.assignments[coord] = Assignment(level, k, inner, u)
    return SparseSeq(w), plan


def build_witness(op: OperatorSpec, x: SparseSeq, y: SparseSeq, epsilon, levels: int = DEFAULT_LEVELS,
                  n: Optional[int] = None, adapt_n: bool = False, cert: Optional[Certificate] = None,
                  budget: int = WITNESS_BUDGET):
    """Witness ``w`` (truncated to ``levels``) and its plan.

    ``n`` defaults to the geometric choice of :func:`choose_n`.  With
    ``adapt_n`` the exponent is raised until the exact error budgets hold; this
    is how single-map operators with small ``lam`` are handled, where the
    factor-4 bound behind :func:`choose_n` does not apply.
    """
    cert = _require_certified(op, cert)
    epsilon = rational(epsilon)
    j = padded_j(op.fam, cert.m, x, y)
    if n is None:
        n = choose_n(j, sup_norm(y).value, op.p, epsilon)
    elif n <= j:
        raise ValueError(f"n must exceed j={j}")
    if not adapt_n:
        return _build(op, x, y, epsilon, levels, n, cert, budget)
    for step in range(MAX_ADAPT_STEPS):
        w, plan = _build(op, x, y, epsilon, levels, n + step, cert, budget)
        plan.adapted = step > 0
        if verify_witness(op, x, y, w, plan).within_budget:
            return w, plan
    raise CertificationError(f"no n in [{n}, {n + MAX_ADAPT_STEPS}) meets the error budget")


def tail_bound(plan: WitnessPlan, y_sup) -> Optional[object]:
    """Closed-form bound on the omitted levels ``l > L``."""
    base = plan.gamma * plan.lam
    if base <= 1:
        return None
    q = 1 / base ** (plan.p * plan.n)
    return plan.j * rational(y_sup) ** plan.p * q ** (plan.L + 1) / (1 - q)


def _first_level(w: SparseSeq, plan: WitnessPlan) -> SparseSeq:
    keep = [k for k in w if k <= plan.j or plan.assignments[k].level == 1]
    return w.restrict(keep)


def verify_witness(op: OperatorSpec, x: SparseSeq, y: SparseSeq, w: SparseSeq,
                   plan: WitnessPlan) -> VerifyReport:
    """Exact check of the base identity and of both error budgets.

    A failing base identity raises ExactnessError: it cannot fail for a
    correct construction.
    """
    n, j = plan.n, plan.j
    head = iterate(op, _first_level(w, plan), n, scaled=True)
    for k in range(1, j + 1):
        if head[k] != y[k]:
            raise ExactnessError(f"lam^n T^n w differs from y at base coordinate {k}")
    image = iterate(op, w, n, scaled=True)
    for k in range(1, j + 1):
        if image[k] != y[k]:
            raise ExactnessError(f"higher levels leak into base coordinate {k}")
    approach = lp_norm_pow(x - w, plan.p).value
    target = lp_norm_pow(y - image, plan.p).value
    return VerifyReport(True, approach, target, tail_bound(plan, sup_norm(y).value), plan.epsilon)


def build_periodic(op: OperatorSpec, x: SparseSeq, epsilon, levels: int = DEFAULT_LEVELS,
                   n: Optional[int] = None, adapt_n: bool = False, b_scan: int = 64,
                   cert: Optional[Certificate] = None, budget: int = WITNESS_BUDGET):
    """Witness with target ``x`` and a check of ``lam^n T^n w = w``.

    Equality must be exact on the base block, on every coordinate of levels
    below ``levels`` and on every coordinate outside the assigned set; only the
    top level may differ, and its mass is compared against its closed-form bound.
    """
    cert = _require_certified(op, cert)
    w, plan = build_witness(op, x, x, epsilon, levels, n, adapt_n, cert, budget)
    base_report = verify_witness(op, x, x, w, plan)
    image = iterate(op, w, plan.n, scaled=True)
    diff = image - w
    top = plan.L
    for k in diff:
        if k <= plan.j:
            raise ExactnessError(f"periodicity fails at base coordinate {k}")
        a = plan.assignments.get(k)
        if a is None:
            raise ExactnessError(f"periodicity fails at unassigned coordinate {k}")
        if a.level != top or image[k] != 0:
            raise ExactnessError(f"periodicity fails at level-{a.level} coordinate {k}")
    a_checked = sum(1 for a in plan.assignments.values() if a.level < top)
    b_checked = 0
    for k in range(plan.j + 1, plan.j + 1 + b_scan):
        if k in plan.assignments:
            continue
        if classify_coordinate(plan, op.fam, k).tag == "B":
            if diff[k] != 0:  # pragma: no cover - guarded by the loop above
                raise ExactnessError(f"periodicity fails at B coordinate {k}")
            b_checked += 1
    mass = lp_norm_pow(diff, plan.p).value
    bound = plan.j * sup_norm(x).value ** plan.p / (plan.gamma * plan.lam) ** (plan.p * top * plan.n)
    report = VerifyReport(
        base_report.base_exact, base_report.approach_error, base_report.target_error,
        base_report.tail_bound, plan.epsilon, top - 1, mass, bound, a_checked, b_checked)
    return w, plan, report


def _pull_words(fam: Family, k: int, length: int, j: int) -> list:
    frontier = [(k, ())]
    for step in range(length):
        remaining = length - step - 1
        nxt = []
        for v, suffix in frontier:
            for a, f in enumerate(fam.maps, 1):
                u = f.preimage(v)
                # each further pullback lowers the value by at least one
                if u is not None and u >= 1 + remaining:
                    nxt.append((u, (a,) + suffix))
        frontier = nxt
        if not frontier:
            break
    return [(word, i) for i, word in frontier if i <= j]


def classify_coordinate(plan: WitnessPlan, fam: Family, k: int) -> CoordClass:
    """Tag ``k`` as Base when ``k <= j``, else A (level, least word, base index) when reached, else B."""
    if k < 1:
        raise ValueError("coordinates start at 1")
    if k <= plan.j:
        return CoordClass(k, "Base")
    for level in range(1, plan.L + 1):
        hits = _pull_words(fam, k, level * plan.n, plan.j)
        if hits:
            bases = {i for _, i in hits}
            if len(bases) != 1:
                raise ExactnessError(f"coordinate {k} reached from several base indices {sorted(bases)}")
            word, i = min(hits)
            return CoordClass(k, "A", level, word, i)
    return CoordClass(k, "B")


def witness_json(w: SparseSeq, plan: WitnessPlan, report: VerifyReport) -> dict:
    return {
        "n": plan.n,
        "L": plan.L,
        "j": plan.j,
        "w": w.to_json(),
        "plan": plan.to_json(),
        "report": report.to_json(),
    }


__all__ = [
    "Assignment", "CoordClass", "VerifyReport", "WitnessPlan", "build_periodic", "build_witness",
    "choose_n", "classify_coordinate", "estimate_cost", "padded_j", "tail_bound", "verify_witness",
    "witness_json", "Q",
]
