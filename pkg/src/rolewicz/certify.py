"""Decide the sufficient conditions for chaos of ``lam * sum c_i T_{f_i}``.

The verdicts only ever assert chaos; ``ThresholdNotMet`` and
``NonZeroConditionFails`` mean the sufficient conditions do not apply, which
is a statement about the certificate and not a proof of non-chaos (except for
the vanishing first-level class, where the operator kills a coordinate).
"""

from __future__ import annotations

import enum
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import NonZeroConditionViolation
from .maps import ALPHA_NAME, Family, disjoint_ranges
from .operator import OperatorSpec
from .scalars import Q, fmt, is_rational, rational
from .words import DEFAULT_BUDGET, compute_gamma, enumerate_classes, first_zero_class, word_at


class Verdict(str, enum.Enum):
    CERTIFIED = "CertifiedChaotic"
    THRESHOLD_NOT_MET = "ThresholdNotMet"
    NONZERO_FAILS = "NonZeroConditionFails"
    HEURISTIC = "HeuristicOnly"


VERDICT_WORDING = {
    Verdict.CERTIFIED: "lambda*T is chaotic (sufficient conditions verified exactly)",
    Verdict.THRESHOLD_NOT_MET: "sufficient condition not met; no claim of non-chaos is made",
    Verdict.NONZERO_FAILS: "non-zero condition fails; the sufficient conditions do not apply",
    Verdict.HEURISTIC: "all checks passed but not exactly (horizon-bounded m or float mode); not a proof",
}


@dataclass(frozen=True)
class NonZeroCheck:
    passed: bool
    witness: Optional[tuple] = None

    def __bool__(self):
        return self.passed


def check_nonzero_condition(fam: Family, coeffs: Sequence, m: Optional[int] = None,
                            budget: int = DEFAULT_BUDGET) -> NonZeroCheck:
    """Exact test of ``c([sigma]_i) != 0`` for ``|sigma| <= m`` and ``i <= m``."""
    m = fam.m if m is None else m
    if m < 1:
        raise ValueError("m must be >= 1")
    hit = first_zero_class(fam, coeffs, m, budget)
    if hit is None:
        return NonZeroCheck(True)
    return NonZeroCheck(False, hit)


def lambda_threshold(t: int, gamma) -> object:
    """Exclusive lower bound on lambda: ``4 t**2 / gamma`` for ``t >= 2``.

    For a single map the bound is ``1 / gamma``: ``lam * c_1 * T_f`` is chaotic
    exactly when ``lam * |c_1| > 1``, and ``gamma = min(1, |c_1|)``.
    """
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    if t == 1:
        return 1 / gamma
    return 4 * t * t / gamma


@dataclass
class Certificate:
    m: int
    m_status: str
    gamma: object
    lambda_min: object
    lambda_given: object
    verdict: Verdict
    witness: Optional[tuple] = None
    notes: list = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.verdict is Verdict.CERTIFIED

    def to_json(self) -> dict:
        witness = None
        if self.witness is not None:
            witness = {"word": list(self.witness[0]), "i": self.witness[1], "sum": "0"}
        return {
            "m": self.m,
            "m_status": self.m_status,
            "gamma": None if self.gamma is None else fmt(self.gamma),
            "lambda_min": None if self.lambda_min is None else fmt(self.lambda_min),
            "lambda": fmt(self.lambda_given),
            "verdict": self.verdict.value,
            "meaning": VERDICT_WORDING[self.verdict],
            "witness": witness,
            "alpha": ALPHA_NAME,
            "notes": list(self.notes),
        }


def certify(op: OperatorSpec, budget: int = DEFAULT_BUDGET) -> Certificate:
    fam, coeffs = op.fam, op.coeffs
    if all(c == 0 for c in coeffs):
        raise ValueError("all coefficients are zero: the zero operator is not chaotic")
    notes = []
    m, m_status = fam.m, fam.m_status
    if fam.t >= 2:
        ranges = disjoint_ranges(fam)
        if ranges.disjoint and ranges.exact:
            # disjoint ranges: every class is a singleton, so level 1 suffices
            notes.append("disjoint ranges: non-zero condition checked at m=1")
            m = 1
    if any(c == 0 for c in coeffs):
        notes.append("coefficient tuple contains zeros")
    check = check_nonzero_condition(fam, coeffs, m, budget)
    if not check:
        return Certificate(m, m_status, None, None, op.lam, Verdict.NONZERO_FAILS,
                           check.witness, notes)
    gamma = compute_gamma(fam, coeffs, m, budget).gamma
    lam_min = lambda_threshold(fam.t, gamma)
    if fam.t == 1:
        notes.append("single map: threshold 1/gamma")
    exact = is_rational(op.lam) and all(is_rational(c) for c in coeffs)
    if not exact:
        notes.append("float diagnostic mode: comparisons are not exact")
    if m_status != "exact":
        verdict = Verdict.HEURISTIC
        notes.append(f"m found by scanning to horizon {fam.horizon}")
    elif op.lam > lam_min and not exact:
        verdict = Verdict.HEURISTIC
    elif op.lam > lam_min:
        verdict = Verdict.CERTIFIED
    else:
        verdict = Verdict.THRESHOLD_NOT_MET
    return Certificate(m, m_status, gamma, lam_min, op.lam, verdict, None, notes)


# -- sampling evidence for almost-every coefficient tuple --------------------


@dataclass
class ClassPolynomial:
    """``c([sigma]_i)`` as a polynomial in ``c_1..c_t``: exponent vector -> multiplicity."""

    r: int
    i: int
    word: tuple
    terms: dict

    def __call__(self, coeffs) -> object:
        total = Q(0)
        for exps, mult in self.terms.items():
            term = Q(mult)
            for c, e in zip(coeffs, exps):
                if e:
                    term *= c**e
            total += term
        return total

    def __str__(self):
        parts = []
        for exps, mult in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"c{a + 1}^{e}" if e > 1 else f"c{a + 1}" for a, e in enumerate(exps) if e)
            parts.append(mono if mult == 1 else f"{mult}*{mono}")
        return " + ".join(parts)


def class_polynomials(fam: Family, m: int, budget: int = DEFAULT_BUDGET) -> list:
    """Every class-sum polynomial at word lengths ``1..m`` and bases ``1..m``."""
    polys = []
    t = fam.t
    for r in range(1, m + 1):
        for i in range(1, m + 1):
            table = enumerate_classes(fam, r, i, budget=budget)
            for value in sorted(table.classes, key=lambda v: min(table.classes[v].indices)):
                cls = table.classes[value]
                terms: Counter = Counter()
                for idx in cls.indices:
                    word = word_at(idx, t, r)
                    terms[tuple(word.count(a) for a in range(1, t + 1))] += 1
                polys.append(ClassPolynomial(r, i, word_at(min(cls.indices), t, r), dict(terms)))
    return polys


@dataclass
class SampleResult:
    n: int
    pass_count: int
    failures: list
    seed: int
    denominator: int

    def to_json(self) -> dict:
        return {
            "samples": self.n,
            "pass_count": self.pass_count,
            "failures": self.failures,
            "seed": self.seed,
            "denominator": self.denominator,
        }


def _boxes(box, t):
    if len(box) == 2 and not isinstance(box[0], (list, tuple)):
        box = [box] * t
    if len(box) != t:
        raise ValueError(f"need one interval or {t} intervals, got {len(box)}")
    return [(rational(lo), rational(hi)) for lo, hi in box]


def _grid_bounds(boxes, den):
    out = []
    for lo, hi in boxes:
        if lo > hi:
            raise ValueError("empty interval")
        a = -((-lo.numerator * den) // lo.denominator)
        b = (hi.numerator * den) // hi.denominator
        if a > b:
            raise ValueError("interval contains no grid point")
        out.append((int(a), int(b)))
    return out


def _sample_chunk(args):
    polys, bounds, den, child, count, offset = args
    rng = np.random.default_rng(child)
    draws = np.stack([rng.integers(a, b, size=count, endpoint=True) for a, b in bounds], axis=1)
    passes, failures = 0, []
    for row_no, row in enumerate(draws.tolist()):
        coeffs = [Q(int(u), den) for u in row]
        bad = None
        for poly in polys:
            if poly(coeffs) == 0:
                bad = poly
                break
        if bad is None:
            passes += 1
        else:
            failures.append({
                "sample": offset + row_no,
                "coeffs": [fmt(c) for c in coeffs],
                "word": list(bad.word),
                "i": bad.i,
                "polynomial": str(bad),
            })
    return passes, failures


def sample_coefficients(fam: Family, m: Optional[int], box, n: int, seed: int = 0,
                        denominator: int = 10**6, chunk: int = 1000, workers: int = 1,
                        budget: int = DEFAULT_BUDGET) -> SampleResult:
    """Draw ``n`` coefficient tuples from a rational grid and test the non-zero condition.

    ``box`` is one interval for all coordinates or one per coordinate.  Chunk
    ``c`` always uses the ``c``-th spawned seed, so results do not depend on
    ``workers``.  Every failure is re-verified from scratch before reporting.
    """
    if n < 1:
        raise ValueError("need at least one sample")
    m = fam.m if m is None else m
    polys = class_polynomials(fam, m, budget)
    bounds = _grid_bounds(_boxes(box, fam.t), denominator)
    nchunks = -(-n // chunk)
    children = np.random.SeedSequence(seed).spawn(nchunks)
    jobs = []
    for c in range(nchunks):
        count = min(chunk, n - c * chunk)
        jobs.append((polys, bounds, denominator, children[c], count, c * chunk))
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_sample_chunk, jobs))
    else:
        results = [_sample_chunk(job) for job in jobs]
    passes = sum(p for p, _ in results)
    failures = [f for _, fs in results for f in fs]
    for f in failures:
        coeffs = [rational(c) for c in f["coeffs"]]
        table = enumerate_classes(fam, len(f["word"]), f["i"], coeffs, budget)
        if table.class_of(f["word"]).total != 0:  # pragma: no cover - bug guard
            raise AssertionError(f"sampled failure not reproduced: {f}")
    return SampleResult(n, passes, failures, seed, denominator)


__all__ = [
    "Certificate", "NonZeroCheck", "NonZeroConditionViolation", "SampleResult", "Verdict",
    "certify", "check_nonzero_condition", "class_polynomials", "lambda_threshold",
    "sample_coefficients",
]
