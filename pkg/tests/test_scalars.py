from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rolewicz.scalars import (
    FLOAT, Q, RATIONAL, SparseSeq, fmt, lp_norm_pow, rational, seq_axpy, sup_norm,
)
from strategies import rationals, sparse_seqs


def S(d):
    return SparseSeq({k: rational(v) for k, v in d.items()})


@pytest.mark.parametrize("x, p, expected", [
    ({}, 2, "0"),
    ({1: "3/2", 3: "-1/2"}, 2, "5/2"),
    ({1: "1", 3: "1/4", 5: "1/16"}, 1, "21/16"),
])
def test_lp_norm_pow_examples(x, p, expected):
    assert lp_norm_pow(S(x), p).value == rational(expected)


@pytest.mark.parametrize("x, expected", [
    ({}, "0"), ({2: "-3", 7: "2"}, "3"), ({1: "1/3", 9: "1/3"}, "1/3"),
])
def test_sup_norm_examples(x, expected):
    assert sup_norm(S(x)).value == rational(expected)


def test_axpy_examples():
    assert seq_axpy(Q(1), S({1: "1"}), S({1: "-1"})) == SparseSeq()
    assert len(seq_axpy(Q(1), S({1: "1"}), S({1: "-1"}))) == 0
    assert seq_axpy(Q(0), S({4: "9"}), S({2: "5"})) == S({2: "5"})
    assert seq_axpy(Q(2), S({3: "1/2"}), S({1: "1"})) == S({1: "1", 3: "1"})


def test_rational_parsing():
    assert rational("3/6") == Q(1, 2)
    assert rational(" -4 ") == Q(-4)
    assert rational(Fraction(2, 3)) == Q(2, 3)
    for bad in ("1.5", "x", "1/-2", ""):
        with pytest.raises(ValueError):
            rational(bad)
    with pytest.raises(ZeroDivisionError):
        rational("1/0")
    with pytest.raises(TypeError):
        rational(0.5)
    with pytest.raises(TypeError):
        rational(True)


def test_fmt_round_trip_and_float_mode():
    assert fmt(Q(-3, 4)) == "-3/4"
    assert fmt(Q(5)) == "5"
    assert FLOAT.convert("1/4") == 0.25
    assert RATIONAL.convert("1/4") == Q(1, 4)
    assert not FLOAT.exact


def test_non_integer_p():
    with pytest.raises((ValueError, TypeError)):
        lp_norm_pow(S({1: "1"}), 1.5)
    assert lp_norm_pow(SparseSeq({1: 0.5}), 1.5).value == pytest.approx(0.5**1.5)


def test_indices_start_at_one():
    with pytest.raises(ValueError):
        SparseSeq({0: Q(1)})


def test_json_round_trip():
    x = S({1: "1", 10: "-7/3"})
    assert x.to_json() == {"1": "1", "10": "-7/3"}
    assert SparseSeq.from_json(x.to_json()) == x
    with pytest.raises(ValueError):
        SparseSeq.from_json({"a": "1"})


@given(sparse_seqs(), sparse_seqs(), st.integers(1, 3))
def test_norm_of_sum_matches_merged_supports(x, y, p):
    z = x + y
    merged = sum((abs(x[k] + y[k]) ** p for k in set(x) | set(y)), Q(0))
    assert lp_norm_pow(z, p).value == merged


@given(sparse_seqs(), sparse_seqs(), rationals())
def test_no_stored_zeros(x, y, a):
    for seq in (x + y, x - y, seq_axpy(a, x, y), x.scale(a), -x, x - x):
        assert all(v != 0 for v in seq.values())
    assert len(x - x) == 0


@given(rationals(), rationals(nonzero=True), rationals(), rationals(nonzero=True))
def test_canonical_equality_agrees_with_cross_multiplication(a, b, c, d):
    assert (a / b == c / d) == (a.numerator * b.denominator * d.numerator * c.denominator
                                == c.numerator * d.denominator * b.numerator * a.denominator)
