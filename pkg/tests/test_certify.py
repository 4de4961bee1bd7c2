import pytest
from hypothesis import given
from hypothesis import strategies as st

from rolewicz.certify import (
    Verdict, certify, check_nonzero_condition, class_polynomials, lambda_threshold,
    sample_coefficients,
)
from rolewicz.maps import (
    Family, ceil_family, counterexample_family, shift_family,
)
from rolewicz.operator import OperatorSpec
from rolewicz.scalars import Q
from rolewicz.words import enumerate_classes
from strategies import rationals


def test_nonzero_condition_examples(ce_fam, parity_fam):
    check = check_nonzero_condition(ce_fam, (Q(2), Q(-2)), 2)
    assert not check and check.witness == ((1,), 1)
    assert check_nonzero_condition(ce_fam, (Q(2), Q(2)), 2)
    assert check_nonzero_condition(parity_fam, (Q(1), Q(-1)), 1)
    with pytest.raises(ValueError):
        check_nonzero_condition(ce_fam, (Q(1), Q(1)), 0)


def test_threshold_examples():
    assert lambda_threshold(2, Q(1)) == 16
    assert lambda_threshold(1, Q(1)) == 1
    assert lambda_threshold(3, Q(1, 2)) == 72
    # single map: lam * |c| > 1 exactly
    assert lambda_threshold(1, Q(1, 4)) == 4
    with pytest.raises(ValueError):
        lambda_threshold(2, Q(0))


@given(st.integers(2, 6), rationals(nonzero=True), rationals(nonzero=True))
def test_threshold_monotone(t, g1, g2):
    g1, g2 = min(abs(g1), 1), min(abs(g2), 1)
    if g1 < g2:
        assert lambda_threshold(t, g1) > lambda_threshold(t, g2)
    assert lambda_threshold(t + 1, g1) > lambda_threshold(t, g1)


def test_certify_examples(ce_fam):
    cert = certify(OperatorSpec(ce_fam, (Q(2), Q(-2)), Q(10**6)))
    assert cert.verdict is Verdict.NONZERO_FAILS and cert.witness == ((1,), 1)
    cert = certify(OperatorSpec(ce_fam, (Q(2), Q(2)), Q(17)))
    assert cert.verdict is Verdict.CERTIFIED
    assert (cert.m, cert.gamma, cert.lambda_min) == (2, 1, 16)
    assert cert.to_json() | {"meaning": None, "notes": None} == {
        "m": 2, "m_status": "exact", "gamma": "1", "lambda_min": "16", "lambda": "17",
        "verdict": "CertifiedChaotic", "witness": None, "alpha": "cantor-1indexed",
        "meaning": None, "notes": None,
    }
    assert certify(OperatorSpec(ce_fam, (Q(2), Q(2)), Q(16))).verdict is Verdict.THRESHOLD_NOT_MET


def test_certify_single_map_and_disjoint_ranges(parity_fam):
    assert certify(OperatorSpec(shift_family(), (Q(1),), Q(2))).certified
    assert certify(OperatorSpec(shift_family(), (Q(1, 2),), Q(2))).verdict is Verdict.THRESHOLD_NOT_MET
    cert = certify(OperatorSpec(parity_fam, (Q(1), Q(-1)), Q(17)))
    assert cert.certified and cert.m == 1
    cert = certify(OperatorSpec(ceil_family([Q(2), Q(3)]), (Q(1), Q(1)), Q(17)))
    assert cert.certified and "disjoint ranges" in cert.notes[0]


def test_certify_zero_coefficients(parity_fam):
    with pytest.raises(ValueError):
        certify(OperatorSpec(parity_fam, (Q(0), Q(0)), Q(17)))
    cert = certify(OperatorSpec(parity_fam, (Q(1), Q(0)), Q(17)))
    assert cert.verdict is Verdict.NONZERO_FAILS
    assert any("zeros" in n for n in cert.notes)


def test_horizon_bounded_family_is_heuristic(ce_fam):
    fam = Family(ce_fam.maps, ce_fam.m, "horizon-bounded", 200)
    cert = certify(OperatorSpec(fam, (Q(2), Q(2)), Q(17)))
    assert cert.verdict is Verdict.HEURISTIC
    assert any("horizon 200" in n for n in cert.notes)


def test_float_mode_never_certifies(ce_fam):
    cert = certify(OperatorSpec(ce_fam, (2.0, 2.0), 17.0))
    assert cert.verdict is Verdict.HEURISTIC
    assert certify(OperatorSpec(ce_fam, (2.0, 2.0), 15.0)).verdict is Verdict.THRESHOLD_NOT_MET


@given(rationals(nonzero=True), rationals(nonzero=True), rationals(nonzero=True))
def test_scale_covariance(a, b, s):
    fam = counterexample_family()
    assert bool(check_nonzero_condition(fam, (a, b))) == bool(check_nonzero_condition(fam, (s * a, s * b)))


@given(rationals(), rationals())
def test_failure_witness_is_sound(a, b):
    fam = counterexample_family()
    check = check_nonzero_condition(fam, (a, b))
    if not check:
        word, i = check.witness
        assert enumerate_classes(fam, len(word), i, (a, b)).class_of(word).total == 0


def test_class_polynomials(ce_fam):
    polys = class_polynomials(ce_fam, 2)
    first = polys[0]
    assert (first.r, first.i, first.word) == (1, 1, (1,))
    assert str(first) == "c1 + c2"
    assert first((Q(2), Q(-2))) == 0
    for poly in polys:
        table = enumerate_classes(ce_fam, poly.r, poly.i, (Q(3), Q(-5, 7)))
        assert poly((Q(3), Q(-5, 7))) == table.class_of(poly.word).total


def test_sampling_examples(ce_fam):
    res = sample_coefficients(ce_fam, 2, ["-1", "1"], 1000, seed=11)
    assert res.pass_count == 1000 and not res.failures
    res = sample_coefficients(ce_fam, 2, [["2", "2"], ["-2", "-2"]], 1, seed=0)
    assert res.pass_count == 0
    assert res.failures[0]["word"] == [1] and res.failures[0]["coeffs"] == ["2", "-2"]
    res = sample_coefficients(shift_family(), 1, ["1/2", "3"], 100, seed=3)
    assert res.pass_count == 100


def test_sampling_deterministic_across_workers(ce_fam):
    box = [["-1/1000", "1/1000"], ["-1/1000", "1/1000"]]
    a = sample_coefficients(ce_fam, 2, box, 2500, seed=5, chunk=500, denominator=10**4)
    b = sample_coefficients(ce_fam, 2, box, 2500, seed=5, chunk=500, denominator=10**4, workers=2)
    assert a.to_json() == b.to_json()
    # the coarse grid lands on the line c1 + c2 = 0 now and then
    assert a.failures
    for f in a.failures:
        c1, c2 = (Q(v) for v in f["coeffs"])
        assert c1 + c2 == 0 or c1 == 0 or c2 == 0 or c1 * c2 + c2 * c2 == 0 or c1 * c1 + c1 * c2 == 0


def test_sampling_bad_box(ce_fam):
    with pytest.raises(ValueError):
        sample_coefficients(ce_fam, 2, ["1", "0"], 5)
    with pytest.raises(ValueError):
        sample_coefficients(ce_fam, 2, [["0", "1"]] * 3, 5)
    with pytest.raises(ValueError):
        sample_coefficients(ce_fam, 2, ["-1", "1"], 0)
