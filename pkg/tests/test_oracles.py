import json

import pytest

from rolewicz.errors import BudgetExceeded
from rolewicz.maps import ceil_family, counterexample_family, interleaved_family, shift_family
from rolewicz.oracles import (
    SWEEPS, SweepConfig, negative_control, run_all, sweep_prop0, sweep_prop2, sweep_prop3,
    sweep_prop_counts, sweep_prop_half, sweep_prop_quarter,
)
from rolewicz.scalars import Q
from rolewicz.words import enumerate_classes


def test_prop0_examples():
    assert sweep_prop0(SweepConfig(counterexample_family(), r_max=3, k_max=20)).ok
    assert sweep_prop0(SweepConfig(ceil_family([Q(3, 2), Q(5, 4)]), r_max=2, k_max=15)).ok
    bad = sweep_prop0(negative_control("prop0"))
    v = bad.violations[0]
    assert (v["r"], v["value"], {v["k"], v["k2"]}) == (1, 3, {1, 2})


def test_prop_quarter_notes_coincidences_below_m():
    res = sweep_prop_quarter(SweepConfig(counterexample_family(), r_max=3, k_max=10))
    assert res.ok and any("below m=2" in n for n in res.notes)


def test_prop_half_and_counts_examples(ce_fam):
    assert enumerate_classes(ce_fam, 3, 1).count == 4 == 2 * enumerate_classes(ce_fam, 2, 1).count
    assert enumerate_classes(ce_fam, 4, 1).count == 8
    assert sweep_prop_half(SweepConfig(ce_fam, r_max=3, k_max=5)).ok
    assert sweep_prop_counts(SweepConfig(ce_fam, r_max=4, k_max=5)).ok
    single = SweepConfig(shift_family(), r_max=4, k_max=8)
    assert sweep_prop_half(single).ok and sweep_prop_counts(single).ok


def test_prop2_holds_even_when_condition_fails(ce_fam):
    assert sweep_prop2(SweepConfig(ce_fam, (Q(2), Q(2)), r_max=3, k_max=5)).ok
    assert sweep_prop2(SweepConfig(ce_fam, (Q(2), Q(-2)), r_max=3, k_max=5)).ok


def test_prop3_examples(ce_fam, parity_fam):
    assert sweep_prop3(SweepConfig(ce_fam, (Q(2), Q(2)), r_max=4, k_max=10)).ok
    res = sweep_prop3(SweepConfig(parity_fam, (Q(1, 2), Q(1, 3)), r_max=4, k_max=10))
    assert res.ok and "gamma=1/3" in res.notes
    assert sweep_prop3(SweepConfig(shift_family(), (Q(1),), r_max=4, k_max=10)).ok


@pytest.mark.parametrize("name", sorted(SWEEPS))
def test_negative_controls(name):
    ci = SWEEPS[name](negative_control(name))
    assert len(ci.violations) == 1 and ci.notes[-1].startswith("stopped")
    audit = SWEEPS[name](negative_control(name, mode="audit"))
    assert len(audit.violations) >= 1


def test_violations_serialize_and_reproduce():
    res = sweep_prop0(negative_control("prop0", mode="audit"))
    again = json.loads(json.dumps(res.to_json()))
    assert again == res.to_json()
    fam = negative_control("prop0").fam
    from rolewicz.words import eval_word
    for v in again["violations"]:
        assert eval_word(fam, v["sigma"], v["k"]) == eval_word(fam, v["tau"], v["k2"]) == v["value"]


def test_run_all_deterministic():
    cfg = SweepConfig(interleaved_family(3), (Q(1), Q(2), Q(-1, 2)), r_max=3, k_max=8)
    a = {k: v.to_json() for k, v in run_all(cfg).items()}
    b = {k: v.to_json() for k, v in run_all(cfg).items()}
    assert a == b and set(a) == set(SWEEPS)
    assert set(run_all(SweepConfig(interleaved_family(3), r_max=2, k_max=4))) == set(SWEEPS) - {"prop2", "prop3"}


def test_sweep_config_guards(ce_fam):
    with pytest.raises(BudgetExceeded):
        SweepConfig(ce_fam, r_max=30)
    with pytest.raises(ValueError):
        SweepConfig(ce_fam, mode="fast")
    with pytest.raises(ValueError):
        sweep_prop2(SweepConfig(ce_fam))
