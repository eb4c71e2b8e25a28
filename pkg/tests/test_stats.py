import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from padicplural.harness import EvaluationRecord
from padicplural.regress import AlgorithmSpec, Variant
from padicplural.stats import (
    BONFERRONI,
    SIDAK,
    DomainError,
    EmptyInput,
    NoOverlappingLanguages,
    PlanRow,
    bonferroni_correct,
    compare_families,
    default_plan,
    global_vs_local_plan,
    pratt_ranks,
    sidak_style_correct,
    wilcoxon_pratt,
    wilcoxon_pratt_one_sided,
)

from oracles import brute_force_wilcoxon

small_diffs = st.lists(st.integers(-6, 6).map(Fraction) | st.fractions(-3, 3, max_denominator=4), min_size=1, max_size=10)


def test_wilcoxon_examples():
    assert wilcoxon_pratt_one_sided([0, 0, 0]) == 1.0
    assert wilcoxon_pratt_one_sided([1, 2, 3]) == 1 / 8
    assert wilcoxon_pratt_one_sided([0, 1, -1]) == 3 / 4
    assert wilcoxon_pratt_one_sided([Fraction(1, 10)] * 10) == 1 / 1024


def test_pratt_ranks_include_zeros():
    assert pratt_ranks([0, 1, -1]) == [1, Fraction(5, 2), Fraction(5, 2)]
    w = wilcoxon_pratt([0, 1, -1])
    assert (w.w_plus, w.n_nonzero) == (Fraction(5, 2), 2)


def test_empty_input():
    with pytest.raises(EmptyInput):
        wilcoxon_pratt([])


@given(small_diffs)
def test_exact_matches_sign_enumeration(diffs):
    assert wilcoxon_pratt(diffs, "exact").p_value == float(brute_force_wilcoxon(diffs))


@given(small_diffs)
def test_opposite_tails_cover(diffs):
    a = wilcoxon_pratt_one_sided(diffs)
    b = wilcoxon_pratt_one_sided([-d for d in diffs])
    assert a + b >= 1 - 1e-12


def test_normal_tails_cover():
    rng = random.Random(5)
    for _ in range(50):
        d = [rng.randint(-9, 9) for _ in range(30)]
        a = wilcoxon_pratt(d, "normal").p_value
        b = wilcoxon_pratt([-x for x in d], "normal").p_value
        assert a + b >= 1 - 1e-12


def test_auto_switches_to_normal_above_20():
    d = list(range(1, 22))
    assert wilcoxon_pratt(d).method == "normal"
    assert wilcoxon_pratt(d[:20]).method == "exact"


def test_exact_and_normal_agree():
    rng = random.Random(11)
    for _ in range(100):
        n = rng.randint(10, 20)
        d = [Fraction(rng.gauss(0.2, 1)).limit_denominator(10**6) for _ in range(n)]
        exact = wilcoxon_pratt(d, "exact").p_value
        approx = wilcoxon_pratt(d, "normal").p_value
        assert abs(exact - approx) <= 0.02


def test_sidak_examples():
    assert sidak_style_correct(0.0, 80) == 0.0
    assert sidak_style_correct(0.3, 1) == pytest.approx(0.3, abs=1e-15)
    exact = 1 - (1 - Fraction("0.00263")) ** 80
    assert sidak_style_correct(0.00263, 80) == pytest.approx(float(exact), abs=1e-12)
    assert sidak_style_correct(1.0, 80) == 1.0


def test_bonferroni_examples():
    assert bonferroni_correct(5.98e-3, 9) == pytest.approx(0.05382, abs=1e-12)
    assert bonferroni_correct(0.5, 3) == 1.0
    assert bonferroni_correct(0.125, 1) == 0.125


@pytest.mark.parametrize("fn", [sidak_style_correct, bonferroni_correct])
def test_corrections_domain(fn):
    for bad in (-0.1, 1.5, math.nan):
        with pytest.raises(DomainError):
            fn(bad, 3)
    with pytest.raises(DomainError):
        fn(0.5, 0)


@given(st.floats(0, 1), st.floats(0, 1), st.integers(1, 200), st.integers(1, 200))
def test_corrections_monotone(p, q, m, n):
    lo, hi = sorted((p, q))
    mlo, mhi = sorted((m, n))
    for fn in (sidak_style_correct, bonferroni_correct):
        assert fn(lo, mlo) <= fn(hi, mlo) + 1e-15
        assert fn(lo, mlo) <= fn(lo, mhi) + 1e-15
        assert fn(lo, mlo) >= lo
    if lo * mlo <= 1:
        assert sidak_style_correct(lo, mlo) <= bonferroni_correct(lo, mlo) + 1e-12


def records_for(langs, variant, accs, k=None):
    return [EvaluationRecord(l, AlgorithmSpec(variant, 2, k), 4, int(a * 4)) for l, a in zip(langs, accs)]


def test_compare_identical():
    langs = ["a", "b", "c"]
    recs = records_for(langs, Variant.GLOBAL_PADIC, [0.5, 0.75, 1]) + records_for(langs, Variant.GLOBAL_SIEGEL, [0.5, 0.75, 1])
    (t,) = compare_families(recs, {"F": langs}, [PlanRow("F", "global_padic", "global_siegel", SIDAK, 80)])
    assert (t.p_raw, t.p_corrected, t.n_languages) == (1.0, 1.0, 3)


def test_compare_all_wins():
    langs = [f"l{i}" for i in range(10)]
    recs = records_for(langs, Variant.LOCAL_PADIC, [1] * 10, k=3) + records_for(langs, Variant.LOCAL_SIEGEL, [0.5] * 10, k=3)
    (t,) = compare_families(recs, {"F": langs}, [PlanRow("All", "local_padic", "local_siegel", BONFERRONI, 1)])
    assert t.p_raw == 1 / 1024
    assert t.comparison == "local_padic>local_siegel"


def test_compare_drops_missing_and_raises_when_empty(caplog):
    recs = records_for(["a", "b"], Variant.GLOBAL_PADIC, [1, 1]) + records_for(["a"], Variant.GLOBAL_SIEGEL, [0])
    (t,) = compare_families(recs, {"F": ["a", "b"]}, [PlanRow("F", "global_padic", "global_siegel")])
    assert t.n_languages == 1 and "dropped b" in caplog.text
    with pytest.raises(NoOverlappingLanguages):
        compare_families(recs, {"G": ["b"]}, [PlanRow("G", "global_padic", "global_siegel")])


def test_default_plan_shape():
    catalog = {f"Family{i:02d}": [f"x{i}"] for i in range(19)}
    plan = default_plan(catalog)
    assert len(plan) == 80
    assert {row.m for row in plan} == {80}
    assert plan[-1].family == "All"


def test_global_vs_local_plan_directions():
    langs = ["a", "b"]
    recs = (
        records_for(langs, Variant.GLOBAL_PADIC, [0.5, 1])
        + records_for(langs, Variant.LOCAL_PADIC, [1, 0.25], k=3)
    )
    plan = global_vs_local_plan(recs, {"F": ["a"], "G": ["b"]})
    assert [(r.family, r.variant_a, r.m) for r in plan] == [
        ("F", "local_padic", 1),
        ("G", "global_padic", 2),
        ("All", "global_padic", 2),
    ]
