import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import categorical_table
from mirank.discretize import (
    BinningRule,
    bin_count,
    discretize_column,
    discretize_table,
    elbow_clusters,
    equal_width_codes,
    kmeans_1d,
)
from oracles import optimal_kmeans_sse


def test_closed_form_counts():
    assert bin_count(BinningRule("sturges"), np.arange(768.0)) == 11
    assert bin_count(BinningRule("rice"), np.arange(16.0)) == 6
    assert bin_count(BinningRule("cencov"), np.arange(1000.0)) == 10


@pytest.mark.parametrize("power", range(1, 11))
def test_sturges_on_powers_of_two(power):
    n = 2**power
    assert bin_count(BinningRule("sturges"), np.arange(float(n))) == power + 1


def test_freedman_diaconis_regression():
    # order statistics 24.75 and 74.25 by hand; IQR = 49.5
    x = np.arange(100.0)
    width = 2 * 49.5 * 100 ** (-1 / 3)
    assert math.ceil(99 / width) == 5
    assert bin_count(BinningRule("fd"), x) == 5


def test_scott_and_doane_match_formulas():
    rng = np.random.default_rng(3)
    x = rng.exponential(size=500)
    s = float(np.sqrt(np.sum((x - x.mean()) ** 2) / (x.size - 1)))
    scott = math.ceil((x.max() - x.min()) / (3.49 * s * x.size ** (-1 / 3)))
    assert bin_count(BinningRule("scott"), x) == scott
    n = x.size
    m2 = np.mean((x - x.mean()) ** 2)
    m3 = np.mean((x - x.mean()) ** 3)
    g1 = m3 / m2**1.5 * math.sqrt(n * (n - 1)) / (n - 2)
    sg = math.sqrt(6 * (n - 2) / ((n + 1) * (n + 3)))
    assert bin_count(BinningRule("doane"), x) == math.ceil(1 + math.log2(n) + math.log2(1 + abs(g1) / sg))


def test_degenerate_and_zero_iqr_fallbacks():
    with pytest.warns(RuntimeWarning):
        assert bin_count(BinningRule("scott"), [3.0, 3.0, 3.0]) == 1
    x = np.array([0.0] * 10 + [1.0])
    with pytest.warns(RuntimeWarning, match="Sturges"):
        assert bin_count(BinningRule("fd"), x) == math.ceil(math.log2(11)) + 1


def test_rule_parsing():
    assert BinningRule.parse("manual:5") == BinningRule("manual", k=5)
    assert BinningRule.parse("kmeans").ratio == 0.75
    assert BinningRule.parse("kmeans:0.9").ratio == 0.9
    assert str(BinningRule.parse("FD")) == "fd"
    for bad in ("manual", "manual:1", "kmeans:1.5", "bogus", "sturges:3"):
        with pytest.raises(ValueError):
            BinningRule.parse(bad)


def test_constant_column_single_code():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        codes, k = discretize_column([1.0, 1.0, 1.0, 1.0], BinningRule("sturges"))
    assert codes.tolist() == [0, 0, 0, 0] and k == 1


def test_manual_split_at_midpoint():
    codes, k = discretize_column(np.arange(10.0), BinningRule("manual", k=2))
    assert codes.tolist() == [0] * 5 + [1] * 5 and k == 2


def test_max_lands_in_top_bin_both_conventions():
    x = np.array([0.0, 1.0, 2.0, 3.0])
    assert equal_width_codes(x, 3, "left").tolist() == [0, 1, 2, 2]
    assert equal_width_codes(x, 3, "right").tolist() == [0, 0, 1, 2]


def test_empty_bins_keep_arity():
    codes, k = discretize_column([0.0, 0.1, 10.0], BinningRule("manual", k=5))
    assert k == 5 and codes.tolist() == [0, 0, 4]


def test_normal_sample_against_rebinning_oracle():
    x = np.random.default_rng(42).standard_normal(1000)
    codes, k = discretize_column(x, BinningRule("sturges"))
    assert k == 11
    lo, hi = x.min(), x.max()
    w = (hi - lo) / k
    oracle = [min(int((v - lo) / w), k - 1) for v in x]
    assert np.bincount(codes, minlength=k).tolist() == np.bincount(oracle, minlength=k).tolist()


@settings(max_examples=1000)
@given(
    st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=2, max_size=60),
    st.sampled_from(["sturges", "rice", "cencov", "scott", "fd", "doane", "manual:4"]),
    st.sampled_from(["left", "right"]),
)
def test_histogram_codes_are_monotone(values, rule, closed):
    x = np.array(values)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        codes, k = discretize_column(x, BinningRule.parse(rule), closed)
    order = np.argsort(x, kind="stable")
    assert np.all(np.diff(codes[order]) >= 0)
    assert codes.min() >= 0 and codes.max() < k


def test_elbow_two_point_masses():
    x = np.array([0.0] * 20 + [100.0] * 30)
    codes, k = elbow_clusters(x, 0.75)
    assert k == 2
    assert set(codes[:20]) == {0} and set(codes[20:]) == {1}


def test_elbow_constant():
    codes, k = elbow_clusters([5.0, 5.0, 5.0], 0.5)
    assert k == 1 and codes.tolist() == [0, 0, 0]


def test_elbow_three_gaussians_with_exact_oracle():
    rng = np.random.default_rng(7)
    x = np.concatenate([rng.normal(m, 1.0, 60) for m in (0.0, 15.0, 30.0)])
    total = float(np.sum((x - x.mean()) ** 2))
    best = {k: 1 - optimal_kmeans_sse(x, k) / total for k in range(1, 6)}
    # the oracle says k = 3 is the first to explain 90 % of the variance
    assert best[2] < 0.9 <= best[3]
    codes, k = elbow_clusters(x, 0.9)
    assert k == 3
    labels, centers = kmeans_1d(x, 3)
    sse = sum(float(np.sum((x[labels == j] - centers[j]) ** 2)) for j in range(3))
    assert sse == pytest.approx(optimal_kmeans_sse(x, 3), rel=1e-9)
    assert list(centers) == sorted(centers)


def test_kmeans_is_deterministic():
    x = np.random.default_rng(1).normal(size=200)
    a = elbow_clusters(x, 0.75)
    b = elbow_clusters(x, 0.75)
    assert np.array_equal(a[0], b[0]) and a[1] == b[1]


def test_table_passthrough_and_arity(pima, longley):
    d = discretize_table(pima, BinningRule("sturges"))
    assert d.arities["glucose"] == 11
    assert np.array_equal(d["diabetes"], pima["diabetes"].values)
    assert d.provenance["diabetes"] == "categorical"
    m3 = discretize_table(longley, BinningRule("manual", k=3))
    assert all(a <= 3 for a in m3.arities.values())
    cat = categorical_table({"a": ["x", "y", "x"], "b": ["p", "p", "q"]})
    dc = discretize_table(cat, BinningRule("scott"))
    for c in cat.columns:
        assert np.array_equal(dc[c.name], c.values)


def test_codes_within_arity_for_all_rules(pima):
    for rule in ("cencov", "fd", "scott", "sturges", "doane", "rice", "kmeans", "manual:7"):
        d = discretize_table(pima, BinningRule.parse(rule))
        for name, codes in d.codes.items():
            assert codes.min() >= 0 and codes.max() < d.arities[name]
            assert d.n_rows == pima.n_rows


def test_discretize_rejects_non_finite():
    with pytest.raises(ValueError):
        discretize_column([1.0, np.inf], BinningRule("sturges"))


def test_width_rules_cap_at_sample_size():
    x = np.array([0.0, 0.0, 0.0, 1.0, 3.7e-39])
    with pytest.warns(RuntimeWarning, match="capping"):
        assert bin_count(BinningRule("fd"), x) == 5
    with pytest.warns(RuntimeWarning, match="capping"):
        assert bin_count(BinningRule("scott"), np.array([0.0, 8.3e-199])) == 2
