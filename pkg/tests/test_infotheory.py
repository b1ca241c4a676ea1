import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from mirank.errors import EmptyInputError, SingularCovarianceError, TooFewRowsError
from mirank.infotheory import (
    Estimator,
    JointTable,
    contingency,
    entropy_plugin,
    mi_from_table,
    mi_gaussian,
    mi_knn,
    mi_plugin,
)

LN2 = math.log(2)


def exact_corr_pair(rho: float, n: int, seed: int):
    """Sample whose Pearson correlation is ``rho`` up to rounding."""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n)
    z = rng.standard_normal(n)
    x = (x - x.mean()) / x.std()
    z = z - z.mean()
    z = z - (z @ x) / (x @ x) * x
    z = z / z.std()
    return x, rho * x + math.sqrt(1 - rho**2) * z


def table_codes(counts):
    counts = np.asarray(counts)
    a, b = [], []
    for (i, j), c in np.ndenumerate(counts):
        a += [i] * int(c)
        b += [j] * int(c)
    return np.array(a), np.array(b)


def test_entropy_examples():
    assert entropy_plugin(np.array([0, 0, 1, 1])) == pytest.approx(LN2, abs=1e-12)
    assert entropy_plugin(np.array([3, 3, 3])) == 0.0
    assert entropy_plugin([np.array([0, 0, 1, 1]), np.array([0, 1, 0, 1])]) == pytest.approx(math.log(4), abs=1e-12)
    assert entropy_plugin(np.array([0, 1]), base=2) == pytest.approx(1.0)
    with pytest.raises(EmptyInputError):
        entropy_plugin(np.array([], dtype=int))


def test_mi_examples():
    a, b = table_codes([[1, 1], [1, 1]])
    assert mi_plugin(a, b) == pytest.approx(0.0, abs=1e-15)
    a, b = table_codes([[2, 0], [0, 2]])
    assert mi_plugin(a, b) == pytest.approx(LN2, abs=1e-12)
    x = np.array([0, 1, 2, 2, 1, 0, 0])
    assert mi_plugin(x, x.copy()) == pytest.approx(entropy_plugin(x), abs=1e-12)


def test_joint_table_validation():
    with pytest.raises(EmptyInputError):
        JointTable(np.zeros((1, 1), dtype=int), 0)
    with pytest.raises(ValueError):
        JointTable(np.array([[1, 1]]), 3)
    t = contingency(np.array([0, 0, 1]), np.array([1, 0, 1]))
    assert t.counts.tolist() == [[1, 1], [0, 1]] and t.n == 3
    assert mi_from_table(t) == pytest.approx(mi_plugin(np.array([0, 0, 1]), np.array([1, 0, 1])))


def test_plugin_matches_counter_oracle():
    rng = np.random.default_rng(11)
    for _ in range(200):
        n = int(rng.integers(2, 40))
        a = rng.integers(0, 4, n)
        b = (a + rng.integers(0, 3, n)) % 5
        c = rng.integers(0, 2, n)
        assert mi_plugin(a, [b, c], base=2) == pytest.approx(oracles.mutual_info([a], [b, c]), abs=1e-12)
        assert entropy_plugin([a, c], base=2) == pytest.approx(oracles.entropy(a, c), abs=1e-12)


codes = st.lists(st.integers(0, 4), min_size=1, max_size=40)


@settings(max_examples=1000)
@given(st.data())
def test_mi_symmetry_nonnegativity_bounds(data):
    a = np.array(data.draw(codes))
    b = np.array(data.draw(st.lists(st.integers(0, 4), min_size=a.size, max_size=a.size)))
    ab, ba = mi_plugin(a, b), mi_plugin(b, a)
    assert ab == ba
    assert ab >= 0
    assert ab <= min(entropy_plugin(a), entropy_plugin(b)) + 1e-12
    assert mi_plugin(a, a) == pytest.approx(entropy_plugin(a), abs=1e-12)
    h = entropy_plugin(a) + entropy_plugin(b) - entropy_plugin([a, b])
    assert ab == pytest.approx(max(h, 0.0), abs=1e-12)


@settings(max_examples=1000)
@given(st.data())
def test_merging_codes_never_increases_mi(data):
    a = np.array(data.draw(st.lists(st.integers(0, 3), min_size=2, max_size=30)))
    b = np.array(data.draw(st.lists(st.integers(0, 3), min_size=a.size, max_size=a.size)))
    x, y = data.draw(st.integers(0, 3)), data.draw(st.integers(0, 3))
    merged = np.where(b == y, x, b)
    assert mi_plugin(a, merged) <= mi_plugin(a, b) + 1e-12


def test_gaussian_exact_rho():
    x, y = exact_corr_pair(0.6, 500, 5)
    assert np.corrcoef(x, y)[0, 1] == pytest.approx(0.6, abs=1e-14)
    assert mi_gaussian(x, y) == pytest.approx(-0.5 * math.log(0.64), abs=1e-9)
    assert mi_gaussian(x, y) == pytest.approx(mi_gaussian(y, x), abs=1e-12)


def test_gaussian_uncorrelated_and_singular():
    x, y = exact_corr_pair(0.0, 200, 2)
    assert mi_gaussian(x, y) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(SingularCovarianceError) as err:
        mi_gaussian(x, 2 * x)
    assert err.value.block == "joint"
    with pytest.raises(SingularCovarianceError) as err:
        mi_gaussian([x, 3 * x], y)
    assert err.value.block == "A"


def test_gaussian_multivariate_against_formula():
    rng = np.random.default_rng(9)
    data = rng.multivariate_normal([0, 0, 0], [[1, 0.5, 0.2], [0.5, 1, 0.3], [0.2, 0.3, 1]], size=400)
    s = np.cov(data, rowvar=False)
    expected = -0.5 * math.log(np.linalg.det(s) / (np.linalg.det(s[:2, :2]) * s[2, 2]))
    assert mi_gaussian([data[:, 0], data[:, 1]], data[:, 2]) == pytest.approx(expected, abs=1e-12)


def test_knn_gaussian_and_independent():
    rng = np.random.default_rng(2024)
    xy = rng.multivariate_normal([0, 0], [[1, 0.6], [0.6, 1]], size=2000)
    assert mi_knn(xy[:, 0], xy[:, 1], k=3) == pytest.approx(-0.5 * math.log(0.64), abs=0.05)
    u = rng.random((2000, 2))
    assert abs(mi_knn(u[:, 0], u[:, 1], k=3)) < 0.05


def test_knn_ties_and_errors():
    x = np.repeat(np.arange(10.0), 5)
    y = x + np.tile(np.arange(5.0), 10) * 0.01
    a = mi_knn(x, y)
    assert a == mi_knn(x, y)
    assert a > 1.0
    with pytest.raises(TooFewRowsError):
        mi_knn(np.arange(3.0), np.arange(3.0), k=3)


def test_estimator_parsing():
    assert Estimator.parse("knn").k == 3
    assert str(Estimator.parse("knn:5")) == "knn:5"
    assert not Estimator.parse("plugin").continuous
    for bad in ("knn:0", "bogus", "gaussian:2"):
        with pytest.raises(ValueError):
            Estimator.parse(bad)
