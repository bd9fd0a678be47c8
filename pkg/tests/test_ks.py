from hypothesis import given, strategies as st
import numpy as np
import pytest
from scipy import stats

from kappafit.exceptions import InputError
from kappafit.ks import ks_statistic


def brute_force(data, survival):
    n = len(data)
    best = 0.0
    for xj in data:
        s = survival(xj)
        above = sum(1 for xi in data if xi > xj) / n
        at_or_above = sum(1 for xi in data if xi >= xj) / n
        best = max(best, abs(above - s), abs(at_or_above - s))
    return best


def test_single_point():
    assert ks_statistic([1.0], lambda x: np.full_like(x, 0.5)) == 0.5


def test_model_quantiles():
    n = 1000
    u = (np.arange(1, n + 1) - 0.5) / n
    x = stats.expon.ppf(u)
    assert ks_statistic(x, stats.expon.sf) <= 0.5 / n + 1e-12


def test_constant_survival():
    assert ks_statistic([1.0, 2.0, 3.0, 4.0], lambda x: np.ones_like(x)) == 1.0


def test_empty():
    with pytest.raises(InputError):
        ks_statistic([], stats.expon.sf)


def test_matches_scipy():
    x = np.random.default_rng(0).exponential(size=500)
    assert ks_statistic(x, stats.expon.sf) == pytest.approx(stats.kstest(x, "expon").statistic, abs=1e-15)


@given(st.lists(st.floats(0.0, 10.0), min_size=1, max_size=60), st.floats(0.1, 3.0))
def test_brute_force(data, scale):
    def sf(v):
        return np.exp(-np.asarray(v) / scale)

    assert ks_statistic(data, sf) == pytest.approx(brute_force(data, sf), abs=1e-15)


def test_left_limits_for_atoms():
    # model with an atom of mass 0.5 at 0 and uniform mass on (0, 1]
    def sf(v):
        return np.where(v < 0, 1.0, np.where(v == 0, 0.5, 0.5 * (1 - np.clip(v, 0, 1))))

    def sf_left(v):
        return np.where(v <= 0, 1.0, sf(v))

    data = np.array([0.0, 0.0, 0.25, 0.75])
    assert ks_statistic(data, sf, sf_left) == pytest.approx(0.125)
    assert ks_statistic(data, sf) > ks_statistic(data, sf, sf_left)


@given(st.lists(st.floats(0.01, 5.0), min_size=1, max_size=40))
def test_in_unit_interval(data):
    assert 0.0 <= ks_statistic(data, stats.expon.sf) <= 1.0
