import math

import numpy as np
import pytest

import hdspc


def test_classical_estimates_hand_case():
    x = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]])
    est = hdspc.classical_estimates(x)
    assert np.allclose(est.mu, [1.0, 1.0])
    assert np.allclose(est.d, [1.0, 1.0])
    assert est.m == 3
    assert np.allclose(est.correlation, np.ones((2, 2)))


def test_constant_column_raises_with_kind():
    x = np.zeros((5, 2))
    x[:, 0] = np.arange(5)
    with pytest.raises(hdspc.Error) as info:
        hdspc.classical_estimates(x)
    assert info.value.kind == "DegenerateVariance"
    assert isinstance(info.value, ValueError)


def test_trace_helpers():
    a = np.array([[2.0, 1.0], [1.0, 3.0]])
    assert hdspc.trace_power(a, 2) == pytest.approx(np.trace(a @ a))
    assert hdspc.trace_power(a, 3) == pytest.approx(np.trace(a @ a @ a))
    assert hdspc.correction_c(30, 357.0, 177.6) == pytest.approx(1.0126113492686484, rel=1e-12)
    assert hdspc.cf_coefficient(50.0, 50.0) == pytest.approx(4 * 50.0 / (3 * 100.0**1.5))
    assert hdspc.scaling_factor(0.5, 1, 100) == pytest.approx(7.0100745397032522, rel=1e-10)


def test_power_and_type2_are_complements():
    delta = np.full(30, 0.5 / math.sqrt(30))
    d = np.ones(30)
    p = hdspc.asymptotic_power(delta, d, 30.0, 0.05)
    b = hdspc.asymptotic_type2_error(delta, d, 30.0, 0.05)
    assert p + b == pytest.approx(1.0)


def test_rmdp_flags_shifted_rows():
    x = hdspc.sample("identity", p=20, m=60, seed=3)
    x[:5] += 4.0
    res = hdspc.rmdp(x, alpha=0.05, n_starts=100, seed=7)
    assert set(range(5)) <= set(res.chart.flagged)
    assert all(res.estimates.weights[i] == 0 for i in range(5))
    assert res.raw.stage == "raw-MDP"
    again = hdspc.rmdp(x, alpha=0.05, n_starts=100, seed=7)
    assert np.array_equal(res.estimates.mu, again.estimates.mu)


def test_z_chart_shapes():
    x = hdspc.sample("ar1", p=10, m=40, a=0.5, seed=2)
    est = hdspc.classical_estimates(x)
    chart = hdspc.z_chart(x, est.mu, est.d, est.tr2, est.tr3, c=est.c, alpha=0.01)
    assert chart.stats.shape == (40,)
    assert len(chart.flags) == 40
    assert chart.kind == "Z"


def test_raw_mdp_matches_exhaustive_on_tiny_case():
    x = hdspc.sample("identity", p=2, m=8, seed=5)
    subset, objective = hdspc.exhaustive_mdp(x, 5)
    raw = hdspc.raw_mdp(x, n_starts=200, seed=1)
    assert raw.objective >= objective - 1e-12
    assert len(subset) == 5


def test_simulation_wrappers_run():
    far, se = hdspc.false_alarm_rate("identity", p=5, m=30, reps=100, n_starts=20, seed=4)
    assert 0.0 <= far <= 1.0 and se >= 0.0
    pw, _ = hdspc.power("ar1", p=6, m=30, reps=20, delta=3.0, n_starts=20)
    assert 0.0 <= pw <= 1.0
    ks_u, ks_z = hdspc.cdf_accuracy(10, draws=2000, seed=1)
    assert ks_z < ks_u
