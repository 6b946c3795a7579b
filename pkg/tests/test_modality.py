import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from towertalk.agents import Theta
from towertalk.config import PREFER_H_R4_THETA, PREFER_U_R4_THETA, R1_THETA
from towertalk.modality import (
    KIND_ORDER,
    ModalityDistribution,
    cross_entropy,
    entropy,
    expected_modality_trajectory,
    interpolate_theta,
    kind_utilities,
    predicted_modality_distribution,
    simulate_modality_preferences,
)


def test_kind_order():
    assert KIND_ORDER == ("redundant", "language_only", "complementary")


def test_equal_utilities_give_uniform_shares():
    theta = Theta(beta_i=0.0, beta_u=3.0, beta_h=0.0, x_u=0.8, x_h=0.8)
    dist = predicted_modality_distribution(theta, clear_cost=0.3, here_cost=0.3)
    assert np.allclose(dist.as_array(), 1 / 3)


def test_fitted_first_repetition_is_language_dominated():
    u = kind_utilities(R1_THETA)
    assert u[1] == pytest.approx(-22.0387, abs=1e-3)
    assert u[0] == pytest.approx(-25.2096, abs=1e-3)
    assert u[2] == pytest.approx(-25.3180, abs=1e-3)
    dist = predicted_modality_distribution(R1_THETA)
    assert dist.p_u == pytest.approx(0.93, abs=0.01)


def test_huge_gesture_cost_forces_language_only():
    theta = Theta(beta_i=10.0, beta_u=5.0, beta_h=40.0, x_u=0.87, x_h=0.62)
    dist = predicted_modality_distribution(theta)
    assert dist.p_u > 0.99


def test_modality_distribution_validation():
    with pytest.raises(ValueError):
        ModalityDistribution(0.5, 0.6, 0.2)
    with pytest.raises(ValueError):
        ModalityDistribution(-0.1, 0.6, 0.5)


def test_cross_entropy_values():
    half = ModalityDistribution(0.5, 0.5, 0.0)
    assert cross_entropy(half, half) == pytest.approx(math.log(2))
    fig = ModalityDistribution.from_array(np.array([0.81, 0.12, 0.06]) / 0.99)
    assert cross_entropy(fig, fig) == pytest.approx(0.590, abs=1e-3)
    pred = ModalityDistribution(0.2, 0.7, 0.1)
    onehot = ModalityDistribution(0.0, 1.0, 0.0)
    assert cross_entropy(onehot, pred) == pytest.approx(-math.log(0.7))


@given(st.lists(st.floats(min_value=0.01, max_value=1.0), min_size=3, max_size=3),
       st.lists(st.floats(min_value=0.01, max_value=1.0), min_size=3, max_size=3))
def test_gibbs_inequality(raw_p, raw_q):
    p = np.array(raw_p) / sum(raw_p)
    q = np.array(raw_q) / sum(raw_q)
    assert cross_entropy(p, q) >= cross_entropy(p, p) - 1e-12
    assert cross_entropy(p, p) == pytest.approx(entropy(p))


def test_predicted_distribution_normalized_and_smooth_in_beta_u():
    h = 1e-4
    grid = np.linspace(0.0, 39.9, 60)
    prev = None
    for bu in grid:
        theta = Theta(beta_i=10.0, beta_u=float(bu), beta_h=9.23, x_u=0.87, x_h=0.62)
        dist = predicted_modality_distribution(theta).as_array()
        assert abs(dist.sum() - 1.0) < 1e-9
        bumped = predicted_modality_distribution(
            Theta(beta_i=10.0, beta_u=float(bu) + h, beta_h=9.23, x_u=0.87, x_h=0.62)
        ).as_array()
        assert np.max(np.abs(bumped - dist)) < 10 * h * 10  # bounded sensitivity
        prev = dist
    assert prev is not None


def test_increasing_gesture_cost_drains_gesture_kinds():
    base = Theta(beta_i=10.0, beta_u=10.0, beta_h=5.0, x_u=0.87, x_h=0.62)
    lower = predicted_modality_distribution(base)
    higher = predicted_modality_distribution(
        Theta(beta_i=10.0, beta_u=10.0, beta_h=8.0, x_u=0.87, x_h=0.62)
    )
    assert higher.p_r < lower.p_r
    assert higher.p_c < lower.p_c
    assert higher.p_u > lower.p_u


def test_interpolation_endpoints_and_constant_semantics():
    t1 = interpolate_theta(R1_THETA, PREFER_U_R4_THETA, 1)
    t4 = interpolate_theta(R1_THETA, PREFER_U_R4_THETA, 4)
    assert t1 == R1_THETA
    assert (t4.beta_u, t4.beta_h) == (PREFER_U_R4_THETA.beta_u, PREFER_U_R4_THETA.beta_h)
    t2 = interpolate_theta(R1_THETA, PREFER_U_R4_THETA, 2)
    assert t2.beta_u == pytest.approx(R1_THETA.beta_u + (PREFER_U_R4_THETA.beta_u - R1_THETA.beta_u) / 3)
    assert t2.x_u == R1_THETA.x_u and t2.x_h == R1_THETA.x_h


def test_constant_parameters_give_flat_expected_trajectory():
    traj = expected_modality_trajectory(R1_THETA, R1_THETA)
    assert np.allclose(traj, traj[0])


def test_simulation_deterministic_and_near_expected():
    a = simulate_modality_preferences(R1_THETA, PREFER_U_R4_THETA, 50, seed=4)
    b = simulate_modality_preferences(R1_THETA, PREFER_U_R4_THETA, 50, seed=4)
    assert np.array_equal(a.mean, b.mean)
    assert np.max(np.abs(a.mean - a.expected)) < 0.08
    assert a.mean.shape == (4, 3)
    assert np.allclose(a.mean.sum(axis=1), 1.0)


def test_simulation_parallel_matches_serial():
    serial = simulate_modality_preferences(R1_THETA, PREFER_H_R4_THETA, 12, seed=8, workers=1)
    parallel = simulate_modality_preferences(R1_THETA, PREFER_H_R4_THETA, 12, seed=8, workers=2)
    assert np.array_equal(serial.mean, parallel.mean)


def test_directional_shifts_with_small_samples():
    prefer_u = simulate_modality_preferences(R1_THETA, PREFER_U_R4_THETA, 50, seed=0)
    assert prefer_u.mean[3, 1] > prefer_u.mean[0, 1]
    prefer_h = simulate_modality_preferences(R1_THETA, PREFER_H_R4_THETA, 50, seed=0)
    assert prefer_h.mean[3, 2] > prefer_h.mean[0, 2]
