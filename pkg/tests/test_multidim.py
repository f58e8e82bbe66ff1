import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rewarddoubling.adversaries import mixed_vector
from rewarddoubling.bounds import euclidean_form_valid, ndim_regret_bound
from rewarddoubling.core import GradientError, regret, run
from rewarddoubling.multidim import (comparator_grid, coordinate_traces,
                                     linearize, regret_decomposition, reward_doubling)
from rewarddoubling.onedim import RewardDoubling1DGuess


def test_uniform_schedule_splits_budget():
    comp = reward_doubling(4, eps=2.0)
    assert comp.eps_i == [0.5] * 4
    assert [c.eps for c in comp.children] == [0.5] * 4


def test_inverse_square_schedule_follows_encounter_order():
    comp = reward_doubling(3, eps=1.0, schedule="inverse-square")
    assert comp.children == [None] * 3
    comp.observe(np.array([0.0, 0.0, 1.0]))
    comp.observe(np.array([-1.0, 1.0, 0.0]))
    assert comp.order == [2, 0, 1]
    assert comp.eps_i == [1 / 4, 1 / 9, 1.0]
    assert sum(comp.eps_i) < math.pi ** 2 / 6


def test_composite_validation():
    with pytest.raises(ValueError):
        reward_doubling(0)
    with pytest.raises(ValueError):
        reward_doubling(2, schedule="linear")
    with pytest.raises(ValueError):
        reward_doubling(2).observe(np.zeros(3))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(1, 80), st.integers(0, 10**6))
def test_composite_equals_independent_children(n, T, seed):
    g = mixed_vector(T, n, seed)
    tr = run(reward_doubling(n, 1.0), g)
    for i, sub in enumerate(coordinate_traces(tr)):
        solo = run(RewardDoubling1DGuess(1.0 / n), g[:, i])
        assert sub.plays.tolist() == solo.plays.tolist()


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(1, 120), st.integers(0, 10**6),
       st.sampled_from(["uniform", "inverse-square"]))
def test_origin_regret_at_most_eps(n, T, seed, schedule):
    tr = run(reward_doubling(n, 1.0, schedule), mixed_vector(T, n, seed))
    assert -tr.cumulative_reward <= 1.0 + 1e-9


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(1, 200), st.integers(0, 10**6))
def test_coordinate_bound_and_exact_decomposition(n, T, seed):
    tr = run(reward_doubling(n, 1.0), mixed_vector(T, n, seed))
    for c in comparator_grid(n, 6, seed):
        parts = regret_decomposition(tr, c)
        total = 0.0
        for p in parts:
            total += p
        assert total == regret(tr, c)
        b1, b2 = ndim_regret_bound(1.0, tr.squared_gradient_sum, c.point, n)
        assert regret(tr, c) <= b1 + 1e-9
        if euclidean_form_valid(1.0, tr.squared_gradient_sum, c.point, n):
            assert b1 <= b2 + 1e-9 * max(1.0, b1)


def test_comparator_grid_is_seeded_and_starts_at_origin():
    a = comparator_grid(3, 5, seed=4)
    b = comparator_grid(3, 5, seed=4)
    assert len(a) == 5 and a[0].l2_norm == 0.0
    assert all(np.array_equal(x.point, y.point) for x, y in zip(a, b))


def test_linearize_quadratic_losses():
    # f(x) = (x - 0.3)^2 / 2 in 1-D: reward gradient -(x - 0.3), which stays in [-1, 1] here
    tr = linearize(lambda x: -(x - 0.3), RewardDoubling1DGuess(1.0), 50)
    assert tr.T == 50
    assert tr.gradients[0] == pytest.approx(0.3)
    assert tr.reward_cum[-1] == pytest.approx(float(np.sum(tr.plays * tr.gradients)))


def test_linearize_rejects_out_of_range_gradient():
    with pytest.raises(GradientError):
        linearize([lambda x: 0.5, lambda x: 3.0], RewardDoubling1DGuess(1.0), 2)
