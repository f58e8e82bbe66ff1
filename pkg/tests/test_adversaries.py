import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rewarddoubling.adversaries import (MAX_ENUMERATION_T, SequenceSpec, WitnessSearchError,
                                        alternating, binom_tail_bruteforce, ftrl_bad_sequences,
                                        k_of_T, lower_bound_search, make_rng, mixed_vector,
                                        rademacher, rademacher_balanced, witness_horizon)
from rewarddoubling.core import ZeroLearner
from rewarddoubling.onedim import RewardDoubling1DGuess


def test_rademacher_is_seeded_pcg64():
    g = rademacher(50, seed=9)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(9)))
    assert g.tolist() == (2 * rng.integers(0, 2, size=50) - 1).astype(float).tolist()
    assert not np.array_equal(g, rademacher(50, seed=10))
    assert rademacher(4, 1, dim=3).shape == (4, 3)


def test_balanced_rademacher_sum():
    assert rademacher_balanced(100, 3).sum() == 0
    assert abs(rademacher_balanced(101, 3).sum()) == 1


def test_fixed_sequences():
    assert alternating(5).tolist() == [1, -1, 1, -1, 1]
    s1, s2 = ftrl_bad_sequences(6)
    assert s1.tolist() == [1, 1, 1, -1, -1, -1]
    assert s2.tolist() == [1, 1, 1, 0, 0, 0]
    s1, s2 = ftrl_bad_sequences(5)
    assert s1.tolist() == [1, 1, -1, -1, 0] and s2.tolist() == [1, 1, 0, 0, 0]


def test_sequence_spec():
    assert SequenceSpec("all_ones", 3, dim=2).generate().tolist() == [[1, 1]] * 3
    assert SequenceSpec("custom", 2, values=(0.5, -0.5)).generate().tolist() == [0.5, -0.5]
    with pytest.raises(ValueError):
        SequenceSpec("nope", 3)
    with pytest.raises(ValueError):
        SequenceSpec("custom", 1, values=(2.0,)).generate()


def _k_oracle(R, eps, T):
    # smallest-first search for the largest k with (64/7)^k <= R sqrt(T) / eps
    ratio = Fraction(R) ** 2 * T / Fraction(eps) ** 2
    k = 0
    while Fraction(64, 7) ** (2 * (k + 1)) <= ratio:
        k += 1
    return k


@pytest.mark.parametrize("R,eps,T", [(1, 0.01, 12), (1, 0.01, 6), (2, 0.001, 1000),
                                     (1, 1, 10**6), (5, 0.5, 300)])
def test_k_of_T_matches_exact_oracle(R, eps, T):
    assert k_of_T(R, eps, T) == _k_oracle(R, eps, T)


def test_k_of_T_inapplicable():
    with pytest.raises(WitnessSearchError):
        k_of_T(1.0, 10.0, 4)
    with pytest.raises(WitnessSearchError):
        k_of_T(1.0, 1.0, 2)


def test_witness_horizon():
    assert witness_horizon(1.0, 0.01) == (12, 2)


@pytest.mark.parametrize("T", [1, 2, 5, 6, 9])
def test_binom_tail_against_itertools(T):
    z = math.sqrt(T)
    hits = sum(1 for s in itertools.product((-1, 1), repeat=T) if sum(s) >= z)
    assert binom_tail_bruteforce(T, z) == Fraction(hits, 2 ** T)


def test_binom_tail_exact_values():
    assert binom_tail_bruteforce(6, math.sqrt(6)) == Fraction(7, 64)
    assert binom_tail_bruteforce(0, 0.0) == 1
    with pytest.raises(ValueError):
        binom_tail_bruteforce(MAX_ENUMERATION_T + 1, 0.0)


def test_search_finds_witness_against_zero_learner():
    res = lower_bound_search(ZeroLearner, 1.0, 0.01, 12, 5000, seed=1)
    assert res.found and res.k == 2
    w = res.witness
    assert w.satisfies() and w.Q == 0.0
    assert w.G == w.sequence.sum() >= math.sqrt(24)
    # empirical hit rate near the exact tail probability 299/4096
    assert abs(res.hit_rate - 299 / 4096) < 0.02


def test_search_budget_zero_and_determinism():
    assert not lower_bound_search(ZeroLearner, 1.0, 0.01, 12, 0, seed=1).found
    a = lower_bound_search(lambda: RewardDoubling1DGuess(0.01), 1.0, 0.01, 12, 3000, seed=5)
    b = lower_bound_search(lambda: RewardDoubling1DGuess(0.01), 1.0, 0.01, 12, 3000, seed=5)
    assert (a.hits, a.witness.index) == (b.hits, b.witness.index)


@given(st.integers(1, 40), st.integers(1, 13), st.integers(0, 1000))
def test_mixed_vector_in_box(T, n, seed):
    g = mixed_vector(T, n, seed)
    assert g.shape == (T, n) and np.all(np.abs(g) <= 1)
    if n > 2:
        assert np.all(g[:, 1] == 1) and np.all(g[:, 2] == 0)


def test_make_rng_type():
    assert isinstance(make_rng(0).bit_generator, np.random.PCG64)
