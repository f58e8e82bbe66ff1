"""Reward-Doubling learners for unconstrained online linear optimization."""

from .adversaries import SequenceSpec, k_of_T, lower_bound_search, rademacher
from .baselines import (FixedFTRL, GradientDescent, ProjectedGradientDescent, UnnormalizedEG,
                        quadratic)
from .bounds import BoundReport, RewardBoundParams, duality_roundtrip_check
from .core import Comparator, GradientError, ShapeError, Trace, ZeroLearner, regret, reward, run
from .multidim import CoordinateComposite, reward_doubling
from .onedim import (RewardDoubling1D, RewardDoubling1DGuess, SmoothRewardDoubling,
                     verify_smooth_lemmas)

__all__ = [
    "BoundReport", "Comparator", "CoordinateComposite", "FixedFTRL", "GradientDescent",
    "GradientError", "ProjectedGradientDescent", "RewardBoundParams", "RewardDoubling1D",
    "RewardDoubling1DGuess", "SequenceSpec", "ShapeError", "SmoothRewardDoubling", "Trace",
    "UnnormalizedEG", "ZeroLearner", "duality_roundtrip_check", "k_of_T", "lower_bound_search",
    "quadratic", "rademacher", "regret", "reward", "reward_doubling", "run",
    "verify_smooth_lemmas",
]
