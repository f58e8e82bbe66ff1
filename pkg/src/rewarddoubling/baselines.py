"""Comparison learners: constant-rate GD, projected GD, unnormalized EG, fixed-regularizer FTRL."""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Callable

import numpy as np

_LOG_MAX = math.log(sys.float_info.max)


def _zeros(dim):
    return 0.0 if dim is None else np.zeros(dim)


class GradientDescent:
    """Unconstrained gradient descent, ``x_t = eta * g_{1:t-1}``.

    ``dim=None`` runs on scalars, otherwise componentwise on vectors.
    """

    def __init__(self, eta: float, dim: int | None = None):
        if not eta > 0:
            raise ValueError("eta must be positive")
        self.eta = float(eta)
        self.dim = dim
        self.g_sum = _zeros(dim)

    def next_play(self):
        return self.eta * self.g_sum

    def observe(self, g) -> None:
        self.g_sum = self.g_sum + g


def gd_reward_closed_form(eta: float, G: float, H: float) -> float:
    """Exact reward of :class:`GradientDescent` in 1-D: ``(eta/2)(G^2 - H)``."""
    if H < 0:
        raise ValueError("H must be nonnegative")
    return 0.5 * eta * (G * G - H)


def gd_standard_regret_bound(eta: float, R: float, H: float) -> float:
    """``(eta/2) H + R^2 / (2 eta)``; with ``eta = R/sqrt(T)`` and ``H = T`` this is ``R sqrt(T)``."""
    if not eta > 0:
        raise ValueError("eta must be positive")
    return 0.5 * eta * H + R * R / (2.0 * eta)


class ProjectedGradientDescent:
    """Gradient descent projected onto the Euclidean ball of radius ``radius``.

    The play precedes the update: ``x <- Proj(x + eta g)``.  ``radius=math.inf``
    disables projection.  Use :meth:`tuned` for the ``eta = R / sqrt(T)`` setting.
    """

    def __init__(self, eta: float, radius: float, dim: int | None = None):
        if not (eta > 0 and radius > 0):
            raise ValueError("eta and radius must be positive")
        self.eta = float(eta)
        self.radius = float(radius)
        self.dim = dim
        self.x = _zeros(dim)

    @classmethod
    def tuned(cls, radius: float, T: int, dim: int | None = None) -> "ProjectedGradientDescent":
        return cls(radius / math.sqrt(T), radius, dim)

    def next_play(self):
        return self.x

    def observe(self, g) -> None:
        y = self.x + self.eta * g
        if self.dim is None:
            self.x = min(max(y, -self.radius), self.radius)
            return
        norm = float(np.sqrt(np.dot(y, y)))
        self.x = y * (self.radius / norm) if norm > self.radius else y


class UnnormalizedEG:
    """Unnormalized exponentiated gradient in loss convention.

    ``observe`` takes *loss* gradients ``l_t``; plays ``exp(-eta l_{1:t-1})``
    componentwise.  Wrap with :class:`LossFeed` to drive it with reward
    gradients.  If the exponent overflows, the play saturates at the largest
    finite double and ``saturated`` is set.
    """

    def __init__(self, eta: float, dim: int | None = None):
        if not eta > 0:
            raise ValueError("eta must be positive")
        self.eta = float(eta)
        self.dim = dim
        self.loss_sum = _zeros(dim)
        self.saturated = False

    def next_play(self):
        z = -self.eta * self.loss_sum
        if self.dim is None:
            if z > _LOG_MAX:
                self.saturated = True
                return sys.float_info.max
            return math.exp(z)
        if np.any(z > _LOG_MAX):
            self.saturated = True
        return np.exp(np.minimum(z, _LOG_MAX))

    def observe(self, loss_gradient) -> None:
        self.loss_sum = self.loss_sum + loss_gradient


class LossFeed:
    """Adapts a loss-convention learner to reward gradients by negating them."""

    def __init__(self, learner):
        self.learner = learner

    def next_play(self):
        return self.learner.next_play()

    def observe(self, g) -> None:
        self.learner.observe(-g)

    def __getattr__(self, name):
        return getattr(self.learner, name)


@dataclass(frozen=True)
class Regularizer:
    """Fixed FTRL regularizer ``psi`` with a closed-form ``argmin_x s*x + psi(x)``."""

    name: str
    psi: Callable[[float], float]
    argmin: Callable[[float], float]

    def check(self, xs=None) -> bool:
        """Numerically confirm ``psi(0) = 0``, ``psi >= 0`` and midpoint convexity on a grid."""
        xs = np.linspace(-10, 10, 401) if xs is None else np.asarray(xs, dtype=float)
        vals = np.array([self.psi(x) for x in xs])
        mids = np.array([self.psi(x) for x in 0.5 * (xs[:-1] + xs[1:])])
        convex = np.all(mids <= 0.5 * (vals[:-1] + vals[1:]) + 1e-12)
        return self.psi(0.0) == 0.0 and bool(np.all(vals >= 0)) and bool(convex)


def quadratic(eta: float) -> Regularizer:
    """``psi(x) = x^2 / (2 eta)``; ``argmin_x s x + psi(x) = -eta s``."""
    if not eta > 0:
        raise ValueError("eta must be positive")
    return Regularizer(f"quadratic(eta={eta:g})", lambda x: x * x / (2.0 * eta), lambda s: -eta * s)


class FixedFTRL:
    """Follow-the-regularized-leader with a time-independent regularizer.

    ``convention="loss"`` plays ``argmin_x g_{1:t-1} x + psi(x)`` literally;
    ``convention="reward"`` plays ``argmin_x -g_{1:t-1} x + psi(x)``, the
    reward-maximizing reading.  Either way the play is a function of the
    gradient sum alone.
    """

    def __init__(self, regularizer: Regularizer, convention: str = "loss"):
        if convention not in ("loss", "reward"):
            raise ValueError("convention must be 'loss' or 'reward'")
        self.regularizer = regularizer
        self.convention = convention
        self._sign = 1.0 if convention == "loss" else -1.0
        self.g_sum = 0.0

    def play_for(self, g_sum: float) -> float:
        return self.regularizer.argmin(self._sign * g_sum)

    def next_play(self) -> float:
        return self.play_for(self.g_sum)

    def observe(self, g: float) -> None:
        self.g_sum += g
