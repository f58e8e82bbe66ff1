"""Closed-form reward and regret bounds, and the reward/regret duality transforms.

All logarithms are natural.  Bounds are returned as computed, negative
values included; nothing is clamped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .onedim import B_CONST, C, LOWER_COEF, SMOOTH_OVERHEAD


class InapplicableBound(ValueError):
    """The bound's preconditions fail at these parameters."""


@dataclass(frozen=True)
class RewardBoundParams:
    """Reward floor ``kappa * exp(gamma * G) - eps``."""

    kappa: float
    gamma: float
    eps: float = 0.0

    def __post_init__(self):
        if not (self.kappa > 0 and self.gamma > 0 and self.eps >= 0):
            raise ValueError("need kappa > 0, gamma > 0, eps >= 0")


@dataclass(frozen=True)
class BoundReport:
    name: str
    measured: float
    bound: float
    algorithm: str = ""
    sequence: str = ""
    comparator: str = ""
    asserted: bool = True
    identity: bool = False

    @property
    def slack(self) -> float:
        return self.bound - self.measured

    def holds(self, tolerance: float = 1e-9) -> bool:
        """Upper bounds: ``slack >= -tolerance * max(1, |bound|)``.

        Identities: ``|slack| <= tolerance * max(1, |bound|)``.  Unasserted
        rows always hold.
        """
        if not self.asserted:
            return True
        scale = tolerance * max(1.0, abs(self.bound))
        if self.identity:
            return abs(self.slack) <= scale
        return self.slack >= -scale


def _xlogx_term(R: float, scale: float, inner: float) -> float:
    """``R * scale * (log(inner) - 1)`` with the ``0 log 0 = 0`` convention."""
    if R == 0:
        return 0.0
    return R * scale * (math.log(inner) - 1.0)


def regret_bound_from_reward(params: RewardBoundParams, R: float) -> float:
    """Regret ceiling implied by the reward floor, against any comparator in ``[-R, R]``."""
    if R < 0:
        raise ValueError("R must be nonnegative")
    k, g = params.kappa, params.gamma
    return _xlogx_term(R, 1.0 / g, R / (k * g)) + params.eps


def reward_bound_from_regret(params: RewardBoundParams, G: float) -> float:
    return params.kappa * math.exp(params.gamma * G) - params.eps


def worst_gradient_sum(params: RewardBoundParams, R: float) -> float:
    """``G* = log(R / (gamma kappa)) / gamma``, maximizer of ``R G - kappa e^{gamma G}``."""
    return math.log(R / (params.gamma * params.kappa)) / params.gamma


def best_radius(params: RewardBoundParams, G: float) -> float:
    """``R* = gamma kappa exp(gamma G)``, maximizer of the reward lower bound over R."""
    return params.gamma * params.kappa * math.exp(params.gamma * G)


def rd1d_regret_bound(eta1: float, hbar: float, R: float) -> float:
    if not (eta1 > 0 and hbar > 0):
        raise ValueError("eta1 and hbar must be positive")
    s = math.sqrt(hbar)
    return _xlogx_term(R, B_CONST * s, 4.0 * R * B_CONST * s / eta1) + eta1 * hbar


def rd1d_regret_bound_dual(eta1: float, hbar: float, R: float) -> float:
    """Exact regret ceiling dual to :func:`~rewarddoubling.onedim.rd1d_reward_floor`.

    Differs from :func:`rd1d_regret_bound` only inside the log, by a factor of
    ``hbar``; the two agree at ``hbar = 1`` and the latter is looser for ``hbar > 1``.
    """
    params = RewardBoundParams(0.25 * eta1 * hbar, 1.0 / (B_CONST * math.sqrt(hbar)), eta1 * hbar)
    return regret_bound_from_reward(params, R)


def guess_regret_bound(eps: float, H: float, R: float) -> float:
    if not eps > 0 or H < 0 or R < 0:
        raise ValueError("need eps > 0, H >= 0, R >= 0")
    return _xlogx_term(R, C * math.sqrt(H + 1.0), R / eps * (2.0 * H + 2.0) ** 2.5) + eps


def ndim_regret_bound(eps: float, H_i, comparator, n: int | None = None) -> tuple[float, float]:
    """Both n-dimensional regret ceilings: the per-coordinate sum and its Euclidean relaxation."""
    x = np.abs(np.atleast_1d(np.asarray(comparator, dtype=float)))
    H_i = np.atleast_1d(np.asarray(H_i, dtype=float))
    n = x.size if n is None else n
    b1 = eps
    for xi, hi in zip(x.tolist(), H_i.tolist()):
        b1 += _xlogx_term(xi, C * math.sqrt(hi + 1.0), n / eps * xi * (2.0 * hi + 2.0) ** 2.5)
    r2 = float(np.sqrt(np.sum(x * x)))
    H = float(np.sum(H_i))
    b2 = eps + _xlogx_term(r2, C * math.sqrt(H + n), n / eps * r2 * r2 * (2.0 * H + 2.0) ** 2.5)
    return b1, b2


def euclidean_form_valid(eps: float, H_i, comparator, n: int | None = None) -> bool:
    """Whether the Euclidean relaxation is guaranteed to dominate the coordinate sum.

    The relaxation replaces each log factor by the one at ``||x||_2^2`` and
    applies Cauchy-Schwarz; both steps need ``||x||_2 >= 1`` and a log factor
    of at least 1.  The origin is trivially fine.
    """
    x = np.atleast_1d(np.asarray(comparator, dtype=float))
    n = x.size if n is None else n
    r2 = float(np.sqrt(np.sum(x * x)))
    if r2 == 0:
        return True
    H = float(np.sum(H_i))
    return r2 >= 1.0 and math.log(n / eps * r2 * r2 * (2.0 * H + 2.0) ** 2.5) >= 1.0


def smooth_regret_bound(eta: float, R: float, T: int) -> float:
    if not eta > 0 or T < 1:
        raise ValueError("need eta > 0 and T >= 1")
    return _xlogx_term(R, math.sqrt(T), R * T ** 1.5 / eta) + SMOOTH_OVERHEAD * eta


def lower_bound_value(R: float, eps: float, T: int) -> float:
    """``0.336 R sqrt(T log(R sqrt(T) / eps))``; zero at R = 0."""
    if R == 0:
        return 0.0
    ratio = R * math.sqrt(T) / eps
    if ratio <= 1:
        raise InapplicableBound("R sqrt(T) <= eps: log factor is not positive")
    return LOWER_COEF * R * math.sqrt(T * math.log(ratio))


def lower_bound_value_ndim(comparator, eps: float, T: int) -> float:
    """Coordinate sum of :func:`lower_bound_value`."""
    return sum(lower_bound_value(abs(x), eps, T)
               for x in np.atleast_1d(np.asarray(comparator, dtype=float)).tolist())


def ftrl_bad_regret_floor(T: int, x_abs: float, eps_T: float, even_form: bool = False) -> float:
    """Linear regret forced on fixed-regularizer FTRL outside ``[-eps_T, eps_T]``.

    ``even_form`` gives the tighter ``(T/2)(|x| - eps_T)`` valid for even T.
    """
    if x_abs <= eps_T:
        raise InapplicableBound("|comparator| must exceed eps_T")
    if even_form:
        if T % 2:
            raise InapplicableBound("even form needs even T")
        return T / 2 * (x_abs - eps_T)
    return (T - 1) / 2 * (x_abs - eps_T)


def eg_table_order(R: float, T: int, n: int) -> float:
    """``R sqrt(T log n)``: order-of-magnitude only, constants unspecified."""
    return R * math.sqrt(T * math.log(n)) if n > 1 else R * math.sqrt(T)


@dataclass
class DualityCheck:
    params: RewardBoundParams
    direction: str
    target: float
    closed_form: float
    grid_argmax: float
    step: float
    value_gap: float

    @property
    def ok(self) -> bool:
        return abs(self.grid_argmax - self.closed_form) <= self.step


def duality_roundtrip_check(params: RewardBoundParams, R: float | None = None,
                            G: float | None = None, points: int = 20001) -> list[DualityCheck]:
    """Check both closed-form maximizers of the duality proof against a grid search.

    (a) For comparator radius ``R``, ``R G - kappa e^{gamma G} + eps`` over a
    G grid must peak within one step of ``G*``; (b) for gradient sum ``G``, the
    reward lower bound ``R G - (R/gamma)(log(R/(gamma kappa)) - 1) - eps``
    over an R grid must peak within one step of ``R*``.  ``value_gap`` is the
    difference between the grid maximum and the matching closed-form bound.
    """
    k, g, e = params.kappa, params.gamma, params.eps
    R = g * k * math.e if R is None else R
    G = 1.0 / g if G is None else G
    out = []

    g_star = worst_gradient_sum(params, R)
    hi = 2.0 * abs(g_star) + 1.0 / g
    Gs = np.linspace(min(0.0, g_star) - 1.0 / g, hi, points)
    obj = R * Gs - k * np.exp(g * Gs) + e
    j = int(np.argmax(obj))
    out.append(DualityCheck(params, "regret", R, g_star, float(Gs[j]), float(Gs[1] - Gs[0]),
                            float(obj[j]) - regret_bound_from_reward(params, R)))

    r_star = best_radius(params, G)
    Rs = np.linspace(0.0, 3.0 * r_star, points)[1:]
    obj = Rs * G - (Rs / g) * (np.log(Rs / (g * k)) - 1.0) - e
    j = int(np.argmax(obj))
    out.append(DualityCheck(params, "reward", G, r_star, float(Rs[j]), float(Rs[1] - Rs[0]),
                            float(obj[j]) - reward_bound_from_regret(params, G)))
    return out
