"""One-dimensional reward-doubling learners.

* :class:`RewardDoubling1D` -- gradient descent run in epochs; the learning
  rate doubles (and the iterate restarts near the origin) whenever the
  epoch's reward reaches ``eta_i * hbar``.
* :class:`RewardDoubling1DGuess` -- removes the need for ``hbar`` by running
  eras with squared-gradient budgets ``1, 2, 4, ...``.
* :class:`SmoothRewardDoubling` -- epoch-free; plays
  ``eta * sign(S) * B(|S|, t + 5)`` where ``S`` is the gradient sum.

The module also holds the minimum-reward functions ``N``, ``B`` and
``eps_tilde`` together with a grid sweep of the two inequalities that
drive the smooth learner's analysis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# a = log 2 / sqrt 3 is the exponent rate in the epoch learner's reward floor.
A = math.log(2.0) / math.sqrt(3.0)
B_CONST = math.sqrt(3.0) / math.log(2.0)
C = math.sqrt(2.0) / (math.sqrt(2.0) - 1.0)
P = 7 / 64
LOWER_COEF = 0.336
SMOOTH_OVERHEAD = 1.76
SMOOTH_SHIFT = 5


@dataclass(frozen=True)
class TheoryConstants:
    a: float = A
    b: float = B_CONST
    c: float = C
    p: float = P
    lower_coef: float = LOWER_COEF
    smooth_overhead: float = SMOOTH_OVERHEAD
    smooth_shift: int = SMOOTH_SHIFT


CONSTANTS = TheoryConstants()


class RewardDoubling1D:
    """Epoch-based gradient descent with a doubling learning rate.

    Parameters
    ----------
    eta1 : initial learning rate (default ``1/T`` when ``T`` is given).
    hbar : assumed upper bound on ``sum_t g_t^2`` (default ``T``).
    record : keep a per-round log of ``(epoch, Q)`` for invariant checks.
    """

    def __init__(self, eta1: float | None = None, hbar: float | None = None,
                 T: int | None = None, record: bool = False):
        if T is not None:
            hbar = float(T) if hbar is None else hbar
            eta1 = 1.0 / T if eta1 is None else eta1
        if eta1 is None or hbar is None:
            raise ValueError("give eta1 and hbar, or T")
        if not (eta1 > 0 and hbar > 0):
            raise ValueError("eta1 and hbar must be positive")
        self.eta1 = float(eta1)
        self.hbar = float(hbar)
        self.epoch = 1
        self.eta_i = self.eta1
        self.q_i = 0.0
        self.x_next = 0.0
        self.h_seen = 0.0
        self._threshold = self.eta_i * self.hbar
        self.record = record
        self.log: list[tuple[int, float]] = []
        self.closed: list[tuple[int, float, float]] = []

    @property
    def precondition_ok(self) -> bool:
        """True while the squared gradients seen so far fit under ``hbar``."""
        return self.h_seen <= self.hbar

    def next_play(self) -> float:
        return self.x_next

    def observe(self, g: float) -> None:
        x = self.x_next
        q = self.q_i + x * g
        self.h_seen += g * g
        if q < self._threshold:
            self.q_i = q
            self.x_next = x + self.eta_i * g
            if self.record:
                self.log.append((self.epoch, q))
            return
        if self.record:
            self.log.append((self.epoch, q))
            self.closed.append((self.epoch, q, self._threshold))
        self.epoch += 1
        self.eta_i *= 2.0
        self._threshold = self.eta_i * self.hbar
        self.q_i = 0.0
        self.x_next = self.eta_i * g


def rd1d_reward_floor(eta1: float, hbar: float, g_abs_sum: float) -> float:
    """Guaranteed reward of :class:`RewardDoubling1D` when ``H <= hbar``."""
    return 0.25 * eta1 * hbar * math.exp(A * g_abs_sum / math.sqrt(hbar)) - eta1 * hbar


class RewardDoubling1DGuess:
    """Guess-and-double wrapper around :class:`RewardDoubling1D`.

    Era ``i`` runs a fresh epoch learner with ``hbar_i = 2**(i-1)`` and
    ``eta1_i = eps * 2**(-2i)``.  The gradient that pushes the era's squared
    sum past ``hbar_i`` is still charged to the closing era; the next era
    starts from the origin on the following round.
    """

    def __init__(self, eps: float = 1.0, record: bool = False):
        if not eps > 0:
            raise ValueError("eps must be positive")
        self.eps = float(eps)
        self.era = 0
        self.record = record
        self.era_log: list[tuple[int, float, float]] = []
        self._start_era()

    def _start_era(self) -> None:
        self.era += 1
        self.hbar_i = math.ldexp(1.0, self.era - 1)
        self.eta1_i = math.ldexp(self.eps, -2 * self.era)
        self.era_h = 0.0
        self.inner = RewardDoubling1D(self.eta1_i, self.hbar_i, record=self.record)

    def next_play(self) -> float:
        return self.inner.x_next

    def observe(self, g: float) -> None:
        self.inner.observe(g)
        self.era_h += g * g
        if self.era_h > self.hbar_i:
            if self.record:
                self.era_log.append((self.era, self.era_h, self.hbar_i))
            self._start_era()


def B(G, t):
    """Play magnitude ``t^{-3/2} exp(G / sqrt t)``."""
    if _is_array(G, t):
        return np.power(t, -1.5) * np.exp(G / np.sqrt(t))
    return t ** -1.5 * math.exp(G / math.sqrt(t))


def N(G, t):
    """Minimum-reward function ``exp(G / sqrt t) / t``."""
    if _is_array(G, t):
        return np.exp(G / np.sqrt(t)) / t
    return math.exp(G / math.sqrt(t)) / t


def eps_tilde(tau):
    """Per-round slack consumed when the gradient sum changes sign."""
    if _is_array(tau):
        tau = np.asarray(tau, dtype=float)
        return np.exp(1.0 / np.sqrt(tau + 1.0)) / (tau + 1.0) - 1.0 / tau + np.power(tau, -1.5)
    if tau < 1:
        raise ValueError("eps_tilde needs tau >= 1")
    return math.exp(1.0 / math.sqrt(tau + 1.0)) / (tau + 1.0) - 1.0 / tau + tau ** -1.5


def _is_array(*xs) -> bool:
    return any(isinstance(x, np.ndarray) for x in xs)


def eps_series(T: int) -> np.ndarray:
    """Partial sums ``eps_{1:t}`` for t = 1..T.

    ``eps_1 = N(1, 6)`` and ``eps_{t+1} = eps_tilde(t + 5)``.
    """
    if T < 1:
        return np.zeros(0)
    terms = np.empty(T)
    terms[0] = N(1.0, 6.0)
    if T > 1:
        terms[1:] = eps_tilde(np.arange(1, T, dtype=float) + SMOOTH_SHIFT)
    return np.cumsum(terms)


class SmoothRewardDoubling:
    """Epoch-free learner: ``x_{t+1} = eta * sign(g_{1:t}) * B(|g_{1:t}|, t + 5)``.

    Plays 0 on round 1 and whenever the gradient sum is exactly 0.
    """

    def __init__(self, eta: float = 1.0):
        if not eta > 0:
            raise ValueError("eta must be positive")
        self.eta = float(eta)
        self.t = 0
        self.g_sum = 0.0
        self.shift = SMOOTH_SHIFT
        self._x = 0.0

    def next_play(self) -> float:
        return self._x

    def observe(self, g: float) -> None:
        self.t += 1
        s = self.g_sum + g
        self.g_sum = s
        if s == 0.0:
            self._x = 0.0
            return
        tau = self.t + SMOOTH_SHIFT
        mag = self.eta * tau ** -1.5 * math.exp(abs(s) / math.sqrt(tau))
        self._x = mag if s > 0 else -mag


def smooth_reward_floor(eta: float, G, t):
    """Per-round reward guarantee ``eta * N(G_t, t + 5) - 1.76 eta``."""
    return eta * N(G, t + SMOOTH_SHIFT) - SMOOTH_OVERHEAD * eta


# --- smooth-learner lemma sweeps -------------------------------------------------

NOISE_MARGIN = -1e-12


class GridError(ValueError):
    """Sweep grid violates a lemma precondition."""


@dataclass
class SweepRow:
    lemma: str
    tau: float
    G: float
    g: float
    lhs: float
    rhs: float

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs


@dataclass
class SweepReport:
    """Outcome of :func:`verify_smooth_lemmas`.

    ``worst`` holds the smallest-margin point for every (lemma, tau);
    ``violations`` the points whose margin fell below the noise threshold.
    """

    points: dict[str, int] = field(default_factory=dict)
    worst: list[SweepRow] = field(default_factory=list)
    violations: list[SweepRow] = field(default_factory=list)

    def worst_margin(self, lemma: str) -> float:
        return min((r.margin for r in self.worst if r.lemma == lemma), default=math.inf)

    @property
    def ok(self) -> bool:
        return not self.violations


def _grid(step: float, lo: float, hi: float) -> np.ndarray:
    n = int(round((hi - lo) / step))
    return lo + step * np.arange(n + 1)


def verify_smooth_lemmas(tau_max: int = 1000, G_max: float = 10.0, step: float = 0.01,
                         tau_min: int = 6, od_tau_min: int = 1,
                         tolerance: float = NOISE_MARGIN) -> SweepReport:
    """Sweep the invariance lemma (``rinv``) and the sign-change lemma (``od``).

    ``rinv``: ``N(G,tau) + g B(G,tau) - N(G+g, tau+1) >= 0`` for G > 0,
    tau >= 6, g in [-1, 1] with G + g >= 0.

    ``od``: ``N(G,tau) + g B(G,tau) >= N(-g-G, tau+1) - eps_tilde(tau)`` for
    g in [-1, 0], G >= 0, G + g <= 0, tau >= 1.
    """
    if tau_min < 6 or od_tau_min < 1 or step <= 0 or G_max < step or tau_max < tau_min:
        raise GridError("grid must satisfy tau >= 6 (rinv), tau >= 1 (od), 0 < step <= G_max")
    report = SweepReport(points={"rinv": 0, "od": 0})

    G = _grid(step, step, G_max)
    g = _grid(step, -1.0, 1.0)
    GG, gg = np.meshgrid(G, g, indexing="ij")
    ok = GG + gg >= -1e-12
    GG, gg = GG[ok], gg[ok]
    for tau in range(tau_min, tau_max + 1):
        lhs = N(GG, tau) + gg * B(GG, tau)
        rhs = N(np.maximum(GG + gg, 0.0), tau + 1)
        _collect(report, "rinv", tau, GG, gg, lhs, rhs, tolerance)

    G = _grid(step, 0.0, 1.0)
    g = _grid(step, -1.0, 0.0)
    GG, gg = np.meshgrid(G, g, indexing="ij")
    ok = GG + gg <= 1e-12
    GG, gg = GG[ok], gg[ok]
    for tau in range(od_tau_min, tau_max + 1):
        lhs = N(GG, tau) + gg * B(GG, tau)
        rhs = N(np.maximum(-gg - GG, 0.0), tau + 1) - eps_tilde(float(tau))
        _collect(report, "od", tau, GG, gg, lhs, rhs, tolerance)
    return report


def _collect(report, lemma, tau, GG, gg, lhs, rhs, tolerance):
    margin = lhs - rhs
    report.points[lemma] += margin.size
    j = int(np.argmin(margin))
    report.worst.append(SweepRow(lemma, float(tau), float(GG[j]), float(gg[j]),
                                 float(lhs[j]), float(rhs[j])))
    for j in np.flatnonzero(margin < tolerance):
        report.violations.append(SweepRow(lemma, float(tau), float(GG[j]), float(gg[j]),
                                          float(lhs[j]), float(rhs[j])))
