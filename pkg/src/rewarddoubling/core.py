"""Learner contract, trace recording and reward/regret accounting.

Every learner in this package is a small state machine driven by
:func:`run`: ``next_play()`` returns the point for the current round, then
``observe(g)`` feeds back the reward gradient.  Rewards are linear,
``f_t(x) = g_t . x``, and gradients must satisfy ``|g_{t,i}| <= 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol, runtime_checkable

import numpy as np


class GradientError(ValueError):
    """A gradient violates the ``[-1, 1]`` box constraint (or is not finite)."""


class ShapeError(ValueError):
    """Plays, gradients or comparator disagree in shape."""


@runtime_checkable
class Learner(Protocol):
    """Online linear optimization learner.

    ``next_play`` and ``observe`` must be called strictly alternately; the
    play for round t may depend only on gradients from rounds 1..t-1.
    """

    def next_play(self): ...

    def observe(self, g) -> None: ...


def validate_gradients(gradients, dim: int | None = None) -> np.ndarray:
    """Return ``gradients`` as a float array, rejecting anything outside ``[-1, 1]``.

    A 1-D input is a scalar sequence of length T; a 2-D input is ``(T, n)``.
    Out-of-range values are rejected, never clipped.
    """
    arr = np.asarray(gradients, dtype=float)
    if arr.ndim == 0:
        raise ShapeError("expected a sequence of gradients, got a scalar")
    if arr.ndim > 2:
        raise ShapeError(f"gradient array must be 1-D or 2-D, got shape {arr.shape}")
    if dim is not None:
        got = 1 if arr.ndim == 1 else arr.shape[1]
        if got != dim:
            raise ShapeError(f"expected {dim}-dimensional gradients, got {got}")
    if arr.size and not np.all(np.isfinite(arr)):
        raise GradientError("gradients must be finite")
    if arr.size and np.max(np.abs(arr)) > 1.0:
        bad = int(np.argmax(np.abs(arr).reshape(arr.shape[0], -1).max(axis=1) > 1.0))
        raise GradientError(f"gradient at round {bad + 1} has a component outside [-1, 1]")
    return arr


def check_gradient(g) -> None:
    """Validate one round's gradient (scalar or vector)."""
    a = np.abs(np.asarray(g, dtype=float))
    if not np.all(np.isfinite(a)) or np.any(a > 1.0):
        raise GradientError(f"gradient {g!r} outside [-1, 1]")


@dataclass(frozen=True)
class Comparator:
    """A fixed comparator point with cached norms."""

    point: np.ndarray
    l1_norm: float = field(init=False)
    l2_norm: float = field(init=False)

    def __post_init__(self):
        p = np.atleast_1d(np.asarray(self.point, dtype=float))
        object.__setattr__(self, "point", p)
        object.__setattr__(self, "l1_norm", float(np.sum(np.abs(p))))
        object.__setattr__(self, "l2_norm", float(np.sqrt(np.sum(p * p))))

    @property
    def dim(self) -> int:
        return self.point.shape[0]

    @classmethod
    def of(cls, x) -> "Comparator":
        return x if isinstance(x, Comparator) else cls(x)


@dataclass
class Trace:
    """Per-round plays and gradients of one run.

    ``plays`` and ``gradients`` have shape ``(T,)`` for scalar problems and
    ``(T, n)`` otherwise.  ``reward_cum[t]`` is the reward accumulated
    incrementally through round t+1, so ``cumulative_reward == reward_cum[-1]``.
    """

    plays: np.ndarray
    gradients: np.ndarray
    reward_cum: np.ndarray

    def __post_init__(self):
        if self.plays.shape != self.gradients.shape:
            raise ShapeError(
                f"plays {self.plays.shape} and gradients {self.gradients.shape} differ"
            )
        if self.reward_cum.shape != (self.plays.shape[0],):
            raise ShapeError("reward_cum must hold one entry per round")

    @property
    def T(self) -> int:
        return self.plays.shape[0]

    @property
    def dim(self) -> int:
        return 1 if self.plays.ndim == 1 else self.plays.shape[1]

    @property
    def cumulative_reward(self) -> float:
        return float(self.reward_cum[-1]) if self.T else 0.0

    @property
    def gradient_sum(self) -> np.ndarray:
        """``g_{1:T}`` per coordinate (always a 1-D array)."""
        return self.gradients.reshape(self.T, self.dim).sum(axis=0)

    @property
    def squared_gradient_sum(self) -> np.ndarray:
        """``H_i = sum_t g_{t,i}^2`` per coordinate."""
        g = self.gradients.reshape(self.T, self.dim)
        return (g * g).sum(axis=0)

    @classmethod
    def from_arrays(cls, plays, gradients) -> "Trace":
        """Build a trace from recorded plays and gradients, accumulating reward in round order."""
        x = np.asarray(plays, dtype=float)
        g = np.asarray(gradients, dtype=float)
        if x.shape != g.shape:
            raise ShapeError(f"plays {x.shape} and gradients {g.shape} differ")
        per_round = x * g if x.ndim == 1 else (x * g).sum(axis=1)
        return cls(x, g, np.cumsum(per_round))


def reward(trace: Trace) -> float:
    """Re-summed reward ``sum_t <x_t, g_t>``, independent of ``trace.reward_cum``."""
    if trace.plays.shape != trace.gradients.shape:
        raise ShapeError("plays and gradients differ in shape")
    total = 0.0
    if trace.plays.ndim == 1:
        for x, g in zip(trace.plays.tolist(), trace.gradients.tolist()):
            total += x * g
    else:
        for x, g in zip(trace.plays, trace.gradients):
            total += float(np.dot(x, g))
    return total


def coordinate_regrets(trace: Trace, comparator) -> list[float]:
    """``Regret_i = xo_i * g_{1:T,i} - sum_t x_{t,i} g_{t,i}`` for every coordinate i."""
    c = Comparator.of(comparator)
    if c.dim != trace.dim:
        raise ShapeError(f"comparator has dim {c.dim}, trace has dim {trace.dim}")
    x = trace.plays.reshape(trace.T, trace.dim)
    g = trace.gradients.reshape(trace.T, trace.dim)
    out = []
    for i in range(trace.dim):
        xi = x[:, i].tolist()
        gi = g[:, i].tolist()
        comp = 0.0
        got = 0.0
        for a, b in zip(xi, gi):
            comp += b
            got += a * b
        out.append(float(c.point[i]) * comp - got)
    return out


def regret(trace: Trace, comparator) -> float:
    """``<g_{1:T}, xo> - Reward``.

    Computed coordinate-major (the sum of :func:`coordinate_regrets` in
    index order), so that the per-coordinate decomposition sums to this
    value bit-for-bit.
    """
    total = 0.0
    for r in coordinate_regrets(trace, comparator):
        total += r
    return total


def run(learner: Learner, gradients) -> Trace:
    """Drive ``learner`` over ``gradients`` and record the trace.

    The whole sequence is validated before the first round; a gradient
    outside ``[-1, 1]`` raises :class:`GradientError`.
    """
    arr = validate_gradients(gradients)
    T = arr.shape[0]
    vector = arr.ndim == 2
    rows = arr if vector else arr.tolist()
    plays = []
    cum = []
    total = 0.0
    next_play = learner.next_play
    observe = learner.observe
    if vector:
        for g in rows:
            x = np.array(next_play(), dtype=float)
            if x.shape != g.shape:
                raise ShapeError(f"learner played shape {x.shape}, gradient has {g.shape}")
            observe(g)
            total += float(np.dot(x, g))
            plays.append(x)
            cum.append(total)
        plays_arr = np.array(plays, dtype=float).reshape(T, arr.shape[1])
    else:
        for g in rows:
            x = next_play()
            observe(g)
            total += x * g
            plays.append(x)
            cum.append(total)
        plays_arr = np.array(plays, dtype=float)
    return Trace(plays_arr, arr, np.array(cum, dtype=float))


class ZeroLearner:
    """Always plays the origin."""

    def __init__(self, dim: int | None = None):
        self.dim = dim

    def next_play(self):
        return 0.0 if self.dim is None else np.zeros(self.dim)

    def observe(self, g) -> None:
        pass


def rel_close(a: float, b: float, rel: float = 1e-9, scale: float = 0.0) -> bool:
    """``|a - b| <= rel * max(|a|, |b|, scale)``.

    ``scale`` lets callers supply the magnitude of the summed terms when the
    result itself may cancel to zero.
    """
    return abs(a - b) <= rel * max(abs(a), abs(b), scale)
