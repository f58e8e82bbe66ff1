"""Per-coordinate composition of 1-D learners and the convex-to-linear reduction."""

from __future__ import annotations

from typing import Callable, Iterable

import numpy as np

from .core import Comparator, Trace, check_gradient, coordinate_regrets
from .onedim import RewardDoubling1DGuess

SCHEDULES = ("uniform", "inverse-square")


class CoordinateComposite:
    """Runs an independent 1-D learner on every coordinate.

    ``factory(eps_i)`` builds a child.  With the ``uniform`` schedule every
    child gets ``eps / n`` and is built up front.  With ``inverse-square`` the
    i-th coordinate *encountered* (first nonzero gradient; ties broken by
    ascending index) gets ``eps / i^2``; until then the coordinate plays 0.
    """

    def __init__(self, factory: Callable[[float], object], n: int, eps: float = 1.0,
                 schedule: str = "uniform"):
        if schedule not in SCHEDULES:
            raise ValueError(f"schedule must be one of {SCHEDULES}")
        if n is None or n < 1:
            raise ValueError("n must be a positive integer")
        if not eps > 0:
            raise ValueError("eps must be positive")
        self.dim = int(n)
        self.eps_total = float(eps)
        self.schedule = schedule
        self.factory = factory
        self.children: list = [None] * self.dim
        self.eps_i: list[float | None] = [None] * self.dim
        self.order: list[int] = []
        if schedule == "uniform":
            for i in range(self.dim):
                self._spawn(i, self.eps_total / self.dim)

    def _spawn(self, i: int, eps_i: float) -> None:
        self.children[i] = self.factory(eps_i)
        self.eps_i[i] = eps_i
        self.order.append(i)

    def next_play(self) -> np.ndarray:
        return np.array([0.0 if c is None else c.next_play() for c in self.children])

    def observe(self, g) -> None:
        g = np.asarray(g, dtype=float)
        if g.shape != (self.dim,):
            raise ValueError(f"expected gradient of shape ({self.dim},), got {g.shape}")
        vals = g.tolist()
        for i, gi in enumerate(vals):
            child = self.children[i]
            if child is None:
                if gi == 0.0:
                    continue
                k = len(self.order) + 1
                self._spawn(i, self.eps_total / (k * k))
                child = self.children[i]
            child.observe(gi)


def compose(factory: Callable[[float], object], n: int, eps: float = 1.0,
            schedule: str = "uniform") -> CoordinateComposite:
    return CoordinateComposite(factory, n, eps, schedule)


def reward_doubling(n: int, eps: float = 1.0, schedule: str = "uniform") -> CoordinateComposite:
    """n-dimensional Reward-Doubling: a guess-and-double learner per coordinate."""
    return compose(RewardDoubling1DGuess, n, eps, schedule)


def regret_decomposition(trace: Trace, comparator) -> list[float]:
    """Per-coordinate regrets; they sum (in index order) to ``core.regret`` exactly."""
    return coordinate_regrets(trace, comparator)


def coordinate_traces(trace: Trace) -> list[Trace]:
    """Split an n-D trace into its n scalar traces."""
    x = trace.plays.reshape(trace.T, trace.dim)
    g = trace.gradients.reshape(trace.T, trace.dim)
    return [Trace.from_arrays(x[:, i], g[:, i]) for i in range(trace.dim)]


def linearize(oracle, learner, T: int) -> Trace:
    """Run ``learner`` against convex losses through their gradients.

    ``oracle`` is either one callable ``x -> -grad f(x)`` used every round or
    an iterable of such callables, one per round.  The returned vector is the
    reward gradient ``g_t``.  An out-of-range gradient aborts the run with
    :class:`~rewarddoubling.core.GradientError`.
    """
    oracles: Iterable = [oracle] * T if callable(oracle) else list(oracle)[:T]
    plays, grads, cum = [], [], []
    total = 0.0
    for f in oracles:
        x = learner.next_play()
        g = f(x)
        check_gradient(g)
        learner.observe(g)
        xv = np.asarray(x, dtype=float)
        gv = np.asarray(g, dtype=float)
        total += float(np.sum(xv * gv))
        plays.append(xv)
        grads.append(gv)
        cum.append(total)
    return Trace(np.array(plays, dtype=float), np.array(grads, dtype=float),
                 np.array(cum, dtype=float))


def comparator_grid(n: int, count: int, seed: int, scales=(0.1, 1.0, 10.0)) -> list[Comparator]:
    """The origin followed by seeded Gaussian points cycling through ``scales``."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    out = [Comparator(np.zeros(n))]
    while len(out) < count:
        scale = scales[len(out) % len(scales)]
        out.append(Comparator(scale * rng.standard_normal(n)))
    return out[:count]
