"""Gradient-sequence generators and the randomized lower-bound witness search.

Random sequences come from ``numpy.random.PCG64`` seeded through
``numpy.random.SeedSequence(seed)``; a Rademacher draw is
``2 * rng.integers(0, 2, size) - 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .core import validate_gradients
from .onedim import P

RNG_NAME = "numpy.PCG64(SeedSequence(seed))"
KINDS = ("rademacher", "rademacher_balanced", "all_ones", "alternating",
         "ftrl_bad_1", "ftrl_bad_2", "custom")
MAX_ENUMERATION_T = 24


class WitnessSearchError(ValueError):
    """The witness search is inapplicable at these parameters (k would be <= 0)."""


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def rademacher(T: int, seed: int, dim: int | None = None) -> np.ndarray:
    """T i.i.d. uniform signs (shape ``(T,)`` or ``(T, dim)``)."""
    if T < 0:
        raise ValueError("T must be nonnegative")
    shape = T if dim is None else (T, dim)
    return (2 * make_rng(seed).integers(0, 2, size=shape) - 1).astype(float)


def rademacher_balanced(T: int, seed: int, max_draws: int = 100_000) -> np.ndarray:
    """First seeded Rademacher sequence whose sum is as close to 0 as parity allows.

    GD-type learners have origin-regret of order sqrt(T) on such sequences.
    """
    rng = make_rng(seed)
    target = T % 2
    for _ in range(max_draws):
        g = (2 * rng.integers(0, 2, size=T) - 1).astype(float)
        if abs(g.sum()) == target:
            return g
    raise RuntimeError("no balanced sequence within max_draws")


def all_ones(T: int) -> np.ndarray:
    return np.ones(T)


def alternating(T: int) -> np.ndarray:
    """``+1, -1, +1, ...``"""
    return np.where(np.arange(T) % 2 == 0, 1.0, -1.0)


def ftrl_bad_sequences(T: int) -> tuple[np.ndarray, np.ndarray]:
    """The two sequences defeating fixed-regularizer FTRL.

    With ``M = T // 2``: ``(+1)*M, (-1)*M`` and ``(+1)*M, 0*M``.  For odd T a
    trailing 0 is appended to both.
    """
    if T < 0:
        raise ValueError("T must be nonnegative")
    M = T // 2
    s1 = np.concatenate([np.ones(M), -np.ones(M), np.zeros(T - 2 * M)])
    s2 = np.concatenate([np.ones(M), np.zeros(T - M)])
    return s1, s2


@dataclass(frozen=True)
class SequenceSpec:
    """Fully determines a gradient sequence.

    Non-random kinds ignore ``seed``.  ``dim`` replicates a scalar sequence
    across coordinates, except ``rademacher`` which draws each coordinate
    independently.  ``custom`` reads ``values``.
    """

    kind: str
    T: int
    seed: int = 0
    dim: int | None = None
    values: tuple | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown sequence kind {self.kind!r}; choose from {KINDS}")
        if self.T < 0:
            raise ValueError("T must be nonnegative")

    def generate(self) -> np.ndarray:
        if self.kind == "rademacher":
            return rademacher(self.T, self.seed, self.dim)
        if self.kind == "custom":
            if self.values is None:
                raise ValueError("custom sequence needs values")
            arr = validate_gradients(np.asarray(self.values, dtype=float))
            return arr
        base = {
            "rademacher_balanced": lambda: rademacher_balanced(self.T, self.seed),
            "all_ones": lambda: all_ones(self.T),
            "alternating": lambda: alternating(self.T),
            "ftrl_bad_1": lambda: ftrl_bad_sequences(self.T)[0],
            "ftrl_bad_2": lambda: ftrl_bad_sequences(self.T)[1],
        }[self.kind]()
        if self.dim is None:
            return base
        return np.repeat(base[:, None], self.dim, axis=1)


def k_of_T(R: float, eps: float, T: int) -> int:
    """``floor(log(R sqrt(T) / eps) / log(1/p))`` with ``p = 7/64``.

    A relative slack of 1e-12 keeps exact powers of ``1/p`` from flooring
    one below.  Raises :class:`WitnessSearchError` when k <= 0.
    """
    if not (R > 0 and eps > 0 and T > 0):
        raise WitnessSearchError("need R > 0, eps > 0, T > 0")
    ratio = R * math.sqrt(T) / eps
    if ratio <= 1:
        raise WitnessSearchError("R sqrt(T) <= eps")
    q = math.log(ratio) / math.log(1.0 / P)
    k = math.floor(q * (1.0 + 1e-12))
    if k <= 0:
        raise WitnessSearchError(f"k = {k}: witness search inapplicable")
    return k


def witness_horizon(R: float, eps: float, multiple: int = 6, k_max: int = 10_000) -> tuple[int, int]:
    """Smallest ``(T, k)`` with ``T = multiple * k`` and ``k_of_T(R, eps, T) == k``."""
    for k in range(1, k_max + 1):
        T = multiple * k
        try:
            if k_of_T(R, eps, T) == k:
                return T, k
        except WitnessSearchError:
            continue
    raise WitnessSearchError("no consistent horizon found")


def binom_tail_bruteforce(T: int, threshold: float) -> Fraction:
    """Exact ``P[g_1 + ... + g_T >= threshold]`` for uniform signs, by enumerating all 2^T sequences."""
    if T < 0:
        raise ValueError("T must be nonnegative")
    if T > MAX_ENUMERATION_T:
        raise ValueError(f"T={T} too large to enumerate (max {MAX_ENUMERATION_T}); sample instead")
    codes = np.arange(1 << T, dtype=np.uint32)
    plus = np.zeros(codes.shape, dtype=np.int64)
    for bit in range(T):
        plus += (codes >> bit) & 1
    sums = 2 * plus - T
    hits = int(np.count_nonzero(sums >= threshold))
    return Fraction(hits, 1 << T)


@dataclass
class LowerBoundWitness:
    sequence: np.ndarray
    G: float
    Q: float
    k: int
    R: float
    index: int

    @property
    def regret_achieved(self) -> float:
        return self.R * self.G - self.Q

    def satisfies(self) -> bool:
        T = self.sequence.shape[0]
        return self.G >= math.sqrt(self.k * T) and self.Q < self.R * math.sqrt(T)


@dataclass
class SearchResult:
    witness: LowerBoundWitness | None
    sampled: int
    candidates: int
    hits: int
    k: int
    T: int

    @property
    def found(self) -> bool:
        return self.witness is not None

    @property
    def hit_rate(self) -> float:
        return self.hits / self.sampled if self.sampled else 0.0


def _reward_of(learner_factory: Callable[[], object], seq) -> float:
    learner = learner_factory()
    total = 0.0
    for g in seq:
        total += learner.next_play() * g
        learner.observe(g)
    return total


def lower_bound_search(learner_factory: Callable[[], object], R: float, eps: float, T: int,
                       budget: int, seed: int, count_all: bool = True,
                       batch: int = 8192) -> SearchResult:
    """Sample up to ``budget`` Rademacher sequences looking for a lower-bound witness.

    A witness has ``G = g_{1:T} >= sqrt(kT)`` and learner reward
    ``Q < R sqrt(T)``.  The learner is only run on sequences that pass the G
    test.  The first witness by sample index is returned; with
    ``count_all`` the whole budget is scanned so ``hit_rate`` covers it.
    """
    k = k_of_T(R, eps, T)
    z = math.sqrt(k * T)
    q_max = R * math.sqrt(T)
    rng = make_rng(seed)
    witness = None
    sampled = candidates = hits = 0
    while sampled < budget:
        m = min(batch, budget - sampled)
        block = (2 * rng.integers(0, 2, size=(m, T)) - 1).astype(float)
        sums = block.sum(axis=1)
        for j in np.flatnonzero(sums >= z):
            candidates += 1
            seq = block[j]
            Q = _reward_of(learner_factory, seq.tolist())
            if Q < q_max:
                hits += 1
                if witness is None:
                    witness = LowerBoundWitness(seq.copy(), float(sums[j]), Q, k, R, sampled + int(j))
        sampled += m
        if witness is not None and not count_all:
            break
    return SearchResult(witness, sampled, candidates, hits, k, T)


def mixed_vector(T: int, dim: int, seed: int) -> np.ndarray:
    """A ``(T, dim)`` sequence whose coordinates cycle through several regimes.

    Coordinate ``i`` is, by ``i % 6``: fair signs, all ones, all zeros,
    alternating signs, signs biased 70/30 towards +1, and half-sparse signs.
    """
    rng = make_rng(seed)
    signs = (2 * rng.integers(0, 2, size=(T, dim)) - 1).astype(float)
    biased = np.where(rng.random((T, dim)) < 0.7, 1.0, -1.0)
    mask = rng.random((T, dim)) < 0.5
    out = np.empty((T, dim))
    for i in range(dim):
        r = i % 6
        if r == 0:
            out[:, i] = signs[:, i]
        elif r == 1:
            out[:, i] = 1.0
        elif r == 2:
            out[:, i] = 0.0
        elif r == 3:
            out[:, i] = alternating(T)
        elif r == 4:
            out[:, i] = biased[:, i]
        else:
            out[:, i] = np.where(mask[:, i], signs[:, i], 0.0)
    return out
