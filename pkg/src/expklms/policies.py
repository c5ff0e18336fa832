"""Arm-selection rules: the Exp-KL-MS sampling family and two baselines.

Arms are 0-based. Every policy pulls arms ``0, 1, ..., K-1`` in order during
the first ``K`` rounds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DomainError
from .oped import OpedFamily


@dataclass(frozen=True)
class Temperature:
    """Inverse-temperature function ``L(k)`` applied to an arm's pull count.

    ``shift``: ``k - 1`` (Exp-KL-MS); ``scaled``: ``k / d`` with ``d > 1``;
    ``identity``: ``k`` (KL-MS).
    """

    kind: str = "shift"
    d: float = 1.0

    _CODES = {"shift": _kernels.SHIFT_BY_ONE, "scaled": _kernels.SCALED, "identity": _kernels.IDENTITY}

    def __post_init__(self):
        if self.kind not in self._CODES:
            raise DomainError(f"unknown temperature kind {self.kind!r}")
        if self.kind == "scaled" and not self.d > 1:
            raise DomainError(f"scaled temperature needs d > 1, got {self.d!r}")

    @property
    def code(self) -> int:
        return self._CODES[self.kind]

    def __call__(self, k: int) -> float:
        return _kernels.temperature(self.code, float(self.d), k)

    def describe(self) -> str:
        return f"scaled(d={self.d:g})" if self.kind == "scaled" else self.kind


SHIFT_BY_ONE = Temperature("shift")
IDENTITY = Temperature("identity")


def scaled(d: float) -> Temperature:
    return Temperature("scaled", float(d))


@dataclass
class PolicyState:
    family: OpedFamily
    counts: np.ndarray
    reward_sums: np.ndarray
    t: int = 0

    @classmethod
    def fresh(cls, family: OpedFamily, n_arms: int) -> PolicyState:
        return cls(family, np.zeros(n_arms, dtype=np.int64), np.zeros(n_arms))

    @classmethod
    def from_stats(cls, family: OpedFamily, counts, means) -> PolicyState:
        """State with given pull counts and empirical means (test helper)."""
        counts = np.asarray(counts, dtype=np.int64)
        sums = counts * np.asarray(means, dtype=float)
        return cls(family, counts, sums, int(counts.sum()))

    @property
    def n_arms(self) -> int:
        return len(self.counts)

    @property
    def means(self) -> np.ndarray:
        if np.any(self.counts < 1):
            raise DomainError("empirical mean undefined for an unpulled arm")
        return self.reward_sums / self.counts

    def update(self, arm: int, reward: float) -> PolicyState:
        if not 0 <= arm < self.n_arms:
            raise DomainError(f"arm {arm} out of range for {self.n_arms} arms")
        self.counts[arm] += 1
        self.reward_sums[arm] += reward
        self.t += 1
        return self


def exp_kl_ms_weights(state: PolicyState, temperature: Temperature) -> np.ndarray:
    """Unnormalised weights ``exp(-L(N_a) kl(mu_a, mu_max))``.

    A zero temperature gives weight 1 even against an infinite divergence;
    otherwise an infinite divergence gives weight exactly 0.
    """
    means = state.means
    best = means.max()
    weights = np.empty(state.n_arms)
    for a, (n, m) in enumerate(zip(state.counts, means)):
        lam = temperature(int(n))
        if lam == 0.0 or m == best:
            weights[a] = 1.0
            continue
        div = state.family.kl(m, best)
        w = 0.0 if math.isinf(div) else math.exp(-lam * div)
        weights[a] = w if w >= _kernels.UNDERFLOW else 0.0
    return weights


def action_distribution(state: PolicyState, temperature: Temperature = SHIFT_BY_ONE) -> np.ndarray:
    if np.any(state.counts < 1):
        raise DomainError("action_distribution needs every arm pulled at least once")
    w = exp_kl_ms_weights(state, temperature)
    return w / w.sum()


def inverse_cdf(weights: np.ndarray, u: float) -> int:
    """Lowest index whose cumulative weight exceeds ``u * total``."""
    cum = np.cumsum(weights)
    i = int(np.searchsorted(cum, u * cum[-1], side="right"))
    if i >= len(weights):
        i = int(np.flatnonzero(weights)[-1])
    return i


def klucb_index(state: PolicyState, arm: int) -> float:
    """Upper confidence index ``sup{q : kl(mu_hat, q) <= ln(t) / N}``."""
    n = state.counts[arm]
    if n < 1:
        raise DomainError(f"arm {arm} has not been pulled")
    budget = math.log(state.t) / n if state.t > 0 else 0.0
    return klucb_index_for(state.family, state.reward_sums[arm] / n, budget)


def klucb_index_for(family: OpedFamily, mu_hat: float, budget: float) -> float:
    return _kernels.klucb_index(family.code, family.param, float(mu_hat), float(budget), family.mean_space.hi)


@dataclass(frozen=True)
class ExpKLMS:
    temperature: Temperature = field(default=SHIFT_BY_ONE)

    code = _kernels.EXP_KL_MS

    def select(self, state: PolicyState, rng: np.random.Generator) -> int:
        if state.t < state.n_arms:
            return state.t
        return inverse_cdf(exp_kl_ms_weights(state, self.temperature), rng.random())

    def describe(self) -> str:
        return f"exp_kl_ms[{self.temperature.describe()}]"


@dataclass(frozen=True)
class KLUCB:
    """kl-UCB with exploration function ``ln(t)``; ties go to the lowest index."""

    code = _kernels.KL_UCB
    temperature = SHIFT_BY_ONE  # unused; keeps the kernel signature uniform

    def select(self, state: PolicyState, rng: np.random.Generator) -> int:
        if state.t < state.n_arms:
            return state.t
        best, arm = -math.inf, 0
        for a in range(state.n_arms):
            idx = klucb_index(state, a)
            if idx > best:
                best, arm = idx, a
        return arm

    def describe(self) -> str:
        return "kl_ucb"


@dataclass(frozen=True)
class Uniform:
    code = _kernels.UNIFORM
    temperature = SHIFT_BY_ONE

    def select(self, state: PolicyState, rng: np.random.Generator) -> int:
        if state.t < state.n_arms:
            return state.t
        return uniform_arm(state.n_arms, rng)

    def describe(self) -> str:
        return "uniform"


def uniform_arm(n_arms: int, rng: np.random.Generator) -> int:
    return min(int(rng.random() * n_arms), n_arms - 1)


Policy = ExpKLMS | KLUCB | Uniform


def select_arm(state: PolicyState, rng: np.random.Generator, temperature: Temperature = SHIFT_BY_ONE) -> int:
    """One Exp-KL-MS draw: round-robin for ``t < K``, then inverse-CDF sampling."""
    return ExpKLMS(temperature).select(state, rng)
