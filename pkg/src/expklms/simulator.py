"""Seeded Monte Carlo episodes and replication sweeps."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import ConfigError, DomainError
from .oped import OpedFamily
from .policies import ExpKLMS, Policy, PolicyState


@dataclass(frozen=True)
class BanditInstance:
    family: OpedFamily
    means: tuple[float, ...]

    def __post_init__(self):
        means = tuple(float(m) for m in self.means)
        object.__setattr__(self, "means", means)
        if len(means) < 1:
            raise DomainError("an instance needs at least one arm")
        for m in means:
            if not self.family.mean_space.interior(m):
                raise DomainError(f"{self.family.kind}: arm mean {m!r} is not strictly inside the mean space")

    @property
    def n_arms(self) -> int:
        return len(self.means)

    @property
    def mu_max(self) -> float:
        return max(self.means)

    @property
    def gaps(self) -> np.ndarray:
        return self.mu_max - np.asarray(self.means)

    def describe(self) -> str:
        return f"{self.family.describe()} means=({', '.join(f'{m:g}' for m in self.means)})"


@dataclass
class RegretTrace:
    horizon: int
    cumulative_regret: np.ndarray
    final_counts: np.ndarray
    seed: int
    actions: np.ndarray = field(repr=False)


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 stream for an arbitrary (possibly negative) integer seed."""
    return np.random.default_rng(int(seed) % 2**128)


def pseudo_regret(instance: BanditInstance, actions: np.ndarray) -> np.ndarray:
    return np.cumsum(instance.gaps[np.asarray(actions)])


def run_episode(
    instance: BanditInstance,
    policy: Policy = ExpKLMS(),
    horizon: int = 1000,
    seed: int = 0,
    engine: str = "compiled",
) -> RegretTrace:
    """Play one episode and return its pseudo-regret trace.

    ``engine="python"`` steps :class:`PolicyState` through the pure-Python
    policies; ``"compiled"`` runs the same rule in a numba loop. Both consume
    the random stream identically and give bit-identical traces.
    """
    horizon = int(horizon)
    if horizon < instance.n_arms:
        raise ConfigError(f"horizon {horizon} is shorter than the number of arms {instance.n_arms}")
    rng = make_rng(seed)
    fam = instance.family
    if engine == "compiled":
        actions, counts = _kernels.run_episode(
            fam.code,
            fam.param,
            fam.mean_space.hi,
            np.asarray(instance.means),
            policy.code,
            policy.temperature.code,
            float(policy.temperature.d),
            horizon,
            rng,
        )
    elif engine == "python":
        state = PolicyState.fresh(fam, instance.n_arms)
        actions = np.empty(horizon, dtype=np.int64)
        for t in range(horizon):
            arm = policy.select(state, rng)
            state.update(arm, fam.sample(instance.means[arm], rng))
            actions[t] = arm
        counts = state.counts
    else:
        raise ValueError(f"unknown engine {engine!r}")
    return RegretTrace(horizon, pseudo_regret(instance, actions), counts, int(seed), actions)


@dataclass
class SweepResult:
    mean: np.ndarray
    std: np.ndarray
    n_reps: int
    mean_final_counts: np.ndarray
    instance: str
    policy: str
    base_seed: int

    @property
    def horizon(self) -> int:
        return len(self.mean)

    @property
    def std_of_mean(self) -> np.ndarray:
        return self.std / np.sqrt(self.n_reps)


class RegretAccumulator:
    """Welford reduction of traces folded strictly in replication order.

    Traces may arrive in any order; out-of-order arrivals are buffered so the
    result does not depend on completion order.
    """

    def __init__(self, horizon: int, n_arms: int):
        self.n = 0
        self.mean = np.zeros(horizon)
        self.m2 = np.zeros(horizon)
        self.counts = np.zeros(n_arms)
        self._pending: dict[int, RegretTrace] = {}

    def add(self, rep: int, trace: RegretTrace) -> None:
        self._pending[rep] = trace
        while self.n in self._pending:
            self._fold(self._pending.pop(self.n))

    def _fold(self, trace: RegretTrace) -> None:
        self.n += 1
        x = trace.cumulative_regret
        delta = x - self.mean
        self.mean += delta / self.n
        self.m2 += delta * (x - self.mean)
        self.counts += (trace.final_counts - self.counts) / self.n

    def std(self) -> np.ndarray:
        if self.n < 2:
            return np.zeros_like(self.mean)
        return np.sqrt(self.m2 / (self.n - 1))


def run_sweep(
    instance: BanditInstance,
    policy: Policy = ExpKLMS(),
    horizon: int = 1000,
    n_reps: int = 100,
    base_seed: int = 0,
    n_jobs: int = 1,
) -> SweepResult:
    """Replicate :func:`run_episode` with seeds ``base_seed + r``.

    With ``n_jobs > 1`` replications run on a thread pool (the compiled loop
    releases the GIL); the reduction order is fixed, so results are identical.
    """
    if n_reps < 1:
        raise ConfigError(f"n_reps must be >= 1, got {n_reps}")
    acc = RegretAccumulator(int(horizon), instance.n_arms)

    def one(r):
        return r, run_episode(instance, policy, horizon, base_seed + r)

    if n_jobs > 1:
        with ThreadPoolExecutor(n_jobs) as pool:
            for r, trace in pool.map(one, range(n_reps)):
                acc.add(r, trace)
    else:
        for r in range(n_reps):
            acc.add(*one(r))
    return SweepResult(
        mean=acc.mean,
        std=acc.std(),
        n_reps=n_reps,
        mean_final_counts=acc.counts,
        instance=instance.describe(),
        policy=policy.describe(),
        base_seed=int(base_seed),
    )
