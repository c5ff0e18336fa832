"""Regret-bound evaluators, asymptotic constants and lemma checks."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, UnsupportedModeError
from .oped import OpedFamily
from .simulator import BanditInstance, make_rng


@dataclass
class BoundReport:
    bound_name: str
    instance: str
    horizon: int
    delta: float
    c: float
    terms: list[tuple[str, float]] = field(default_factory=list)

    @property
    def value(self) -> float:
        return math.fsum(v for _, v in self.terms)


def _log_or_one(x: float) -> float:
    """``ln(max(x, e))``."""
    return math.log(max(x, math.e))


def theorem1_bound(instance: BanditInstance, horizon: int, delta: float, c: float = 0.25) -> BoundReport:
    """Finite-time regret bound of Exp-KL-MS for gap threshold ``delta`` and shrink ``c``.

    Terms: ``T*delta``; the leading log group; the two inverse-KL terms; and
    the smaller of the horizon-free and the logarithmic group for deviations of
    the best arm. Sums run over arms with gap strictly above ``delta``.
    """
    if not delta >= 0:
        raise DomainError(f"delta must be >= 0, got {delta!r}")
    if not 0 < c <= 0.25:
        raise DomainError(f"c must lie in (0, 1/4], got {c!r}")
    fam = instance.family
    T = float(horizon)
    mu_max = instance.mu_max
    leading = inverse = horizon_free = logarithmic = 0.0
    for mu_a, gap in zip(instance.means, instance.gaps.tolist()):
        if not gap > delta:
            continue
        lo, hi = mu_a + c * gap, mu_max - c * gap
        for x in (lo, hi):
            if not fam.mean_space.interior(x):
                raise DomainError(f"{fam.kind}: shifted mean {x!r} leaves the mean space")
        k_mid = fam.kl(lo, hi)
        k_own = fam.kl(lo, mu_a)
        k_top = fam.kl(hi, mu_max)
        leading += gap * _log_or_one(T * k_mid) / k_mid + gap
        inverse += gap * (1.0 / k_mid + 1.0 / k_own)
        horizon_free += gap * (1.0 / k_top + 1.0 / k_top**2)
        logarithmic += gap * 16.0 * _log_or_one(T * k_top) / k_top
    return BoundReport(
        "theorem1",
        instance.describe(),
        int(horizon),
        float(delta),
        float(c),
        [
            ("T*delta", T * delta),
            ("leading", leading),
            ("inverse_kl", inverse),
            ("best_arm_deviation", min(horizon_free, logarithmic)),
        ],
    )


def delta_grid(instance: BanditInstance, n: int = 40) -> np.ndarray:
    """0 plus ``n`` log-spaced thresholds from ``1e-3 * min gap`` to ``max gap``."""
    gaps = instance.gaps[instance.gaps > 0]
    if gaps.size == 0:
        return np.zeros(1)
    return np.concatenate([[0.0], np.geomspace(1e-3 * gaps.min(), gaps.max(), n)])


def best_theorem1_bound(instance: BanditInstance, horizon: int, c: float = 0.25) -> BoundReport:
    """:func:`theorem1_bound` minimised over :func:`delta_grid`."""
    reports = [theorem1_bound(instance, horizon, d, c) for d in delta_grid(instance)]
    return min(reports, key=lambda r: r.value)


def asymptotic_constant(instance: BanditInstance) -> float:
    """Lai-Robbins constant: sum of ``gap / kl(mu_a, mu_max)`` over suboptimal arms."""
    fam = instance.family
    total = 0.0
    for mu_a, gap in zip(instance.means, instance.gaps.tolist()):
        if gap > 0:
            div = fam.kl(mu_a, instance.mu_max)
            if math.isinf(div):
                return math.inf
            total += gap / div
    return total


def minimax_bound(instance: BanditInstance, horizon: int, flavor: str = "adaptive") -> float:
    """Leading term ``sqrt(V K T ln K)``, an order-level yardstick with constant 1.

    ``flavor="max_variance"`` uses the family's maximum variance,
    ``"adaptive"`` the variance of the best arm.
    """
    fam = instance.family
    K = instance.n_arms
    if flavor == "max_variance":
        v = fam.variance_max
        if v is None:
            raise UnsupportedModeError(f"{fam.kind} has no finite maximum variance")
    elif flavor == "adaptive":
        if math.isinf(fam.lipschitz_constant()):
            raise UnsupportedModeError(f"{fam.kind} variance function is not Lipschitz without a cap")
        v = fam.variance(instance.mu_max)
    else:
        raise UnsupportedModeError(f"unknown flavor {flavor!r}")
    return math.sqrt(v * K * horizon * math.log(K))


def sub_ucb_yardstick(instance: BanditInstance, horizon: int) -> float:
    """``sum ln(T)/gap + sum gap`` with unit constants, for side-by-side reporting."""
    gaps = instance.gaps[instance.gaps > 0]
    return float(np.sum(math.log(horizon) / gaps) + np.sum(gaps))


def geo_log_sum_check(T: int, a: float) -> tuple[float, float]:
    """Exact ``sum_{k<=T} exp(-k a) ln(T/k)`` and its bound ``5 ln(max(T a, e)) / a``."""
    if T < 1:
        raise DomainError(f"T must be >= 1, got {T}")
    if not a > 1.0 / T:
        raise DomainError(f"need a > 1/T, got a={a!r}, T={T}")
    k = np.arange(1, T + 1, dtype=float)
    lhs = math.fsum(np.exp(-k * a) * np.log(T / k))
    return lhs, 5.0 * _log_or_one(T * a) / a


@dataclass
class ChernoffResult:
    freq: float
    bound: float
    se: float

    @property
    def passed(self) -> bool:
        return self.freq <= self.bound + 3.0 * self.se


def chernoff_check(
    family: OpedFamily,
    mu: float,
    epsilon: float,
    N: int,
    n_mc: int = 100_000,
    seed: int = 0,
    tail: str = "lower",
    chunk: int = 1_000_000,
) -> ChernoffResult:
    """Monte Carlo frequency of a sample-mean deviation versus its Chernoff bound.

    ``tail="lower"`` estimates ``P(mean_N < mu - eps)`` against
    ``exp(-N kl(mu - eps, mu))``; ``"upper"`` mirrors it.
    """
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    if n_mc < 10_000:
        raise DomainError(f"n_mc must be >= 10000 for a usable binomial SE, got {n_mc}")
    if tail == "lower":
        edge = mu - epsilon
    elif tail == "upper":
        edge = mu + epsilon
    else:
        raise DomainError(f"tail must be 'lower' or 'upper', got {tail!r}")
    if not family.mean_space.closure(edge):
        raise DomainError(f"{family.kind}: mu {'-' if tail == 'lower' else '+'} eps = {edge!r} leaves the mean space")
    rng = make_rng(seed)
    hits = 0
    rows = max(1, chunk // N)
    done = 0
    while done < n_mc:
        m = min(rows, n_mc - done)
        means = family.sample_many(mu, (m, N), rng).mean(axis=1)
        hits += int(np.count_nonzero(means < edge if tail == "lower" else means > edge))
        done += m
    freq = hits / n_mc
    bound = math.exp(-N * family.kl(edge, mu))
    return ChernoffResult(freq, bound, math.sqrt(freq * (1.0 - freq) / n_mc))


def regret_log_slope(t: np.ndarray, mean_regret: np.ndarray, t_min: float, t_max: float) -> float:
    """Least-squares slope of mean regret against ``ln t`` on ``[t_min, t_max]``."""
    t = np.asarray(t, dtype=float)
    sel = (t >= t_min) & (t <= t_max)
    return float(np.polyfit(np.log(t[sel]), np.asarray(mean_regret)[sel], 1)[0])
