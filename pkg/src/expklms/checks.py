"""Grid checks of the KL identities and concentration lemmas.

Each suite returns a list of :class:`CheckRow`; the CLI writes them to
``checks_<suite>.csv`` and fails if any row fails.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import analysis
from .oped import Bernoulli, Gamma, Gaussian, InverseGaussian, OpedFamily, Poisson, bregman_residual
from .oped import kl_lower_bound, kl_quadrature
from .simulator import make_rng

KL_ORACLE_RTOL = 1e-8
BREGMAN_TOL = 1e-10


@dataclass
class CheckRow:
    case: str
    measured: float
    reference: float
    passed: bool


def default_families() -> list[OpedFamily]:
    return [
        Bernoulli(),
        Poisson(M=10.0),
        Gaussian(sigma=1.5),
        Gamma(k=2.0, M=10.0),
        InverseGaussian(lam=3.0, M=5.0),
    ]


def mean_grid(family: OpedFamily, n: int = 8) -> np.ndarray:
    """``n`` interior means spread across the family's mean space."""
    lo, hi = family.mean_space.lo, family.mean_space.hi
    if math.isinf(lo) or math.isinf(hi):
        return np.linspace(-4.0, 4.0, n)
    return np.linspace(lo + 0.02 * (hi - lo), hi - 0.02 * (hi - lo), n)


def mean_pairs(family: OpedFamily, n: int = 8):
    """Ordered pairs of distinct grid means; ``n=8`` gives 56 pairs."""
    return list(itertools.permutations(mean_grid(family, n), 2))


def random_interior(family: OpedFamily, rng: np.random.Generator, size: int) -> np.ndarray:
    g = mean_grid(family, 2)
    return rng.uniform(g[0], g[1], size)


def kl_oracle(seed: int = 0) -> list[CheckRow]:
    rows = []
    for fam in default_families():
        for m1, m2 in mean_pairs(fam):
            closed = fam.kl(m1, m2)
            quad = kl_quadrature(fam, m1, m2)
            ok = abs(closed - quad) <= KL_ORACLE_RTOL * max(1.0, closed)
            rows.append(CheckRow(f"{fam.kind} kl({m1:.6g},{m2:.6g})", closed, quad, ok))
    return rows


def bregman(seed: int = 0, n_triples: int = 1000) -> list[CheckRow]:
    rng = make_rng(seed)
    rows = []
    for fam in default_families():
        triples = random_interior(fam, rng, 3 * n_triples).reshape(n_triples, 3)
        worst = max(abs(bregman_residual(fam, *t)) for t in triples)
        rows.append(CheckRow(f"{fam.kind} max|residual| over {n_triples} triples", worst, BREGMAN_TOL, worst <= BREGMAN_TOL))
    return rows


def pinsker(seed: int = 0) -> list[CheckRow]:
    rows = []
    for fam in default_families():
        for m1, m2 in mean_pairs(fam):
            div = fam.kl(m1, m2)
            for mode in ("lipschitz", "max_variance"):
                lb = kl_lower_bound(fam, m1, m2, mode)
                rows.append(CheckRow(f"{fam.kind} {mode} ({m1:.6g},{m2:.6g})", lb, div, lb <= div))
    return rows


# (family, mu, epsilons); every mu +/- eps stays inside the mean space
CHERNOFF_CASES = [
    (Bernoulli(), 0.5, (0.1, 0.2, 0.3)),
    (Poisson(M=10.0), 3.0, (0.5, 1.0, 2.0)),
    (Gaussian(sigma=1.0), 0.0, (0.25, 0.5, 1.0)),
    (Gamma(k=2.0, M=10.0), 3.0, (0.5, 1.0, 2.0)),
    (InverseGaussian(lam=2.0, M=10.0), 2.0, (0.25, 0.5, 1.0)),
]
CHERNOFF_NS = (5, 20, 100)


def chernoff(seed: int = 0, n_mc: int = 100_000) -> list[CheckRow]:
    rows = []
    case_seed = seed
    for fam, mu, eps_grid in CHERNOFF_CASES:
        for N, eps, tail in itertools.product(CHERNOFF_NS, eps_grid, ("lower", "upper")):
            res = analysis.chernoff_check(fam, mu, eps, N, n_mc, case_seed, tail)
            case_seed += 1
            rows.append(
                CheckRow(f"{fam.kind} mu={mu:g} eps={eps:g} N={N} {tail}", res.freq, res.bound + 3 * res.se, res.passed)
            )
    return rows


GEOLOG_TS = (10, 100, 1000, 10_000)


def geolog_grid():
    for T in GEOLOG_TS:
        for a in (2.0 / T, 0.01, 0.1, 1.0, 5.0):
            if a > 1.0 / T:
                yield T, a


def geolog(seed: int = 0) -> list[CheckRow]:
    rows = []
    for T, a in geolog_grid():
        lhs, rhs = analysis.geo_log_sum_check(T, a)
        rows.append(CheckRow(f"T={T} a={a:g}", lhs, rhs, lhs <= rhs))
    return rows


SUITES = {
    "kl_oracle": kl_oracle,
    "bregman": bregman,
    "pinsker": pinsker,
    "chernoff": chernoff,
    "geolog": geolog,
}
