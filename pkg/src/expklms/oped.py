"""One-parameter exponential families with identity sufficient statistic.

Each family is parameterised by its mean. The five supported families are
Bernoulli, Poisson, Gaussian with known sigma, Gamma with known shape and
inverse Gaussian with known lambda. Poisson, Gamma and inverse Gaussian carry an
upper cap ``M`` on admissible arm means; pass ``math.inf`` for an uncapped
family (which then has no finite maximum variance).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import ClassVar, NamedTuple

import numpy as np
from scipy import integrate

from . import _kernels
from .errors import ConvergenceError, DomainError, UnsupportedModeError

QUAD_TOL = 1e-10
QUAD_SPLIT_CAP = 10**6


class Interval(NamedTuple):
    lo: float
    hi: float
    lo_closed: bool = False
    hi_closed: bool = False

    def __contains__(self, x: float) -> bool:
        above = x >= self.lo if self.lo_closed else x > self.lo
        below = x <= self.hi if self.hi_closed else x < self.hi
        return above and below

    def interior(self, x: float) -> bool:
        return self.lo < x < self.hi

    def closure(self, x: float) -> bool:
        return self.lo <= x <= self.hi


def _check_positive(name: str, value: float, allow_inf: bool = False) -> float:
    value = float(value)
    if not value > 0 or (math.isinf(value) and not allow_inf):
        raise DomainError(f"{name} must be a positive real, got {value!r}")
    return value


@dataclass(frozen=True)
class OpedFamily:
    """Base class; use one of the concrete families below."""

    code: ClassVar[int]
    kind: ClassVar[str]

    @property
    def param(self) -> float:
        """Scalar shape parameter handed to the compiled kernels."""
        return 0.0

    @property
    def mean_space(self) -> Interval:
        raise NotImplementedError

    @property
    def support(self) -> Interval:
        """Closed convex hull of the reward support; empirical means live here."""
        raise NotImplementedError

    @property
    def variance_max(self) -> float | None:
        raise NotImplementedError

    def lipschitz_constant(self) -> float:
        raise NotImplementedError

    def _variance(self, mu: float) -> float:
        raise NotImplementedError

    def _natural_param(self, mu: float) -> float:
        raise NotImplementedError

    def log_partition(self, theta: float) -> float:
        raise NotImplementedError

    # -- validation -------------------------------------------------------
    def _interior(self, mu: float, what: str = "mean") -> float:
        mu = float(mu)
        if not self.mean_space.interior(mu):
            raise DomainError(f"{self.kind}: {what} {mu!r} is not strictly inside {tuple(self.mean_space[:2])}")
        return mu

    def describe(self) -> str:
        fields = ", ".join(f"{k}={v:g}" for k, v in self.__dict__.items())
        return f"{self.kind}({fields})"

    # -- analytics --------------------------------------------------------
    def variance(self, mu: float) -> float:
        return self._variance(self._interior(mu))

    def natural_param(self, mu: float) -> float:
        return self._natural_param(self._interior(mu))

    def kl(self, mu1: float, mu2: float) -> float:
        """KL divergence between the members with means ``mu1`` and ``mu2``.

        Means may lie anywhere in the closed support hull (empirical means can
        exceed the cap ``M``). Boundary values follow the analytic limits and
        return ``inf`` where the limit diverges.
        """
        mu1, mu2 = float(mu1), float(mu2)
        if math.isnan(mu1) or math.isnan(mu2):
            raise DomainError(f"{self.kind}: NaN mean in kl({mu1}, {mu2})")
        sup = self.support
        for mu in (mu1, mu2):
            if mu not in sup:
                raise DomainError(f"{self.kind}: mean {mu!r} outside support {tuple(sup[:2])}")
        return _kernels.kl(self.code, self.param, mu1, mu2)

    def sample(self, mu: float, rng: np.random.Generator) -> float:
        mu = float(mu)
        if mu not in self.mean_space:
            raise DomainError(f"{self.kind}: cannot sample with mean {mu!r}")
        return _kernels.sample(self.code, self.param, mu, rng)

    def sample_many(self, mu: float, size, rng: np.random.Generator) -> np.ndarray:
        """Vectorised draws; same distribution as :meth:`sample`, different stream use."""
        mu = float(mu)
        if mu not in self.mean_space:
            raise DomainError(f"{self.kind}: cannot sample with mean {mu!r}")
        return self._sample_many(mu, size, rng)

    def _sample_many(self, mu, size, rng):
        raise NotImplementedError


@dataclass(frozen=True)
class Bernoulli(OpedFamily):
    code: ClassVar[int] = _kernels.BERNOULLI
    kind: ClassVar[str] = "bernoulli"

    @property
    def mean_space(self):
        return Interval(0.0, 1.0, True, True)

    @property
    def support(self):
        return Interval(0.0, 1.0, True, True)

    @property
    def variance_max(self):
        return 0.25

    def lipschitz_constant(self):
        return 1.0

    def _variance(self, mu):
        return mu * (1.0 - mu)

    def _natural_param(self, mu):
        return math.log(mu / (1.0 - mu))

    def log_partition(self, theta):
        return math.log1p(math.exp(theta)) if theta < 30 else theta + math.log1p(math.exp(-theta))

    def _sample_many(self, mu, size, rng):
        return (rng.random(size) < mu).astype(float)


@dataclass(frozen=True)
class Poisson(OpedFamily):
    M: float
    code: ClassVar[int] = _kernels.POISSON
    kind: ClassVar[str] = "poisson"

    def __post_init__(self):
        _check_positive("M", self.M, allow_inf=True)

    @property
    def mean_space(self):
        return Interval(0.0, float(self.M))

    @property
    def support(self):
        return Interval(0.0, math.inf, True, False)

    @property
    def variance_max(self):
        return None if math.isinf(self.M) else float(self.M)

    def lipschitz_constant(self):
        return 1.0

    def _variance(self, mu):
        return mu

    def _natural_param(self, mu):
        return math.log(mu)

    def log_partition(self, theta):
        return math.exp(theta)

    def _sample_many(self, mu, size, rng):
        return rng.poisson(mu, size).astype(float)


@dataclass(frozen=True)
class Gaussian(OpedFamily):
    sigma: float
    code: ClassVar[int] = _kernels.GAUSSIAN
    kind: ClassVar[str] = "gaussian"

    def __post_init__(self):
        _check_positive("sigma", self.sigma)

    @property
    def param(self):
        return float(self.sigma)

    @property
    def mean_space(self):
        return Interval(-math.inf, math.inf)

    @property
    def support(self):
        return Interval(-math.inf, math.inf)

    @property
    def variance_max(self):
        return float(self.sigma) ** 2

    def lipschitz_constant(self):
        return 0.0

    def _variance(self, mu):
        return float(self.sigma) ** 2

    def _natural_param(self, mu):
        return mu / float(self.sigma) ** 2

    def log_partition(self, theta):
        return 0.5 * float(self.sigma) ** 2 * theta * theta

    def _sample_many(self, mu, size, rng):
        return rng.normal(mu, self.sigma, size)


@dataclass(frozen=True)
class Gamma(OpedFamily):
    """Gamma with fixed shape ``k``, parameterised by its mean (scale = mean / k)."""

    k: float
    M: float
    code: ClassVar[int] = _kernels.GAMMA
    kind: ClassVar[str] = "gamma"

    def __post_init__(self):
        _check_positive("k", self.k)
        _check_positive("M", self.M, allow_inf=True)

    @property
    def param(self):
        return float(self.k)

    @property
    def mean_space(self):
        return Interval(0.0, float(self.M))

    @property
    def support(self):
        return Interval(0.0, math.inf)

    @property
    def variance_max(self):
        return None if math.isinf(self.M) else self.M**2 / self.k

    def lipschitz_constant(self):
        return 2.0 * self.M / self.k

    def _variance(self, mu):
        return mu * mu / self.k

    def _natural_param(self, mu):
        return -self.k / mu

    def log_partition(self, theta):
        return -self.k * math.log(-theta)

    def _sample_many(self, mu, size, rng):
        return rng.gamma(self.k, mu / self.k, size)


@dataclass(frozen=True)
class InverseGaussian(OpedFamily):
    lam: float
    M: float
    code: ClassVar[int] = _kernels.INVERSE_GAUSSIAN
    kind: ClassVar[str] = "inverse_gaussian"

    def __post_init__(self):
        _check_positive("lam", self.lam)
        _check_positive("M", self.M, allow_inf=True)

    @property
    def param(self):
        return float(self.lam)

    @property
    def mean_space(self):
        return Interval(0.0, float(self.M))

    @property
    def support(self):
        return Interval(0.0, math.inf)

    @property
    def variance_max(self):
        return None if math.isinf(self.M) else self.M**3 / self.lam

    def lipschitz_constant(self):
        return 3.0 * self.M**2 / self.lam

    def _variance(self, mu):
        return mu**3 / self.lam

    def _natural_param(self, mu):
        return -self.lam / (2.0 * mu * mu)

    def log_partition(self, theta):
        return -math.sqrt(-2.0 * self.lam * theta)

    def _sample_many(self, mu, size, rng):
        return rng.wald(mu, self.lam, size)


FAMILIES = {cls.kind: cls for cls in (Bernoulli, Poisson, Gaussian, Gamma, InverseGaussian)}


def make_family(kind: str, **params) -> OpedFamily:
    """Build a family from its kind name, e.g. ``make_family("gamma", k=2, M=10)``."""
    try:
        cls = FAMILIES[kind]
    except KeyError:
        raise DomainError(f"unknown family {kind!r}; expected one of {sorted(FAMILIES)}") from None
    return cls(**params)


def kl_quadrature(family: OpedFamily, mu1: float, mu2: float) -> float:
    """KL via numerical integration of ``(x - mu1) / V(x)`` from ``mu1`` to ``mu2``.

    Independent of the closed forms; used as their oracle.
    """
    mu1 = family._interior(mu1)
    mu2 = family._interior(mu2)
    if mu1 == mu2:
        return 0.0
    value, abserr, info, *rest = integrate.quad(
        lambda x: (x - mu1) / family._variance(x),
        mu1,
        mu2,
        epsabs=QUAD_TOL,
        epsrel=0.0,
        limit=QUAD_SPLIT_CAP,
        full_output=1,
    )
    if rest or abserr > QUAD_TOL:
        raise ConvergenceError(f"{family.kind}: quadrature of kl({mu1}, {mu2}) did not converge (err={abserr:.3g})")
    return value


def bregman_residual(family: OpedFamily, mu_a: float, mu_b: float, mu_c: float) -> float:
    """``kl(a,b) + kl(b,c) - kl(a,c) + (mu_b - mu_a)(theta_c - theta_b)``; zero in exact arithmetic."""
    th_b = family.natural_param(mu_b)
    th_c = family.natural_param(mu_c)
    family._interior(mu_a)
    return (
        family.kl(mu_a, mu_b)
        + family.kl(mu_b, mu_c)
        - family.kl(mu_a, mu_c)
        + (mu_b - mu_a) * (th_c - th_b)
    )


def kl_lower_bound(family: OpedFamily, mu1: float, mu2: float, mode: str = "lipschitz") -> float:
    """Generalised Pinsker lower bound on ``kl(mu1, mu2)``.

    ``mode="lipschitz"`` uses the variance function's Lipschitz constant and
    the larger of the two one-sided bounds; ``mode="max_variance"`` uses the
    family's maximum variance.
    """
    mu1 = family._interior(mu1)
    mu2 = family._interior(mu2)
    gap = abs(mu1 - mu2)
    if mode == "max_variance":
        vbar = family.variance_max
        if vbar is None:
            raise UnsupportedModeError(f"{family.kind} without a finite cap M has no maximum variance")
        return gap * gap / (2.0 * vbar)
    if mode == "lipschitz":
        if gap == 0.0:
            return 0.0
        c_l = family.lipschitz_constant()
        if math.isinf(c_l):
            raise UnsupportedModeError(f"{family.kind} without a finite cap M has no Lipschitz constant")
        return 0.5 * max(
            gap * gap / (family._variance(mu1) + c_l * gap),
            gap * gap / (family._variance(mu2) + c_l * gap),
        )
    raise UnsupportedModeError(f"unknown mode {mode!r}")
