"""Compiled scalar routines shared by the Python API and the episode loop.

Every closed-form KL, reward draw and bisection lives here exactly once so the
pure-Python policy path and the compiled simulator agree bit for bit when they
are driven by the same ``numpy.random.Generator``.
"""
import math

import numba
import numpy as np

from .errors import ConvergenceError

BERNOULLI, POISSON, GAUSSIAN, GAMMA, INVERSE_GAUSSIAN = 0, 1, 2, 3, 4

EXP_KL_MS, KL_UCB, UNIFORM = 0, 1, 2

SHIFT_BY_ONE, SCALED, IDENTITY = 0, 1, 2

# weights below this are flushed to zero before normalisation
UNDERFLOW = 1e-300

KLUCB_TOL = 1e-9
KLUCB_MAX_ITER = 200

_jit = numba.njit(cache=True, nogil=True)


@_jit
def kl(code, param, mu1, mu2):
    """Closed-form KL between the members with means ``mu1`` and ``mu2``.

    No domain validation; callers are expected to have checked their inputs.
    """
    if mu1 == mu2:
        return 0.0
    if code == BERNOULLI:
        if mu2 <= 0.0 or mu2 >= 1.0:
            return math.inf
        if mu1 <= 0.0:
            return -math.log1p(-mu2)
        if mu1 >= 1.0:
            return -math.log(mu2)
        return mu1 * math.log(mu1 / mu2) + (1.0 - mu1) * math.log((1.0 - mu1) / (1.0 - mu2))
    if code == POISSON:
        if mu2 <= 0.0:
            return math.inf
        if mu1 <= 0.0:
            return mu2
        return mu2 - mu1 + mu1 * math.log(mu1 / mu2)
    if code == GAUSSIAN:
        d = mu1 - mu2
        return d * d / (2.0 * param * param)
    if code == GAMMA:
        r = mu1 / mu2
        return param * (r - 1.0 - math.log(r))
    # inverse Gaussian, fixed lambda
    d = mu1 - mu2
    return param * d * d / (2.0 * mu1 * mu2 * mu2)


@_jit
def sample(code, param, mu, rng):
    if code == BERNOULLI:
        return 1.0 if rng.random() < mu else 0.0
    if code == POISSON:
        return float(rng.poisson(mu))
    if code == GAUSSIAN:
        return rng.normal(mu, param)
    if code == GAMMA:
        return rng.gamma(param, mu / param)
    return rng.wald(mu, param)


@_jit
def temperature(kind, d, k):
    if kind == SHIFT_BY_ONE:
        return k - 1.0
    if kind == SCALED:
        return k / d
    return float(k)


@_jit
def klucb_index(code, param, mu_hat, budget, upper):
    """Largest ``q`` with ``kl(mu_hat, q) <= budget``, searched up to ``upper``."""
    if budget <= 0.0 or mu_hat >= upper:
        return mu_hat
    lo = mu_hat
    if math.isinf(upper):
        step = max(1.0, abs(mu_hat))
        hi = mu_hat + step
        while kl(code, param, mu_hat, hi) <= budget:
            step *= 2.0
            hi = mu_hat + step
    else:
        hi = upper
        if kl(code, param, mu_hat, hi) <= budget:
            return hi
    for _ in range(KLUCB_MAX_ITER):
        if hi - lo <= KLUCB_TOL:
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        if kl(code, param, mu_hat, mid) <= budget:
            lo = mid
        else:
            hi = mid
    raise ConvergenceError("kl-UCB bisection did not converge")


@_jit
def inverse_cdf(weights, u):
    """Index drawn from unnormalised ``weights`` using one uniform ``u``."""
    n = weights.shape[0]
    total = 0.0
    for i in range(n):
        total += weights[i]
    target = u * total
    acc = 0.0
    last = 0
    for i in range(n):
        acc += weights[i]
        if weights[i] > 0.0:
            last = i
        if acc > target:
            return i
    return last


@_jit
def exp_kl_ms_weights(code, param, counts, sums, kind, d, out):
    n = counts.shape[0]
    best = -math.inf
    for i in range(n):
        m = sums[i] / counts[i]
        if m > best:
            best = m
    for i in range(n):
        m = sums[i] / counts[i]
        lam = temperature(kind, d, counts[i])
        if lam == 0.0 or m == best:
            out[i] = 1.0
            continue
        div = kl(code, param, m, best)
        if math.isinf(div):
            out[i] = 0.0
            continue
        w = math.exp(-lam * div)
        out[i] = w if w >= UNDERFLOW else 0.0
    return out


@_jit
def run_episode(code, param, upper, means, policy, kind, d, horizon, rng):
    """Play ``horizon`` rounds; returns the action sequence and final counts."""
    n_arms = means.shape[0]
    counts = np.zeros(n_arms, dtype=np.int64)
    sums = np.zeros(n_arms)
    weights = np.empty(n_arms)
    actions = np.empty(horizon, dtype=np.int64)
    for t in range(horizon):
        if t < n_arms:
            arm = t
        elif policy == EXP_KL_MS:
            exp_kl_ms_weights(code, param, counts, sums, kind, d, weights)
            arm = inverse_cdf(weights, rng.random())
        elif policy == KL_UCB:
            budget_num = math.log(t)
            arm = 0
            best = -math.inf
            for i in range(n_arms):
                idx = klucb_index(code, param, sums[i] / counts[i], budget_num / counts[i], upper)
                if idx > best:
                    best = idx
                    arm = i
        else:
            arm = min(int(rng.random() * n_arms), n_arms - 1)
        reward = sample(code, param, means[arm], rng)
        counts[arm] += 1
        sums[arm] += reward
        actions[t] = arm
    return actions, counts
