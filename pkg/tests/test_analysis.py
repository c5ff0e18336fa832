import math

import numpy as np
import pytest
from scipy import integrate, stats

from expklms import BanditInstance, Bernoulli, DomainError, Gamma, Gaussian, Poisson, UnsupportedModeError
from expklms.analysis import (asymptotic_constant, best_theorem1_bound, chernoff_check, delta_grid,
                              geo_log_sum_check, minimax_bound, regret_log_slope, sub_ucb_yardstick, theorem1_bound)
from expklms.oped import kl_quadrature

B2 = BanditInstance(Bernoulli(), (0.9, 0.8))


# -- finite-time bound --------------------------------------------------------

def test_bound_with_no_arms_above_threshold():
    rep = theorem1_bound(B2, 10_000, delta=0.5)
    assert rep.value == 5000.0
    assert [n for n, _ in rep.terms] == ["T*delta", "leading", "inverse_kl", "best_arm_deviation"]


def test_bound_frozen_value():
    rep = theorem1_bound(B2, 100_000, delta=0.0, c=0.25)
    terms = dict(rep.terms)
    assert terms["T*delta"] == 0.0
    assert terms["leading"] == pytest.approx(67.23378290411085, rel=1e-12)
    assert terms["inverse_kl"] == pytest.approx(59.21057988402548, rel=1e-12)
    assert terms["best_arm_deviation"] == pytest.approx(2852.1937119666827, rel=1e-12)
    assert rep.value == pytest.approx(2978.638074754819, rel=1e-12)


def test_bound_against_quadrature_kl():
    # same formula with every KL replaced by its integral form
    T, c, gap = 100_000.0, 0.25, 0.1
    fam = Bernoulli()
    lo, hi = 0.8 + c * gap, 0.9 - c * gap
    k_mid, k_own, k_top = kl_quadrature(fam, lo, hi), kl_quadrature(fam, lo, 0.8), kl_quadrature(fam, hi, 0.9)
    lg = lambda x: math.log(max(x, math.e))
    expected = (gap * lg(T * k_mid) / k_mid + gap + gap * (1 / k_mid + 1 / k_own)
                + min(gap * (1 / k_top + 1 / k_top**2), gap * 16 * lg(T * k_top) / k_top))
    assert theorem1_bound(B2, 100_000, 0.0).value == pytest.approx(expected, rel=1e-8)


def test_bound_is_monotone_in_horizon():
    values = [best_theorem1_bound(B2, T).value for T in (10**2, 10**3, 10**4, 10**5, 10**6)]
    assert all(b >= a for a, b in zip(values, values[1:]))


def test_bound_rejects_bad_arguments():
    with pytest.raises(DomainError):
        theorem1_bound(B2, 100, delta=-0.1)
    with pytest.raises(DomainError):
        theorem1_bound(B2, 100, delta=0.0, c=0.3)


def test_delta_grid():
    g = delta_grid(BanditInstance(Bernoulli(), (0.9, 0.8, 0.5)))
    assert g[0] == 0.0 and len(g) == 41
    assert g[1] == pytest.approx(1e-4) and g[-1] == pytest.approx(0.4)
    np.testing.assert_array_equal(delta_grid(BanditInstance(Bernoulli(), (0.5, 0.5))), [0.0])


def test_best_bound_not_above_any_grid_point():
    inst = BanditInstance(Gaussian(sigma=1.0), (0.0, -0.2, -1.0))
    best = best_theorem1_bound(inst, 10_000).value
    assert all(best <= theorem1_bound(inst, 10_000, d).value for d in delta_grid(inst))


# -- asymptotic constant, minimax, yardstick ----------------------------------

@pytest.mark.parametrize(
    "inst,expected",
    [
        (BanditInstance(Bernoulli(), (0.5, 0.5)), 0.0),
        (B2, 2.2520996985245265),
        (BanditInstance(Gaussian(sigma=1.0), (1.0, 0.0)), 2.0),
        (BanditInstance(Poisson(M=10.0), (2.0, 2.0, 1.0)), 1.0 / (1.0 - math.log(2.0))),
    ],
)
def test_asymptotic_constant(inst, expected):
    assert asymptotic_constant(inst) == pytest.approx(expected, rel=1e-12)


def test_minimax_examples():
    assert minimax_bound(BanditInstance(Bernoulli(), (0.3,)), 1000) == 0.0
    assert minimax_bound(B2, 10_000) == pytest.approx(35.32230067546424, rel=1e-12)
    worst = minimax_bound(B2, 10_000, "max_variance")
    assert worst / minimax_bound(B2, 10_000) == pytest.approx(math.sqrt(0.25 / 0.09), rel=1e-12)
    assert worst / minimax_bound(BanditInstance(Bernoulli(), (0.99, 0.98)), 10_000) == pytest.approx(
        math.sqrt(0.25 / (0.99 * 0.01)), rel=1e-12)
    assert math.sqrt(0.25 / (0.99 * 0.01)) == pytest.approx(5.03, abs=0.01)


def test_minimax_unsupported():
    with pytest.raises(UnsupportedModeError):
        minimax_bound(BanditInstance(Gamma(k=2.0, M=math.inf), (1.0, 2.0)), 100, "max_variance")
    with pytest.raises(UnsupportedModeError):
        minimax_bound(BanditInstance(Gamma(k=2.0, M=math.inf), (1.0, 2.0)), 100, "adaptive")
    with pytest.raises(UnsupportedModeError):
        minimax_bound(B2, 100, "sharp")


def test_sub_ucb_yardstick():
    assert sub_ucb_yardstick(B2, 1000) == pytest.approx(math.log(1000) / 0.1 + 0.1, rel=1e-12)


# -- geometric-log sum --------------------------------------------------------

@pytest.mark.parametrize("T", [10, 100, 1000, 10_000])
@pytest.mark.parametrize("mult", [1.01, 2.0, 10.0, 1000.0])
def test_geo_log_sum_bound_holds(T, mult):
    lhs, rhs = geo_log_sum_check(T, mult / T)
    assert 0.0 <= lhs <= rhs


def test_geo_log_sum_against_integral():
    # the sum is dominated by its integral over [0, T] for a decreasing summand
    T, a = 1000, 0.01
    lhs, _ = geo_log_sum_check(T, a)
    integral, _ = integrate.quad(lambda k: math.exp(-k * a) * math.log(T / k), 0, T, limit=200)
    assert lhs <= integral


def test_geo_log_sum_examples():
    assert geo_log_sum_check(1, 2.0)[0] == 0.0
    lhs, rhs = geo_log_sum_check(2, 1.0)
    assert lhs == pytest.approx(math.exp(-1) * math.log(2), rel=1e-15)
    assert rhs == pytest.approx(5.0, rel=1e-15)


@pytest.mark.parametrize("T,a", [(0, 1.0), (100, 0.01), (100, 0.0)])
def test_geo_log_sum_precondition(T, a):
    with pytest.raises(DomainError):
        geo_log_sum_check(T, a)


# -- Chernoff -----------------------------------------------------------------

def test_chernoff_zero_epsilon():
    res = chernoff_check(Bernoulli(), 0.5, 0.0, 10, n_mc=10_000)
    assert res.bound == 1.0 and res.passed


def test_chernoff_bernoulli_example():
    res = chernoff_check(Bernoulli(), 0.5, 0.2, 20, n_mc=100_000, seed=1)
    exact = stats.binom.cdf(5, 20, 0.5)  # P(mean < 0.3) = P(S <= 5)
    assert res.bound == pytest.approx(math.exp(-20 * Bernoulli().kl(0.3, 0.5)), rel=1e-15)
    assert abs(res.freq - exact) <= 5 * math.sqrt(exact * (1 - exact) / 100_000)
    assert res.passed


def test_chernoff_gaussian_example():
    res = chernoff_check(Gaussian(sigma=1.0), 0.0, 1.0, 4, n_mc=200_000, seed=2, tail="upper")
    assert res.bound == pytest.approx(math.exp(-2.0), rel=1e-15)
    exact = stats.norm.sf(2.0)
    assert exact == pytest.approx(0.02275, abs=1e-5)
    assert abs(res.freq - exact) <= 5 * math.sqrt(exact * (1 - exact) / 200_000)
    assert res.passed


def test_chernoff_rejects_bad_arguments():
    with pytest.raises(DomainError):
        chernoff_check(Bernoulli(), 0.5, 0.1, 10, n_mc=100)
    with pytest.raises(DomainError):
        chernoff_check(Bernoulli(), 0.5, 0.6, 10)
    with pytest.raises(DomainError):
        chernoff_check(Bernoulli(), 0.5, 0.1, 10, tail="both")


def test_regret_log_slope_recovers_coefficient():
    t = np.arange(1, 10_001, dtype=float)
    assert regret_log_slope(t, 3.0 * np.log(t) + 7.0, 100, 10_000) == pytest.approx(3.0, rel=1e-10)
