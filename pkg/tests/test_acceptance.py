"""Acceptance gate: one PASS/FAIL line per criterion.

Run with ``pytest -m acceptance -s`` to see the lines as they are produced;
they are also collected in the terminal summary.
"""
import hashlib
import math
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from expklms import IDENTITY, SHIFT_BY_ONE, BanditInstance, Bernoulli, ExpKLMS, Gaussian, Poisson, PolicyState
from expklms import Uniform, run_sweep, scaled
from expklms.analysis import asymptotic_constant, best_theorem1_bound, minimax_bound
from expklms.checks import SUITES, mean_pairs, default_families
from expklms.oped import kl_quadrature
from expklms.policies import action_distribution

pytestmark = pytest.mark.acceptance

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def run_suite(name):
    start = time.perf_counter()
    rows = SUITES[name](0)
    return rows, time.perf_counter() - start


def test_c01_kl_oracle(report):
    rows, secs = run_suite("kl_oracle")
    pairs = min(len(mean_pairs(f)) for f in default_families())
    bad = sum(not r.passed for r in rows)
    worst = max(abs(r.measured - r.reference) / max(1.0, r.measured) for r in rows)
    ok = bad == 0 and pairs >= 50 and secs < 10
    report("1 kl oracle", ok, f"{len(rows)} pairs ({pairs}/family), worst rel err {worst:.2e}, {bad} fail, {secs:.1f}s")
    assert ok


def test_c02_bregman(report):
    rows, secs = run_suite("bregman")
    worst = max(r.measured for r in rows)
    ok = all(r.passed for r in rows) and secs < 5
    report("2 bregman identity", ok, f"max |residual| {worst:.2e} over 5x1000 triples, {secs:.1f}s")
    assert ok


def test_c03_pinsker(report):
    rows, secs = run_suite("pinsker")
    bad = sum(not r.passed for r in rows)
    ok = bad == 0 and secs < 5
    report("3 kl lower bounds", ok, f"{len(rows)} comparisons, {bad} violations, {secs:.1f}s")
    assert ok


def test_c04_chernoff(report):
    rows, secs = run_suite("chernoff")
    bad = sum(not r.passed for r in rows)
    ok = bad == 0 and len(rows) == 5 * 3 * 3 * 2 and secs < 120
    report("4 chernoff tails", ok, f"{len(rows)} cases at n_mc=1e5, {bad} violations, {secs:.1f}s")
    assert ok


def test_c05_geolog(report):
    rows, secs = run_suite("geolog")
    bad = sum(not r.passed for r in rows)
    tightest = max(r.measured / r.reference for r in rows)
    ok = bad == 0 and secs < 1
    report("5 geometric-log sum", ok, f"{len(rows)} (T, a) cases, max lhs/rhs {tightest:.3f}, {secs:.2f}s")
    assert ok


def test_c06_sampling_rule(report):
    start = time.perf_counter()
    fam = Bernoulli()
    sym = action_distribution(PolicyState.from_stats(fam, [4, 7], [0.5, 0.5]))
    flat = action_distribution(PolicyState.from_stats(fam, [1, 1, 1], [0.2, 0.9, 0.5]), SHIFT_BY_ONE)
    two = action_distribution(PolicyState.from_stats(fam, [5, 3], [0.8, 0.4]))
    w = math.exp(-2 * kl_quadrature(fam, 0.4, 0.8))
    errs = [
        np.max(np.abs(sym - 0.5)),
        np.max(np.abs(flat - 1 / 3)),
        abs(two[1] - w / (1 + w)),
        abs(two[1] - 0.3178181280400041),
    ]
    secs = time.perf_counter() - start
    ok = max(errs) <= 1e-9 and secs < 1
    report("6 sampling rule", ok, f"p2={two[1]:.10f}, max err {max(errs):.1e}, {secs:.2f}s")
    assert ok


def test_c07_asymptotic_slope(report):
    start = time.perf_counter()
    inst = BanditInstance(Bernoulli(), (0.9, 0.8))
    T = 100_000
    res = run_sweep(inst, ExpKLMS(SHIFT_BY_ONE), T, 1000, base_seed=70_000)
    const = asymptotic_constant(inst)
    ratio = res.mean[-1] / math.log(T)
    secs = time.perf_counter() - start
    ok = 0 < ratio <= 3 * const and abs(const - 2.252) < 5e-4 and secs < 600
    report("7 asymptotic slope", ok,
           f"R(T)/ln T = {ratio:.3f} (SE {res.std_of_mean[-1] / math.log(T):.3f}) vs 3*{const:.4f} = {3 * const:.3f}, "
           f"1000 reps, {secs:.0f}s")
    assert ok


THEOREM_INSTANCES = [
    BanditInstance(Bernoulli(), (0.9, 0.8)),
    BanditInstance(Bernoulli(), (0.5, 0.45, 0.4, 0.35)),
    BanditInstance(Gaussian(sigma=1.0), (1.0, 0.5, 0.0)),
    BanditInstance(Poisson(M=20.0), (5.0, 4.0)),
]


def test_c08_theorem_dominance(report):
    start = time.perf_counter()
    T = 10_000
    parts, ok = [], True
    for i, inst in enumerate(THEOREM_INSTANCES):
        res = run_sweep(inst, ExpKLMS(), T, 500, base_seed=80_000 + 1000 * i)
        bound = best_theorem1_bound(inst, T, c=0.25)
        within = res.mean[-1] <= bound.value + 3 * res.std_of_mean[-1]
        ok &= within
        parts.append(f"{inst.family.kind}{inst.n_arms} {res.mean[-1]:.1f}<={bound.value:.1f}")
    secs = time.perf_counter() - start
    ok &= secs < 900
    report("8 theorem-1 dominance", ok, f"{'; '.join(parts)}; 500 reps at T=1e4, {secs:.0f}s")
    assert ok


def test_c09_variant_ordering(report):
    start = time.perf_counter()
    inst = BanditInstance(Bernoulli(), (0.9, 0.8))
    T, n = 100_000, 500
    runs = {
        "shift": run_sweep(inst, ExpKLMS(SHIFT_BY_ONE), T, n, base_seed=90_000),
        "k/2": run_sweep(inst, ExpKLMS(scaled(2)), T, n, base_seed=91_000),
        "k": run_sweep(inst, ExpKLMS(IDENTITY), T, n, base_seed=92_000),
        "uniform": run_sweep(inst, Uniform(), T, n, base_seed=93_000),
    }
    m = {k: r.mean[-1] for k, r in runs.items()}
    se = {k: r.std_of_mean[-1] for k, r in runs.items()}
    # k/2 >= 1.2 * shift, with the difference clear of 3 standard errors
    margin = m["k/2"] - 1.2 * m["shift"]
    separated = margin > 3 * math.hypot(se["k/2"], 1.2 * se["shift"])
    beats = all(m["uniform"] >= 10 * (m[k] + 3 * se[k]) for k in ("shift", "k/2", "k"))
    secs = time.perf_counter() - start
    ok = separated and beats and secs < 900
    report("9 variant ordering", ok,
           f"shift {m['shift']:.2f}, k/2 {m['k/2']:.2f} (x{m['k/2'] / m['shift']:.2f}), k {m['k']:.2f}, "
           f"uniform {m['uniform']:.0f}; {n} reps, {secs:.0f}s")
    assert ok


def test_c10_adaptive_variance(report):
    start = time.perf_counter()
    T, K, n = 100_000, 10, 200
    r_adapt, r_max = [], []
    for i, top in enumerate((0.5, 0.99)):
        inst = BanditInstance(Bernoulli(), (top,) + (top - 0.1,) * (K - 1))
        res = run_sweep(inst, ExpKLMS(), T, n, base_seed=100_000 + 1000 * i)
        r_adapt.append(res.mean[-1] / minimax_bound(inst, T, "adaptive"))
        r_max.append(res.mean[-1] / minimax_bound(inst, T, "max_variance"))
    flat = max(r_adapt) / min(r_adapt)
    spread = r_max[0] / r_max[1]
    secs = time.perf_counter() - start
    ok = max(r_adapt) <= 5 and flat <= 2 and spread >= 3 and secs < 900
    report("10 adaptive variance", ok,
           f"V(mu_max)-ratios {r_adapt[0]:.3f}, {r_adapt[1]:.3f} (x{flat:.2f}); "
           f"Vbar-ratios {r_max[0]:.3f}, {r_max[1]:.4f} (x{spread:.2f}); {n} reps, {secs:.0f}s")
    assert ok


def test_c11_determinism(report, tmp_path):
    digests = []
    for run in ("first", "second"):
        out = tmp_path / run
        proc = subprocess.run(
            [sys.executable, "-m", "expklms", "--config", str(CONFIGS / "gaussian_three_arm.cfg"), "--out", str(out)],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0, proc.stderr
        digests.append({p.name: hashlib.sha256(p.read_bytes()).hexdigest() for p in sorted(out.iterdir())})
    ok = digests[0] == digests[1] and len(digests[0]) == 3
    report("11 determinism", ok, f"{len(digests[0])} CSVs byte-identical across two CLI runs")
    assert ok
