"""Regret growth against ln t for the three inverse-temperature variants.

The fitted slope of mean regret on ln t over the last decades estimates the
asymptotic constant each variant attains; compare it with the Lai-Robbins
constant printed alongside.

    python scripts/variant_slopes.py --horizon 100000 --reps 300
"""
import argparse
import math

import numpy as np

from expklms import IDENTITY, SHIFT_BY_ONE, BanditInstance, Bernoulli, ExpKLMS, run_sweep, scaled
from expklms.analysis import asymptotic_constant, regret_log_slope


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--means", default="0.9,0.8")
    p.add_argument("--horizon", type=int, default=100_000)
    p.add_argument("--reps", type=int, default=300)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    inst = BanditInstance(Bernoulli(), tuple(float(m) for m in args.means.split(",")))
    T = args.horizon
    t = np.arange(1, T + 1)
    print(f"{inst.describe()}, T={T}, {args.reps} reps; asymptotic constant {asymptotic_constant(inst):.4f}")
    print(f"{'variant':>10} {'R(T)':>10} {'se':>7} {'R(T)/lnT':>9} {'slope':>7}")
    for name, temp in [("k-1", SHIFT_BY_ONE), ("k/2", scaled(2)), ("k", IDENTITY)]:
        res = run_sweep(inst, ExpKLMS(temp), T, args.reps, args.seed)
        slope = regret_log_slope(t, res.mean, T / 100, T)
        print(f"{name:>10} {res.mean[-1]:10.3f} {res.std_of_mean[-1]:7.3f} "
              f"{res.mean[-1] / math.log(T):9.4f} {slope:7.4f}")


if __name__ == "__main__":
    main()
