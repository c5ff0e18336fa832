"""Regret normalised by the best arm's variance versus the family maximum.

For K-arm Bernoulli instances with one best arm at ``mu_max`` and the rest at
``mu_max - gap``, prints regret / sqrt(V K T ln K) with V = V(mu_max) and with
V = 1/4. The first column should stay flat as mu_max moves towards 1.

    python scripts/adaptive_variance.py --tops 0.5,0.7,0.9,0.99
"""
import argparse

from expklms import BanditInstance, Bernoulli, ExpKLMS, run_sweep
from expklms.analysis import minimax_bound


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--tops", default="0.5,0.7,0.9,0.99")
    p.add_argument("--arms", type=int, default=10)
    p.add_argument("--gap", type=float, default=0.1)
    p.add_argument("--horizon", type=int, default=100_000)
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    T = args.horizon
    print(f"K={args.arms}, gap={args.gap}, T={T}, {args.reps} reps")
    print(f"{'mu_max':>7} {'R(T)':>10} {'se':>7} {'R/adaptive':>11} {'R/max_var':>10}")
    for top in (float(x) for x in args.tops.split(",")):
        inst = BanditInstance(Bernoulli(), (top,) + (top - args.gap,) * (args.arms - 1))
        res = run_sweep(inst, ExpKLMS(), T, args.reps, args.seed)
        r = res.mean[-1]
        print(f"{top:7.3f} {r:10.2f} {res.std_of_mean[-1]:7.2f} "
              f"{r / minimax_bound(inst, T, 'adaptive'):11.4f} {r / minimax_bound(inst, T, 'max_variance'):10.4f}")


if __name__ == "__main__":
    main()
