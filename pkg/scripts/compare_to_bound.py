"""Empirical regret of Exp-KL-MS next to the finite-time bound and yardsticks.

    python scripts/compare_to_bound.py --horizons 1000,10000,100000
"""
import argparse
import math

from expklms import BanditInstance, Bernoulli, ExpKLMS, Gaussian, Poisson, run_sweep
from expklms.analysis import asymptotic_constant, best_theorem1_bound, sub_ucb_yardstick

INSTANCES = [
    BanditInstance(Bernoulli(), (0.9, 0.8)),
    BanditInstance(Bernoulli(), (0.5, 0.45, 0.4, 0.35)),
    BanditInstance(Gaussian(sigma=1.0), (1.0, 0.5, 0.0)),
    BanditInstance(Poisson(M=20.0), (5.0, 4.0)),
]


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--horizons", default="1000,10000,100000")
    p.add_argument("--reps", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    print(f"{'instance':<48} {'T':>7} {'R(T)':>9} {'se':>6} {'bound':>9} {'delta*':>8} {'subUCB':>8} {'C*lnT':>8}")
    for inst in INSTANCES:
        const = asymptotic_constant(inst)
        for T in (int(x) for x in args.horizons.split(",")):
            res = run_sweep(inst, ExpKLMS(), T, args.reps, args.seed)
            b = best_theorem1_bound(inst, T)
            print(f"{inst.describe():<48} {T:7d} {res.mean[-1]:9.2f} {res.std_of_mean[-1]:6.2f} {b.value:9.1f} "
                  f"{b.delta:8.4f} {sub_ucb_yardstick(inst, T):8.1f} {const * math.log(T):8.1f}")


if __name__ == "__main__":
    main()
