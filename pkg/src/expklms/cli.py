"""Command-line runner.

    expklms --config exp.cfg [--out DIR] [--seed N] [--reps N]
    expklms --check {kl_oracle,bregman,pinsker,chernoff,geolog,all} [--out DIR] [--seed N]

Exit status: 0 success, 1 validation or check failure, 2 I/O failure.
"""
from __future__ import annotations

import argparse
import csv
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import analysis, checks
from .config import ExperimentConfig, load_config
from .errors import ConfigError
from .simulator import run_sweep

log = logging.getLogger("expklms")

EXIT_OK, EXIT_FAIL, EXIT_IO = 0, 1, 2
TRACE_HEADER = ["t", "mean_regret", "std_regret", "n_reps"]
SUMMARY_HEADER = ["policy", "T", "final_mean_regret", "final_std", "asymptotic_constant", "theorem1_bound"]
CHECK_HEADER = ["case", "measured", "reference", "passed"]


def fmt(x: float) -> str:
    """Shortest decimal that parses back to the identical double."""
    return repr(float(x))


def trace_grid(horizon: int, grid: str = "log", points_per_decade: int = 20, stride: int = 1) -> np.ndarray:
    """1-based time indices at which traces are written; always ends at ``horizon``."""
    if grid == "linear":
        ts = np.arange(stride, horizon + 1, stride)
    else:
        n = int(math.floor(points_per_decade * math.log10(horizon) + 1e-9)) + 1
        ts = np.rint(10.0 ** (np.arange(n) / points_per_decade)).astype(np.int64)
        ts = ts[ts <= horizon]
    return np.unique(np.append(ts, horizon))


def _write_csv(path: Path, header: list[str], rows, preamble: str | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if preamble:
            fh.write(preamble + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def run_experiment(cfg: ExperimentConfig, out: Path | None = None) -> int:
    out = Path(out) if out is not None else cfg.output
    inst = cfg.instance
    const = analysis.asymptotic_constant(inst)
    bound = analysis.best_theorem1_bound(inst, cfg.horizon).value
    grid = trace_grid(cfg.horizon, cfg.grid, cfg.points_per_decade, cfg.stride)
    results = {}
    for name, policy in cfg.policies.items():
        log.info("running %s: %s, T=%d, %d reps", name, policy.describe(), cfg.horizon, cfg.n_reps)
        results[name] = run_sweep(inst, policy, cfg.horizon, cfg.n_reps, cfg.base_seed, cfg.n_jobs)
    try:
        out.mkdir(parents=True, exist_ok=True)
        summary = []
        for name, res in results.items():
            rows = [[int(t), fmt(res.mean[t - 1]), fmt(res.std[t - 1]), res.n_reps] for t in grid]
            _write_csv(out / f"trace_{name}.csv", TRACE_HEADER, rows)
            summary.append([name, cfg.horizon, fmt(res.mean[-1]), fmt(res.std[-1]), fmt(const), fmt(bound)])
        _write_csv(out / "summary.csv", SUMMARY_HEADER, summary, preamble=f"# config_sha256={cfg.content_hash()}")
    except OSError as exc:
        print(f"error: cannot write to {out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def run_checks(suite: str, seed: int = 0, out: Path = Path(".")) -> int:
    names = list(checks.SUITES) if suite == "all" else [suite]
    failed = 0
    for name in names:
        rows = checks.SUITES[name](seed)
        bad = sum(not r.passed for r in rows)
        failed += bad
        print(f"{name}: {len(rows) - bad}/{len(rows)} passed")
        try:
            out.mkdir(parents=True, exist_ok=True)
            _write_csv(
                out / f"checks_{name}.csv",
                CHECK_HEADER,
                [[r.case, fmt(r.measured), fmt(r.reference), "pass" if r.passed else "fail"] for r in rows],
            )
        except OSError as exc:
            print(f"error: cannot write to {out}: {exc}", file=sys.stderr)
            return EXIT_IO
    return EXIT_FAIL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="expklms", description=__doc__.splitlines()[0])
    p.add_argument("--config", type=Path, help="experiment config file")
    p.add_argument("--out", type=Path, help="output directory (overrides 'output')")
    p.add_argument("--seed", type=int, help="override base_seed")
    p.add_argument("--reps", type=int, help="override n_reps")
    p.add_argument("--check", metavar="SUITE", help=f"run a check suite: {', '.join(checks.SUITES)} or all")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if args.check is not None:
        if args.check not in checks.SUITES and args.check != "all":
            parser.print_usage(sys.stderr)
            print(f"error: unknown check suite {args.check!r}; choose from {', '.join(checks.SUITES)}, all",
                  file=sys.stderr)
            return EXIT_FAIL
        return run_checks(args.check, args.seed or 0, args.out or Path("."))
    if args.config is None:
        parser.print_usage(sys.stderr)
        print("error: one of --config or --check is required", file=sys.stderr)
        return EXIT_FAIL
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"{args.config}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    if args.seed is not None:
        cfg.base_seed = args.seed
    if args.reps is not None:
        if args.reps < 1:
            print("error: --reps must be >= 1", file=sys.stderr)
            return EXIT_FAIL
        cfg.n_reps = args.reps
    return run_experiment(cfg, args.out)


if __name__ == "__main__":
    sys.exit(main())
