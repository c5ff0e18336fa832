"""Flat ``key = value`` experiment configs with dotted namespaces.

Example::

    instance.family = bernoulli
    instance.means = 0.9, 0.8
    horizon = 10000
    n_reps = 200
    base_seed = 1
    policy.expklms.kind = exp_kl_ms
    policy.expklms.temperature = shift
    policy.half.kind = exp_kl_ms
    policy.half.temperature = scaled
    policy.half.d = 2
    policy.unif.kind = uniform
    trace.grid = log
    trace.points_per_decade = 20

Blank lines and lines starting with ``#`` are ignored.
"""
from __future__ import annotations

import hashlib
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError, DomainError
from .oped import FAMILIES, OpedFamily, make_family
from .policies import KLUCB, ExpKLMS, Policy, Temperature, Uniform
from .simulator import BanditInstance

FAMILY_PARAMS = {
    "bernoulli": (),
    "poisson": ("M",),
    "gaussian": ("sigma",),
    "gamma": ("k", "M"),
    "inverse_gaussian": ("lam", "M"),
}
TOP_LEVEL = {"horizon", "n_reps", "base_seed", "output", "n_jobs"}
TRACE_KEYS = {"trace.grid", "trace.points_per_decade", "trace.stride"}
POLICY_FIELDS = {"kind", "temperature", "d"}
_KEY = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*(\.[A-Za-z0-9_]+)*$")


@dataclass
class ExperimentConfig:
    instance: BanditInstance
    policies: dict[str, Policy]
    horizon: int
    n_reps: int = 100
    base_seed: int = 0
    output: Path = Path("results")
    grid: str = "log"
    points_per_decade: int = 20
    stride: int = 1
    n_jobs: int = 1
    raw: dict[str, str] = field(default_factory=dict, repr=False)

    def resolved_text(self) -> str:
        """Canonical text of every setting that influences results."""
        items = {k: v for k, v in self.raw.items() if k not in ("output", "n_jobs")}
        items.update(
            horizon=str(self.horizon),
            n_reps=str(self.n_reps),
            base_seed=str(self.base_seed),
            **{"trace.grid": self.grid, "trace.points_per_decade": str(self.points_per_decade),
               "trace.stride": str(self.stride)},
        )
        return "".join(f"{k} = {items[k]}\n" for k in sorted(items))

    def content_hash(self) -> str:
        return hashlib.sha256(self.resolved_text().encode("utf-8")).hexdigest()


def parse_lines(text: str) -> tuple[dict[str, str], dict[str, int]]:
    values: dict[str, str] = {}
    lines: dict[str, int] = {}
    for no, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        if "=" not in s:
            raise ConfigError(f"expected 'key = value', got {s!r}", no)
        key, value = (p.strip() for p in s.split("=", 1))
        if not _KEY.match(key):
            raise ConfigError(f"malformed key {key!r}", no)
        if key in values:
            raise ConfigError(f"duplicate key {key!r} (first set on line {lines[key]})", no)
        values[key] = value
        lines[key] = no
    return values, lines


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc.strerror}") from exc
    return parse_config(text)


def parse_config(text: str) -> ExperimentConfig:
    raw, lines = parse_lines(text)

    def need(key: str) -> str:
        if key not in raw:
            raise ConfigError(f"missing required key {key!r}")
        return raw[key]

    def convert(key, fn, default=None):
        if key not in raw:
            return default
        try:
            return fn(raw[key])
        except (ValueError, DomainError) as exc:
            raise ConfigError(f"{key}: {exc}", lines[key]) from None

    kind = need("instance.family")
    if kind not in FAMILIES:
        raise ConfigError(f"instance.family: unknown family {kind!r}; expected one of {sorted(FAMILIES)}",
                          lines["instance.family"])
    allowed = {"instance.family", "instance.means"} | {f"instance.{p}" for p in FAMILY_PARAMS[kind]}
    for key in raw:
        if key.startswith("instance.") and key not in allowed:
            raise ConfigError(f"key {key!r} does not apply to family {kind!r}", lines[key])
        if "." not in key and key not in TOP_LEVEL:
            raise ConfigError(f"unknown key {key!r}", lines[key])
        if key.startswith("trace.") and key not in TRACE_KEYS:
            raise ConfigError(f"unknown key {key!r}", lines[key])
        if key.split(".")[0] not in ("instance", "trace", "policy") and "." in key:
            raise ConfigError(f"unknown namespace in {key!r}", lines[key])

    params = {}
    for p in FAMILY_PARAMS[kind]:
        need(f"instance.{p}")
        params[p] = convert(f"instance.{p}", float)
    try:
        family: OpedFamily = make_family(kind, **params)
    except DomainError as exc:
        named = [lines[f"instance.{p}"] for p in params if str(exc).startswith(p + " ")]
        raise ConfigError(str(exc), named[0] if named else lines["instance.family"]) from None

    means_text = need("instance.means")
    means = convert("instance.means", lambda s: tuple(float(x) for x in s.split(",")))
    if len(means) < 1 or any(not math.isfinite(m) for m in means):
        raise ConfigError(f"instance.means: bad value {means_text!r}", lines["instance.means"])
    try:
        instance = BanditInstance(family, means)
    except DomainError as exc:
        raise ConfigError(f"instance.means: {exc}", lines["instance.means"]) from None

    horizon = convert("horizon", int, None)
    if horizon is None:
        need("horizon")
    if horizon < instance.n_arms:
        raise ConfigError(f"horizon {horizon} must be at least the number of arms {instance.n_arms}", lines["horizon"])
    n_reps = convert("n_reps", int, 100)
    if n_reps < 1:
        raise ConfigError("n_reps must be >= 1", lines["n_reps"])
    grid = raw.get("trace.grid", "log")
    if grid not in ("log", "linear"):
        raise ConfigError(f"trace.grid must be 'log' or 'linear', got {grid!r}", lines["trace.grid"])
    ppd = convert("trace.points_per_decade", int, 20)
    stride = convert("trace.stride", int, 1)
    if ppd < 1 or stride < 1:
        key = "trace.points_per_decade" if ppd < 1 else "trace.stride"
        raise ConfigError(f"{key} must be >= 1", lines[key])

    policies = _parse_policies(raw, lines)
    if not policies:
        raise ConfigError("missing required key 'policy.<name>.kind' (no policies configured)")
    return ExperimentConfig(
        instance=instance,
        policies=policies,
        horizon=horizon,
        n_reps=n_reps,
        base_seed=convert("base_seed", int, 0),
        output=Path(raw.get("output", "results")),
        grid=grid,
        points_per_decade=ppd,
        stride=stride,
        n_jobs=convert("n_jobs", int, 1),
        raw=raw,
    )


def _parse_policies(raw: dict[str, str], lines: dict[str, int]) -> dict[str, Policy]:
    specs: dict[str, dict[str, str]] = {}
    for key, value in raw.items():
        if not key.startswith("policy."):
            continue
        parts = key.split(".")
        if len(parts) != 3 or parts[2] not in POLICY_FIELDS:
            raise ConfigError(f"policy keys look like 'policy.<name>.{{kind,temperature,d}}', got {key!r}", lines[key])
        specs.setdefault(parts[1], {})[parts[2]] = value
    policies: dict[str, Policy] = {}
    for name, spec in specs.items():
        first = min(lines[f"policy.{name}.{f}"] for f in spec)
        kind = spec.get("kind")
        if kind is None:
            raise ConfigError(f"missing required key 'policy.{name}.kind'")
        if kind == "exp_kl_ms":
            try:
                temp = Temperature(spec.get("temperature", "shift"), float(spec.get("d", 1.0)))
            except (ValueError, DomainError) as exc:
                raise ConfigError(f"policy {name!r}: {exc}", first) from None
            policies[name] = ExpKLMS(temp)
        elif kind in ("kl_ucb", "uniform"):
            extra = set(spec) - {"kind"}
            if extra:
                raise ConfigError(f"policy {name!r}: {kind} takes no {sorted(extra)}", first)
            policies[name] = KLUCB() if kind == "kl_ucb" else Uniform()
        else:
            raise ConfigError(f"policy {name!r}: unknown kind {kind!r}", lines[f"policy.{name}.kind"])
    return dict(sorted(policies.items()))
