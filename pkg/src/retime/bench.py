"""Benchmark harness: optimality-rate and method-comparison experiments.

Two experiment shapes share one config. The optimality experiment warps
random templates, reparameterizes each warped input, and reports how often
the reparameterized cost functional beats the input's. The comparison
experiment times each alignment method on warped pairs and aggregates error
and runtime statistics per (T, method).

Every trial seed is derived from (master_seed, T, template_index,
warp_index), so report contents are bit-identical across runs and across
thread counts; only measured runtimes vary. Timed sections are serialized
by a process-wide lock so parallel workers cannot distort each other's
measurements.
"""

from __future__ import annotations

import json
import os
import re
import threading
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import asdict, dataclass

import numpy as np

from .dtw import WarpingPath, dtw_full, fastdtw
from .errors import ConfigError
from .generate import TemplateSpec, generate_template, warped_pair
from .reparam import align_pair, reparameterize
from .signals import Signal, resample
from .warps import random_warp

__all__ = [
    "SignalSpec",
    "ExperimentConfig",
    "ExperimentReport",
    "AlignmentOutcome",
    "OptimalityRow",
    "CostPair",
    "AggregateRow",
    "derive_seed",
    "time_operation",
    "timed_value",
    "optimality_experiment",
    "comparison_experiment",
    "emit_report",
]

# A trial counts as optimal when j_ust <= j_input * (1 + this slack); exact
# ties (identity-warp inputs) must count, roundoff must not flip them.
OPTIMALITY_TOLERANCE = 1e-9

_METHOD_RE = re.compile(r"fastdtw:r=(\d+)\Z")

_TIMING_LOCK = threading.Lock()


def derive_seed(*parts: int) -> int:
    """Deterministic 32-bit seed hashed from non-negative integer parts."""
    return int(np.random.SeedSequence(list(parts)).generate_state(1)[0])


def timed_value(thunk):
    """(thunk(), median wall seconds of 3 timed runs after one warm-up run).

    Uses the monotonic performance counter. The warm-up and the three timed
    repetitions run under a process-wide lock so concurrent benchmark workers
    measure one at a time.
    """
    with _TIMING_LOCK:
        value = thunk()
        reps = []
        for _ in range(3):
            t0 = time.perf_counter()
            thunk()
            reps.append(time.perf_counter() - t0)
    reps.sort()
    return value, reps[1]


def time_operation(thunk) -> float:
    """Median-of-3 wall time of thunk() in seconds, after one warm-up run."""
    return timed_value(thunk)[1]


@dataclass(frozen=True)
class SignalSpec:
    """Template family used by an experiment: kind, width, and texture."""

    kind: str = "trajectory3d"
    n: int = 3
    modes: int = 6
    roughness: float = 0.5

    def __post_init__(self):
        if not 0.0 < self.roughness <= 1.0:
            raise ConfigError(f"roughness must be in (0, 1], got {self.roughness}")
        # TemplateSpec owns the kind/n/modes rules; probe it at the minimum T.
        TemplateSpec(self.kind, 5, self.n, 0, self.modes)

    def template(self, T: int, seed: int) -> Signal:
        return generate_template(TemplateSpec(self.kind, T, self.n, seed, self.modes))


@dataclass(frozen=True)
class ExperimentConfig:
    """Declarative description of one experiment run.

    warps_per_template only affects the optimality experiment; the
    comparison experiment always draws one warped pair per template.
    """

    t_values: tuple = tuple(range(20, 151, 10))
    templates_per_t: int = 10
    warps_per_template: int = 10
    methods: tuple = ("gora", "dtw", "fastdtw:r=1")
    signal: SignalSpec = SignalSpec()
    master_seed: int = 0
    output_dir: str | None = None
    threads: int = 1

    def __post_init__(self):
        t_values = tuple(int(t) for t in self.t_values)
        if not t_values:
            raise ConfigError("t_values must be non-empty")
        if any(t < 5 for t in t_values):
            raise ConfigError(f"every T must be >= 5, got {t_values}")
        methods = tuple(str(m) for m in self.methods)
        if not methods:
            raise ConfigError("methods must be non-empty")
        if len(set(methods)) != len(methods):
            raise ConfigError(f"duplicate methods in {methods}")
        for name in methods:
            _method_runner(name)  # raises ConfigError on unknown names
        if self.templates_per_t < 1 or self.warps_per_template < 1:
            raise ConfigError("templates_per_t and warps_per_template must be >= 1")
        if self.master_seed < 0:
            raise ConfigError(f"master_seed must be >= 0, got {self.master_seed}")
        if self.threads < 1:
            raise ConfigError(f"threads must be >= 1, got {self.threads}")
        object.__setattr__(self, "t_values", t_values)
        object.__setattr__(self, "methods", methods)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError(f"config must be a JSON object, got {type(data).__name__}")
        data = dict(data)
        signal = data.pop("signal", None)
        kwargs = {}
        fields = {f for f in cls.__dataclass_fields__ if f != "signal"}
        for key, value in data.items():
            if key not in fields:
                raise ConfigError(f"unknown config key {key!r}")
            kwargs[key] = value
        if signal is not None:
            if not isinstance(signal, dict):
                raise ConfigError("signal must be a JSON object")
            unknown = set(signal) - set(SignalSpec.__dataclass_fields__)
            if unknown:
                raise ConfigError(f"unknown signal keys {sorted(unknown)}")
            kwargs["signal"] = SignalSpec(**signal)
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class AlignmentOutcome:
    """One method's result on one signal pair."""

    method: str
    error: float
    seconds: float
    path: WarpingPath | None = None


@dataclass(frozen=True)
class OptimalityRow:
    """Share of trials at one T where reparameterization did not lose."""

    T: int
    percentage: float
    trials: int

    def __post_init__(self):
        if not 0.0 <= self.percentage <= 100.0:
            raise ValueError(f"percentage out of range: {self.percentage}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")


@dataclass(frozen=True)
class CostPair:
    """Per-trial cost functional values, before and after reparameterization."""

    T: int
    template_index: int
    warp_index: int
    j_input: float
    j_ust: float


@dataclass(frozen=True)
class AggregateRow:
    """Error and runtime statistics for one (T, method) cell."""

    T: int
    method: str
    mean_error: float
    std_error: float
    mean_runtime_s: float
    std_runtime_s: float
    trials: int

    def __post_init__(self):
        if self.std_error < 0.0 or self.std_runtime_s < 0.0:
            raise ValueError("standard deviations must be >= 0")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")


@dataclass(frozen=True)
class ExperimentReport:
    """Aggregated experiment results; sections are empty when not applicable."""

    config: ExperimentConfig
    optimality: tuple = ()
    cost_pairs: tuple = ()
    aggregates: tuple = ()


def _method_runner(name: str):
    """Map a method name to a callable (s1, s2) -> (error, path or None)."""
    if name == "gora":
        return lambda a, b: (align_pair(a, b)[0], None)
    if name == "dtw":
        def run_dtw(a, b):
            p = dtw_full(a, b)
            return p.normalized, p
        return run_dtw
    m = _METHOD_RE.match(name)
    if m:
        radius = int(m.group(1))
        def run_fast(a, b, radius=radius):
            p = fastdtw(a, b, radius)
            return p.normalized, p
        return run_fast
    raise ConfigError(
        f"unknown method {name!r}; expected gora, dtw, or fastdtw:r=<radius>"
    )


def _run_tasks(tasks, fn, threads, progress):
    """Evaluate fn(*task) for every task, optionally on a thread pool.

    Returns {task: result}; result content must not depend on scheduling,
    which holds because every trial is seeded from its task key alone.
    """
    results = {}
    if threads <= 1:
        for task in tasks:
            results[task] = fn(*task)
            if progress is not None:
                progress(f"done {len(results)}/{len(tasks)} (T={task[0]})")
        return results
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = {pool.submit(fn, *task): task for task in tasks}
        for future in as_completed(futures):
            results[futures[future]] = future.result()
            if progress is not None:
                progress(f"done {len(results)}/{len(tasks)} (T={futures[future][0]})")
    return results


def optimality_experiment(config: ExperimentConfig, progress=None) -> ExperimentReport:
    """How often does reparameterization lower the cost functional?

    For every (T, template, warp): warp the template, reparameterize the
    warped input, and record the cost functional before and after. A trial
    counts as optimal when the reparameterized cost does not exceed the
    input's beyond OPTIMALITY_TOLERANCE (relative). Returns per-T
    percentages plus the raw per-trial cost pairs.
    """
    sig = config.signal
    seed = config.master_seed

    def run_template(T, ti):
        template = sig.template(T, derive_seed(seed, T, ti, 0))
        pairs = []
        for wi in range(config.warps_per_template):
            w = random_warp(T, derive_seed(seed, T, ti, wi + 1), roughness=sig.roughness)
            r = reparameterize(resample(template, w))
            pairs.append(CostPair(T, ti, wi, r.cost_input, r.cost_reparam))
        return pairs

    tasks = [(T, ti) for T in config.t_values for ti in range(config.templates_per_t)]
    results = _run_tasks(tasks, run_template, config.threads, progress)

    cost_pairs = []
    rows = []
    for T in config.t_values:
        at_t = []
        for ti in range(config.templates_per_t):
            at_t.extend(results[(T, ti)])
        hits = sum(
            1 for p in at_t if p.j_ust <= p.j_input * (1.0 + OPTIMALITY_TOLERANCE)
        )
        rows.append(OptimalityRow(T, 100.0 * hits / len(at_t), len(at_t)))
        cost_pairs.extend(at_t)
    return ExperimentReport(
        config=config, optimality=tuple(rows), cost_pairs=tuple(cost_pairs)
    )


def comparison_experiment(config: ExperimentConfig, progress=None) -> ExperimentReport:
    """Error and runtime of every configured method on warped pairs.

    For every (T, template): draw one warped pair and run each method's full
    error computation under timed_value. Aggregates mean/std of error and
    runtime per (T, method) over exactly templates_per_t trials; errors are
    deterministic, runtimes are not.
    """
    sig = config.signal
    seed = config.master_seed
    runners = [(name, _method_runner(name)) for name in config.methods]

    def run_template(T, ti):
        template = sig.template(T, derive_seed(seed, T, ti, 0))
        a, b = warped_pair(template, derive_seed(seed, T, ti, 1), roughness=sig.roughness)
        outcomes = []
        for name, fn in runners:
            (error, path), seconds = timed_value(lambda: fn(a, b))
            outcomes.append(AlignmentOutcome(name, error, seconds, path))
        return outcomes

    tasks = [(T, ti) for T in config.t_values for ti in range(config.templates_per_t)]
    results = _run_tasks(tasks, run_template, config.threads, progress)

    aggregates = []
    for T in config.t_values:
        by_method = {name: ([], []) for name in config.methods}
        for ti in range(config.templates_per_t):
            for outcome in results[(T, ti)]:
                errs, times = by_method[outcome.method]
                errs.append(outcome.error)
                times.append(outcome.seconds)
        for name in config.methods:
            errs, times = by_method[name]
            aggregates.append(
                AggregateRow(
                    T,
                    name,
                    float(np.mean(errs)),
                    float(np.std(errs)),
                    float(np.mean(times)),
                    float(np.std(times)),
                    len(errs),
                )
            )
    return ExperimentReport(config=config, aggregates=tuple(aggregates))


def emit_report(report: ExperimentReport, directory) -> None:
    """Write plot-ready CSVs plus summary.json and config.json.

    fig2a.csv       T,percentage,trials            (optimality sections)
    fig2bc.csv      T,template,warp,j_input,j_ust  (per-trial cost pairs)
    fig_error.csv   T,method,mean,std              (comparison sections)
    fig_runtime.csv T,method,mean,std              (comparison sections)

    Floats are written in shortest round-trip form. Every file except
    fig_runtime.csv is byte-identical across repeated runs of the same
    config; runtimes are quarantined there on purpose.
    """
    os.makedirs(directory, exist_ok=True)

    def fmt(x) -> str:
        return repr(float(x))

    if report.optimality:
        lines = ["T,percentage,trials"]
        lines += [f"{r.T},{fmt(r.percentage)},{r.trials}" for r in report.optimality]
        _write_lines(os.path.join(directory, "fig2a.csv"), lines)
    if report.cost_pairs:
        lines = ["T,template,warp,j_input,j_ust"]
        lines += [
            f"{p.T},{p.template_index},{p.warp_index},{fmt(p.j_input)},{fmt(p.j_ust)}"
            for p in report.cost_pairs
        ]
        _write_lines(os.path.join(directory, "fig2bc.csv"), lines)
    if report.aggregates:
        lines = ["T,method,mean,std"]
        lines += [
            f"{a.T},{a.method},{fmt(a.mean_error)},{fmt(a.std_error)}"
            for a in report.aggregates
        ]
        _write_lines(os.path.join(directory, "fig_error.csv"), lines)
        lines = ["T,method,mean,std"]
        lines += [
            f"{a.T},{a.method},{fmt(a.mean_runtime_s)},{fmt(a.std_runtime_s)}"
            for a in report.aggregates
        ]
        _write_lines(os.path.join(directory, "fig_runtime.csv"), lines)

    summary = {
        "optimality": [asdict(r) for r in report.optimality],
        "errors": [
            {
                "T": a.T,
                "method": a.method,
                "mean": a.mean_error,
                "std": a.std_error,
                "trials": a.trials,
            }
            for a in report.aggregates
        ],
    }
    with open(os.path.join(directory, "summary.json"), "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    with open(os.path.join(directory, "config.json"), "w", encoding="utf-8") as fh:
        json.dump(report.config.to_dict(), fh, indent=2)
        fh.write("\n")


def _write_lines(path, lines) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
