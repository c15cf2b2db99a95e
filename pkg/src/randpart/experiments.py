"""Monte Carlo harness for infima and suprema of random map partitions.

Trial ``i`` of a run draws its maps from the stream ``(master_seed, i)``, so a
run's output depends only on its configuration and seed, never on how trials
are spread over workers. Aggregates are built from exact integer sums after
an index-ordered merge.
"""

from __future__ import annotations

import itertools
import math
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Callable

import numpy as np

from . import _kernels
from .asymptotics import exact_E_M, exact_inf_min_prob, exact_var_M
from .partition import SetPartition, block_stats, join, meet, partition_from_map
from .rng import mix64

KINDS = ("inf-min", "two-blocks", "sup-max", "singletons", "largest-block", "threshold-scan")
RECORD_KINDS = ("two-blocks", "singletons", "largest-block")
MIN_TRIALS_FOR_CI = 100
EXHAUSTIVE_LIMIT = 10**8
QUANTILES = (0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99)


class ConfigError(ValueError):
    pass


class CapacityError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    """One Monte Carlo run. ``t_max`` is used by threshold-scan only, which
    scans ``t..t_max`` inclusive. ``thresholds`` are largest-block cut-offs:
    values below 1 are fractions of ``n``, others absolute block sizes."""

    kind: str
    n: int
    t: int
    trials: int
    master_seed: int = 0
    workers: int = 1
    t_max: int | None = None
    thresholds: tuple[float, ...] = ()
    output_format: str = "csv"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        if self.n < 1:
            raise ConfigError("n must be >= 1")
        if self.t < 1:
            raise ConfigError("t must be >= 1")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.kind == "two-blocks" and self.t != 2:
            raise ConfigError("two-blocks is defined for t = 2")
        if self.kind == "threshold-scan":
            if self.t_max is None or self.t_max < self.t:
                raise ConfigError("threshold-scan needs t_max >= t")
        if self.output_format not in ("csv", "json"):
            raise ConfigError("output_format must be csv or json")


@dataclass
class EstimateResult:
    kind: str
    n: int
    t: int
    trials: int
    seed: int
    success: int
    estimate: float
    stderr: float
    ci_lo: float | None
    ci_hi: float | None
    elapsed_ms: float | None = None
    records: dict[str, np.ndarray] = field(default_factory=dict)
    extra: dict[str, Any] = field(default_factory=dict)


def default_threshold(n: int, t: int) -> int:
    """Largest-block cut-off used when none is configured."""
    if t <= 2:
        value = n**0.8
    elif t == 3:
        value = 0.01 * n
    elif t == 4:
        value = n / 3
    else:
        value = n * (1.0 - 0.5 * math.exp(3 - t))
    return _ceil(value)


def _ceil(value: float) -> int:
    # n**0.8 and similar land a few ulps above an integer; don't round those up
    return max(1, math.ceil(value - 1e-9 * max(1.0, abs(value))))


def resolve_thresholds(config: ExperimentConfig) -> list[int]:
    if not config.thresholds:
        return [default_threshold(config.n, config.t)]
    out = []
    for v in config.thresholds:
        out.append(_ceil(v * config.n if v < 1 else v))
    return out


def _proportion(success: int, trials: int) -> tuple[float, float]:
    p = success / trials
    return p, math.sqrt(p * (1.0 - p) / trials)


def _mean_stats(total: int, total_sq: int, trials: int) -> tuple[float, float, float]:
    mean = total / trials
    if trials < 2:
        return mean, 0.0, 0.0
    var = float(Fraction(total_sq * trials - total * total, trials * (trials - 1)))
    return mean, math.sqrt(var / trials), var


def _ci(estimate: float, stderr: float, trials: int) -> tuple[float | None, float | None]:
    if trials < MIN_TRIALS_FOR_CI:
        return None, None
    return estimate - 1.96 * stderr, estimate + 1.96 * stderr


def _chunks(trials: int, workers: int) -> list[tuple[int, int]]:
    size = max(1, min(1024, math.ceil(trials / (4 * workers))))
    return [(a, min(a + size, trials)) for a in range(0, trials, size)]


def _run_kernel(
    kernel: Callable,
    n: int,
    t: int,
    seed: int,
    trials: int,
    workers: int,
    reduce: Callable[[np.ndarray, np.ndarray, np.ndarray], Any],
) -> list[Any]:
    def task(bounds: tuple[int, int]):
        a, b = bounds
        cols = [np.zeros(b - a, dtype=np.int64) for _ in range(3)]
        kernel(n, t, seed, a, b, *cols)
        return reduce(*cols)

    chunks = _chunks(trials, workers)
    if workers == 1:
        return [task(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(task, chunks))


def _finish(config: ExperimentConfig, success: int, estimate: float, stderr: float, start: float, **kw) -> EstimateResult:
    lo, hi = _ci(estimate, stderr, config.trials)
    return EstimateResult(
        kind=config.kind,
        n=config.n,
        t=config.t,
        trials=config.trials,
        seed=config.master_seed,
        success=success,
        estimate=estimate,
        stderr=stderr,
        ci_lo=lo,
        ci_hi=hi,
        elapsed_ms=(time.perf_counter() - start) * 1000.0,
        **kw,
    )


def _expect(config: ExperimentConfig, *kinds: str) -> None:
    if config.kind not in kinds:
        raise ConfigError(f"expected kind in {kinds}, got {config.kind!r}")


def run_inf_min(config: ExperimentConfig) -> EstimateResult:
    """Fraction of trials whose infimum is p_min."""
    _expect(config, "inf-min")
    start = time.perf_counter()
    n = config.n
    parts = _run_kernel(
        _kernels.inf_batch, n, config.t, config.master_seed, config.trials, config.workers,
        lambda blocks, pairs, largest: int(np.count_nonzero(blocks == n)),
    )
    success = sum(parts)
    p, se = _proportion(success, config.trials)
    return _finish(config, success, p, se, start,
                   extra={"exact": exact_inf_min_prob(n, config.t)})


def _factorial_moment(values: np.ndarray, k: int) -> tuple[float, float]:
    terms = [math.comb(int(v), k) for v in values]
    total = sum(terms)
    total_sq = sum(x * x for x in terms)
    mean, se, _ = _mean_stats(total, total_sq, len(terms))
    return mean, se


def run_two_block_poisson(config: ExperimentConfig) -> EstimateResult:
    """Count two-element blocks ``|A|`` of the infimum of two map partitions."""
    _expect(config, "two-blocks")
    start = time.perf_counter()
    parts = _run_kernel(
        _kernels.inf_batch, config.n, 2, config.master_seed, config.trials, config.workers,
        lambda blocks, pairs, largest: (pairs.copy(), blocks.copy()),
    )
    pairs = np.concatenate([p for p, _ in parts])
    blocks = np.concatenate([b for _, b in parts])
    success = int(np.count_nonzero(pairs == 0))
    p, se = _proportion(success, config.trials)
    m1, se1 = _factorial_moment(pairs, 1)
    m2, se2 = _factorial_moment(pairs, 2)
    hist = Counter(int(v) for v in pairs)
    extra = {
        "p_zero": p,
        "factorial_moment_1": m1,
        "factorial_moment_1_stderr": se1,
        "factorial_moment_2": m2,
        "factorial_moment_2_stderr": se2,
        "histogram": {str(k): hist[k] for k in sorted(hist)},
    }
    return _finish(config, success, p, se, start,
                   records={"pairs": pairs, "num_blocks": blocks}, extra=extra)


def run_sup_max(config: ExperimentConfig) -> EstimateResult:
    """Fraction of trials whose supremum is p_max."""
    _expect(config, "sup-max")
    start = time.perf_counter()
    parts = _run_kernel(
        _kernels.sup_batch, config.n, config.t, config.master_seed, config.trials, config.workers,
        lambda blocks, largest, singles: int(np.count_nonzero(blocks == 1)),
    )
    success = sum(parts)
    p, se = _proportion(success, config.trials)
    return _finish(config, success, p, se, start)


def _sup_records(config: ExperimentConfig) -> dict[str, np.ndarray]:
    parts = _run_kernel(
        _kernels.sup_batch, config.n, config.t, config.master_seed, config.trials, config.workers,
        lambda blocks, largest, singles: (blocks.copy(), largest.copy(), singles.copy()),
    )
    return {
        "num_blocks": np.concatenate([p[0] for p in parts]),
        "largest": np.concatenate([p[1] for p in parts]),
        "singletons": np.concatenate([p[2] for p in parts]),
    }


def run_singletons(config: ExperimentConfig) -> EstimateResult:
    """Number ``M`` of one-element blocks of the supremum; estimate is E[M]."""
    _expect(config, "singletons")
    start = time.perf_counter()
    records = _sup_records(config)
    m = records["singletons"]
    total = int(m.sum())
    total_sq = sum(int(v) * int(v) for v in m)
    mean, se, var = _mean_stats(total, total_sq, config.trials)
    extra = {
        "sample_variance": var,
        "exact_mean": exact_E_M(config.n, config.t),
        "exact_variance": exact_var_M(config.n, config.t),
    }
    return _finish(config, total, mean, se, start, records=records, extra=extra)


def run_largest_block(config: ExperimentConfig) -> EstimateResult:
    """Largest block ``L`` of the supremum; estimate is P(L >= first threshold)."""
    _expect(config, "largest-block")
    start = time.perf_counter()
    records = _sup_records(config)
    largest = records["largest"]
    thresholds = resolve_thresholds(config)
    counts = {th: int(np.count_nonzero(largest >= th)) for th in thresholds}
    success = counts[thresholds[0]]
    p, se = _proportion(success, config.trials)
    frac = largest / config.n
    extra = {
        "thresholds": {str(th): counts[th] / config.trials for th in thresholds},
        "quantiles": {str(q): float(np.quantile(frac, q)) for q in QUANTILES},
        "mean_L_over_n": float(Fraction(int(largest.sum()), config.trials * config.n)),
    }
    return _finish(config, success, p, se, start, records=records, extra=extra)


def scan_seed(master_seed: int, t: int) -> int:
    """Independent master seed for the ``t``-th row of a threshold scan."""
    return mix64(master_seed ^ mix64(t))


@dataclass
class ScanResult:
    rows: list[EstimateResult]
    monotone: bool
    violations: list[tuple[int, int]]
    elapsed_ms: float | None = None


def run_threshold_scan(config: ExperimentConfig) -> ScanResult:
    """P(sup = p_max) for every ``t`` in ``[t, t_max]``, one seed stream per t.

    A drop between consecutive rows counts as a violation only when it exceeds
    twice the combined standard error.
    """
    _expect(config, "threshold-scan")
    start = time.perf_counter()
    rows = []
    for t in range(config.t, config.t_max + 1):
        sub = replace(config, kind="sup-max", t=t, t_max=None,
                      master_seed=scan_seed(config.master_seed, t))
        row = run_sup_max(sub)
        row.kind = "threshold-scan"
        row.seed = config.master_seed
        rows.append(row)
    violations = []
    for a, b in zip(rows, rows[1:]):
        noise = 2.0 * math.hypot(a.stderr, b.stderr)
        if b.estimate < a.estimate - noise:
            violations.append((a.t, b.t))
    return ScanResult(rows, not violations, violations,
                      (time.perf_counter() - start) * 1000.0)


RUNNERS = {
    "inf-min": run_inf_min,
    "two-blocks": run_two_block_poisson,
    "sup-max": run_sup_max,
    "singletons": run_singletons,
    "largest-block": run_largest_block,
    "threshold-scan": run_threshold_scan,
}


def run(config: ExperimentConfig):
    return RUNNERS[config.kind](config)


# exhaustive ground truth ------------------------------------------------------


def _trial_statistic(kind: str, n: int, t: int, threshold: int | None) -> Callable[[SetPartition], int]:
    if kind == "inf-min":
        return lambda p: int(p.num_blocks == n)
    if kind == "two-blocks":
        return lambda p: int(block_stats(p).size_histogram.get(2, 0) == 0)
    if kind == "sup-max":
        return lambda p: int(p.num_blocks == 1)
    if kind == "singletons":
        return lambda p: block_stats(p).singletons
    if kind == "largest-block":
        th = threshold if threshold is not None else default_threshold(n, t)
        return lambda p: int(block_stats(p).largest_block >= th)
    raise ConfigError(f"no exhaustive oracle for kind {kind!r}")


def exhaustive_counts(kind: str, n: int, t: int, threshold: int | None = None) -> tuple[int, int]:
    """``(sum of the trial statistic over all t-tuples of maps, n^(t n))``."""
    total = n ** (t * n)
    if total > EXHAUSTIVE_LIMIT:
        raise CapacityError(f"n^(t n) = {total} exceeds {EXHAUSTIVE_LIMIT}")
    if n < 1 or t < 1:
        raise ConfigError("need n >= 1, t >= 1")
    combine = meet if kind in ("inf-min", "two-blocks") else join
    stat = _trial_statistic(kind, n, t, threshold)
    # maps grouped by induced partition; tuples weighted by multiplicity
    weights = Counter(partition_from_map(f) for f in itertools.product(range(n), repeat=n))
    acc = 0
    for combo in itertools.product(weights.items(), repeat=t):
        part = combo[0][0]
        weight = combo[0][1]
        for q, w in combo[1:]:
            part = combine(part, q)
            weight *= w
        acc += weight * stat(part)
    return acc, total


def run_exhaustive(kind: str, n: int, t: int, threshold: int | None = None) -> Fraction:
    """Exact probability (or mean, for singletons) over every t-tuple of maps."""
    acc, total = exhaustive_counts(kind, n, t, threshold)
    return Fraction(acc, total)


def exhaustive_result(config: ExperimentConfig) -> EstimateResult:
    """``run_exhaustive`` packaged like a Monte Carlo result (zero stderr)."""
    start = time.perf_counter()
    threshold = resolve_thresholds(config)[0] if config.kind == "largest-block" else None
    acc, total = exhaustive_counts(config.kind, config.n, config.t, threshold)
    res = _finish(replace(config, trials=total), acc, acc / total, 0.0, start)
    res.extra["exact"] = str(Fraction(acc, total))
    res.extra["exhaustive"] = True
    return res
