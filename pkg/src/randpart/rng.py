"""Seeded uniform random maps ``{0..n-1} -> {0..n-1}``.

Generator: xoshiro256** (Blackman & Vigna), 256-bit state.

Per-trial seeding: ``x = master_seed XOR stream_index`` is used as a
SplitMix64 state, and the next four SplitMix64 outputs (Stafford "Mix13"
finalizer) form the xoshiro state. Trial streams are therefore a pure
function of ``(master_seed, stream_index)``, independent of scheduling.
Because only the XOR enters, ``(s, i)`` and ``(s ^ d, i ^ d)`` share a
stream; keep one master seed per experiment.

Bounded integers: Lemire's multiply-shift. For bound ``n`` draw a 64-bit
``x``, form the 128-bit product ``m = x * n``; if ``m mod 2**64`` is below
``(2**64 - n) mod n`` redraw, otherwise return ``m >> 64``. This is exactly
uniform on ``[0, n)``.

A map sample consumes ``n`` bounded draws in element order; ``t`` maps are
drawn one after another from the same stream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from ._fallback import MASK64, splitmix64, trial_state
from .partition import (
    PartitionError,
    SetPartition,
    join_streaming,
    meet,
    partition_from_map,
)


@dataclass(frozen=True)
class SeedSpec:
    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "master_seed", int(self.master_seed) & MASK64)
        object.__setattr__(self, "stream_index", int(self.stream_index) & MASK64)


def parse_seed(text: str | int) -> int:
    """Decimal or ``0x`` hex 64-bit seed."""
    if isinstance(text, int):
        value = text
    else:
        text = text.strip().lower()
        value = int(text, 16) if text.startswith("0x") else int(text, 10)
    if not 0 <= value <= MASK64:
        raise ValueError(f"seed {text!r} is not a 64-bit unsigned integer")
    return value


def mix64(x: int) -> int:
    """SplitMix64 output for state ``x - gamma``, i.e. the finalizer of ``x``."""
    return splitmix64((x - 0x9E3779B97F4A7C15) & MASK64)[1]


class Xoshiro256:
    """xoshiro256** generator; state is a 4-word uint64 array."""

    def __init__(self, state):
        self.state = np.array([int(s) & MASK64 for s in state], dtype=np.uint64)
        if not self.state.any():
            raise ValueError("xoshiro state must not be all zero")

    def next_u64(self) -> int:
        out = np.empty(1, dtype=np.uint64)
        _kernels.fill_u64(self.state, out)
        return int(out[0])

    def u64_array(self, size: int) -> np.ndarray:
        out = np.empty(size, dtype=np.uint64)
        _kernels.fill_u64(self.state, out)
        return out

    def bounded(self, bound: int) -> int:
        return int(self.bounded_array(bound, 1)[0])

    def bounded_array(self, bound: int, size: int) -> np.ndarray:
        out = np.empty(size, dtype=np.int64)
        _kernels.fill_bounded(self.state, bound, out)
        return out


def derive_trial_rng(seed: SeedSpec) -> Xoshiro256:
    return Xoshiro256(trial_state(seed.master_seed, seed.stream_index))


@dataclass(frozen=True)
class MapSample:
    n: int
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.n:
            raise PartitionError("map length differs from n")
        if any(not 0 <= v < self.n for v in self.values):
            raise PartitionError(f"map values must lie in [0, {self.n})")


def sample_uniform_map(n: int, rng: Xoshiro256) -> MapSample:
    if n < 1:
        raise PartitionError("n must be positive")
    return MapSample(n, tuple(rng.bounded_array(n, n).tolist()))


def _check_t(t: int) -> None:
    if t < 1:
        raise PartitionError("t must be at least 1")


def inf_of_random_maps(n: int, t: int, rng: Xoshiro256) -> SetPartition:
    """Meet of ``t`` independent uniform map partitions."""
    _check_t(t)
    result = partition_from_map(sample_uniform_map(n, rng).values)
    for _ in range(t - 1):
        result = meet(result, partition_from_map(sample_uniform_map(n, rng).values))
    return result


def sup_of_random_maps(n: int, t: int, rng: Xoshiro256) -> SetPartition:
    """Join of ``t`` independent uniform map partitions."""
    _check_t(t)
    if n < 1:
        raise PartitionError("n must be positive")
    maps = rng.bounded_array(n, n * t).reshape(t, n)
    return join_streaming(n, maps)
