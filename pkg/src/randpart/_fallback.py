"""Pure-Python kernels.

Bit-for-bit twin of the compiled ``_core`` extension: same generator, same
bounded-integer method, same draw order, same union-find and relabelling.
Used automatically when the extension is not built, and by the test-suite as
the reference the compiled path is checked against.
"""

from __future__ import annotations

import numpy as np

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(state: int) -> tuple[int, int]:
    """Advance a SplitMix64 state; return ``(new_state, output)``."""
    state = (state + GOLDEN_GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def trial_state(master_seed: int, stream_index: int) -> list[int]:
    sm = (master_seed ^ stream_index) & MASK64
    s = []
    for _ in range(4):
        sm, out = splitmix64(sm)
        s.append(out)
    return s


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


def _next(s: list[int]) -> int:
    result = (_rotl((s[1] * 5) & MASK64, 7) * 9) & MASK64
    t = (s[1] << 17) & MASK64
    s[2] ^= s[0]
    s[3] ^= s[1]
    s[1] ^= s[2]
    s[0] ^= s[3]
    s[2] ^= t
    s[3] = _rotl(s[3], 45)
    return result


def _bounded(s: list[int], bound: int) -> int:
    # Lemire multiply-shift with rejection of the biased low window.
    m = _next(s) * bound
    low = m & MASK64
    if low < bound:
        threshold = ((1 << 64) - bound) % bound
        while low < threshold:
            m = _next(s) * bound
            low = m & MASK64
    return m >> 64


def fill_u64(state: np.ndarray, out: np.ndarray) -> None:
    s = [int(v) for v in state]
    for i in range(out.shape[0]):
        out[i] = _next(s)
    state[:] = s


def fill_bounded(state: np.ndarray, bound: int, out: np.ndarray) -> None:
    if bound < 1:
        raise ValueError("bound must be positive")
    s = [int(v) for v in state]
    for i in range(out.shape[0]):
        out[i] = _bounded(s, bound)
    state[:] = s


def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _union(parent: list[int], size: list[int], a: int, b: int) -> None:
    ra = _find(parent, a)
    rb = _find(parent, b)
    if ra == rb:
        return
    if size[ra] < size[rb]:
        ra, rb = rb, ra
    parent[rb] = ra
    size[ra] += size[rb]


def join_maps(n: int, maps: np.ndarray) -> np.ndarray:
    """Canonical labels of the join of the partitions induced by ``maps``."""
    parent = list(range(n))
    size = [1] * n
    rep = [-1] * n
    for row in maps:
        for v in range(n):
            rep[v] = -1
        for i in range(n):
            v = int(row[i])
            if rep[v] < 0:
                rep[v] = i
            else:
                _union(parent, size, i, rep[v])
    labels = np.empty(n, dtype=np.int64)
    ids = {}
    for i in range(n):
        r = _find(parent, i)
        labels[i] = ids.setdefault(r, len(ids))
    return labels


def sup_batch(n, t, master_seed, start, stop, out_blocks, out_largest, out_singletons):
    for trial in range(start, stop):
        s = trial_state(master_seed, trial)
        parent = list(range(n))
        size = [1] * n
        stamp = [-1] * n
        rep = [0] * n
        for m in range(t):
            for i in range(n):
                v = _bounded(s, n)
                if stamp[v] != m:
                    stamp[v] = m
                    rep[v] = i
                else:
                    _union(parent, size, i, rep[v])
        blocks = largest = singles = 0
        for i in range(n):
            if parent[i] == i:
                blocks += 1
                if size[i] > largest:
                    largest = size[i]
                if size[i] == 1:
                    singles += 1
        j = trial - start
        out_blocks[j] = blocks
        out_largest[j] = largest
        out_singletons[j] = singles


def inf_batch(n, t, master_seed, start, stop, out_blocks, out_pairs, out_largest):
    for trial in range(start, stop):
        s = trial_state(master_seed, trial)
        labels = [_bounded(s, n) for _ in range(n)]
        for _ in range(1, t):
            ids: dict[int, int] = {}
            for i in range(n):
                key = labels[i] * n + _bounded(s, n)
                labels[i] = ids.setdefault(key, len(ids))
        counts = [0] * n
        for lab in labels:
            counts[lab] += 1
        blocks = pairs = largest = 0
        for c in counts:
            if c:
                blocks += 1
                if c == 2:
                    pairs += 1
                if c > largest:
                    largest = c
        j = trial - start
        out_blocks[j] = blocks
        out_pairs[j] = pairs
        out_largest[j] = largest
