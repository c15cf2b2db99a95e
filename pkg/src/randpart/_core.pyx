# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: generator, bounded sampling, and per-trial inf/sup loops.

Must stay bit-identical to ``_fallback``; the test-suite compares the two.
All batch kernels release the GIL so a thread pool runs them in parallel.
"""

from libc.stdint cimport uint64_t, int64_t, int32_t, uint32_t
from libc.stdlib cimport malloc, free
from libc.string cimport memset

import numpy as np

cdef extern from *:
    """
    static inline uint64_t rp_mulhi(uint64_t a, uint64_t b, uint64_t *lo) {
        unsigned __int128 m = (unsigned __int128)a * b;
        *lo = (uint64_t)m;
        return (uint64_t)(m >> 64);
    }
    """
    uint64_t rp_mulhi(uint64_t a, uint64_t b, uint64_t *lo) nogil

cdef uint64_t GOLDEN_GAMMA = 0x9E3779B97F4A7C15ULL


cdef inline uint64_t _splitmix(uint64_t *state) noexcept nogil:
    state[0] += GOLDEN_GAMMA
    cdef uint64_t z = state[0]
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline void _seed(uint64_t *s, uint64_t master, uint64_t index) noexcept nogil:
    cdef uint64_t sm = master ^ index
    cdef int i
    for i in range(4):
        s[i] = _splitmix(&sm)


cdef inline uint64_t _rotl(uint64_t x, int k) noexcept nogil:
    return (x << k) | (x >> (64 - k))


cdef inline uint64_t _next(uint64_t *s) noexcept nogil:
    cdef uint64_t result = _rotl(s[1] * 5, 7) * 9
    cdef uint64_t t = s[1] << 17
    s[2] ^= s[0]
    s[3] ^= s[1]
    s[1] ^= s[2]
    s[0] ^= s[3]
    s[2] ^= t
    s[3] = _rotl(s[3], 45)
    return result


cdef inline uint64_t _bounded(uint64_t *s, uint64_t bound) noexcept nogil:
    cdef uint64_t low
    cdef uint64_t hi = rp_mulhi(_next(s), bound, &low)
    cdef uint64_t threshold
    if low < bound:
        threshold = (0 - bound) % bound
        while low < threshold:
            hi = rp_mulhi(_next(s), bound, &low)
    return hi


cdef inline int32_t _find(int32_t *parent, int32_t x) noexcept nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


cdef inline void _union(int32_t *parent, int32_t *size, int32_t a, int32_t b) noexcept nogil:
    cdef int32_t ra = _find(parent, a)
    cdef int32_t rb = _find(parent, b)
    cdef int32_t tmp
    if ra == rb:
        return
    if size[ra] < size[rb]:
        tmp = ra
        ra = rb
        rb = tmp
    parent[rb] = ra
    size[ra] += size[rb]


def _check_n(n):
    if n < 1 or n >= 2 ** 31:
        raise ValueError(f"n must lie in [1, 2**31), got {n}")


def fill_u64(uint64_t[::1] state, uint64_t[::1] out):
    cdef Py_ssize_t i
    cdef uint64_t s[4]
    for i in range(4):
        s[i] = state[i]
    with nogil:
        for i in range(out.shape[0]):
            out[i] = _next(s)
    for i in range(4):
        state[i] = s[i]


def fill_bounded(uint64_t[::1] state, uint64_t bound, int64_t[::1] out):
    if bound < 1:
        raise ValueError("bound must be positive")
    cdef Py_ssize_t i
    cdef uint64_t s[4]
    for i in range(4):
        s[i] = state[i]
    with nogil:
        for i in range(out.shape[0]):
            out[i] = <int64_t>_bounded(s, bound)
    for i in range(4):
        state[i] = s[i]


def join_maps(Py_ssize_t n, int64_t[:, ::1] maps):
    _check_n(n)
    cdef Py_ssize_t t = maps.shape[0]
    cdef Py_ssize_t m, i
    cdef int32_t v, r
    cdef int32_t next_id = 0
    labels = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] lab = labels
    cdef int32_t *parent = <int32_t *>malloc(n * sizeof(int32_t))
    cdef int32_t *size = <int32_t *>malloc(n * sizeof(int32_t))
    cdef int32_t *rep = <int32_t *>malloc(n * sizeof(int32_t))
    if parent == NULL or size == NULL or rep == NULL:
        free(parent); free(size); free(rep)
        raise MemoryError()
    try:
        with nogil:
            for i in range(n):
                parent[i] = <int32_t>i
                size[i] = 1
            for m in range(t):
                for i in range(n):
                    rep[i] = -1
                for i in range(n):
                    v = <int32_t>maps[m, i]
                    if rep[v] < 0:
                        rep[v] = <int32_t>i
                    else:
                        _union(parent, size, <int32_t>i, rep[v])
            # rep reused as root -> canonical id
            for i in range(n):
                rep[i] = -1
            for i in range(n):
                r = _find(parent, <int32_t>i)
                if rep[r] < 0:
                    rep[r] = next_id
                    next_id += 1
                lab[i] = rep[r]
    finally:
        free(parent); free(size); free(rep)
    return labels


def sup_batch(Py_ssize_t n, Py_ssize_t t, uint64_t master_seed, uint64_t start,
              uint64_t stop, int64_t[::1] out_blocks, int64_t[::1] out_largest,
              int64_t[::1] out_singletons):
    _check_n(n)
    if out_blocks.shape[0] < <Py_ssize_t>(stop - start):
        raise ValueError("output buffers too short")
    cdef uint64_t trial
    cdef uint64_t s[4]
    cdef Py_ssize_t m, i, j
    cdef int32_t v
    cdef int64_t blocks, largest, singles
    cdef int32_t *parent = <int32_t *>malloc(n * sizeof(int32_t))
    cdef int32_t *size = <int32_t *>malloc(n * sizeof(int32_t))
    cdef int32_t *stamp = <int32_t *>malloc(n * sizeof(int32_t))
    cdef int32_t *rep = <int32_t *>malloc(n * sizeof(int32_t))
    if parent == NULL or size == NULL or stamp == NULL or rep == NULL:
        free(parent); free(size); free(stamp); free(rep)
        raise MemoryError()
    try:
        with nogil:
            trial = start
            while trial < stop:
                _seed(s, master_seed, trial)
                for i in range(n):
                    parent[i] = <int32_t>i
                    size[i] = 1
                    stamp[i] = -1
                for m in range(t):
                    for i in range(n):
                        v = <int32_t>_bounded(s, <uint64_t>n)
                        if stamp[v] != m:
                            stamp[v] = <int32_t>m
                            rep[v] = <int32_t>i
                        else:
                            _union(parent, size, <int32_t>i, rep[v])
                blocks = 0
                largest = 0
                singles = 0
                for i in range(n):
                    if parent[i] == i:
                        blocks += 1
                        if size[i] > largest:
                            largest = size[i]
                        if size[i] == 1:
                            singles += 1
                j = <Py_ssize_t>(trial - start)
                out_blocks[j] = blocks
                out_largest[j] = largest
                out_singletons[j] = singles
                trial += 1
    finally:
        free(parent); free(size); free(stamp); free(rep)


def inf_batch(Py_ssize_t n, Py_ssize_t t, uint64_t master_seed, uint64_t start,
              uint64_t stop, int64_t[::1] out_blocks, int64_t[::1] out_pairs,
              int64_t[::1] out_largest):
    _check_n(n)
    if out_blocks.shape[0] < <Py_ssize_t>(stop - start):
        raise ValueError("output buffers too short")
    cdef int bits = 1
    while ((<Py_ssize_t>1) << bits) < 2 * n:
        bits += 1
    cdef Py_ssize_t cap = (<Py_ssize_t>1) << bits
    cdef uint64_t mask = <uint64_t>(cap - 1)
    cdef uint64_t trial, key, h
    cdef uint64_t s[4]
    cdef uint32_t gen = 0
    cdef Py_ssize_t m, i, j
    cdef int32_t next_id, c
    cdef int64_t blocks, pairs, largest
    cdef int32_t *labels = <int32_t *>malloc(n * sizeof(int32_t))
    cdef int32_t *counts = <int32_t *>malloc(n * sizeof(int32_t))
    cdef uint64_t *keys = <uint64_t *>malloc(cap * sizeof(uint64_t))
    cdef int32_t *vals = <int32_t *>malloc(cap * sizeof(int32_t))
    cdef uint32_t *gens = <uint32_t *>malloc(cap * sizeof(uint32_t))
    if labels == NULL or counts == NULL or keys == NULL or vals == NULL or gens == NULL:
        free(labels); free(counts); free(keys); free(vals); free(gens)
        raise MemoryError()
    memset(gens, 0, cap * sizeof(uint32_t))
    try:
        with nogil:
            trial = start
            while trial < stop:
                _seed(s, master_seed, trial)
                for i in range(n):
                    labels[i] = <int32_t>_bounded(s, <uint64_t>n)
                for m in range(1, t):
                    gen += 1
                    if gen == 0:
                        memset(gens, 0, cap * sizeof(uint32_t))
                        gen = 1
                    next_id = 0
                    for i in range(n):
                        key = <uint64_t>labels[i] * <uint64_t>n + _bounded(s, <uint64_t>n)
                        h = (key * GOLDEN_GAMMA) >> (64 - bits)
                        while True:
                            if gens[h] != gen:
                                gens[h] = gen
                                keys[h] = key
                                vals[h] = next_id
                                labels[i] = next_id
                                next_id += 1
                                break
                            if keys[h] == key:
                                labels[i] = vals[h]
                                break
                            h = (h + 1) & mask
                memset(counts, 0, n * sizeof(int32_t))
                for i in range(n):
                    counts[labels[i]] += 1
                blocks = 0
                pairs = 0
                largest = 0
                for i in range(n):
                    c = counts[i]
                    if c:
                        blocks += 1
                        if c == 2:
                            pairs += 1
                        if c > largest:
                            largest = c
                j = <Py_ssize_t>(trial - start)
                out_blocks[j] = blocks
                out_pairs[j] = pairs
                out_largest[j] = largest
                trial += 1
    finally:
        free(labels); free(counts); free(keys); free(vals); free(gens)
