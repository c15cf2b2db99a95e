"""Set partitions of ``{0, ..., n-1}`` and their lattice operations.

Elements are 0-indexed: element ``i`` here is element ``i + 1`` of the
1-indexed ground set ``[n] = {1, ..., n}``. A partition is stored as a
canonical label array in which block ids appear in first-occurrence order, so
two partitions are equal exactly when their label tuples are equal.
"""

from __future__ import annotations

import itertools
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import _kernels

KFREE_MAX_N = 65536


class PartitionError(ValueError):
    """Invalid partition, map, or parameter."""


def _canonical(labels: Iterable[int]) -> tuple[int, ...]:
    ids: dict[int, int] = {}
    return tuple(ids.setdefault(lab, len(ids)) for lab in labels)


@dataclass(frozen=True)
class SetPartition:
    """A partition of ``{0, ..., n-1}`` in canonical first-occurrence form."""

    labels: tuple[int, ...]
    num_blocks: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        labels = tuple(int(x) for x in self.labels)
        if not labels:
            raise PartitionError("a partition needs n >= 1")
        top = -1
        for lab in labels:
            if lab < 0 or lab > top + 1:
                raise PartitionError(f"labels are not canonical: {labels[:20]}")
            top = max(top, lab)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "num_blocks", top + 1)

    @classmethod
    def from_labels(cls, labels: Iterable[int]) -> "SetPartition":
        """Build from any labelling; ids are renumbered canonically."""
        return cls(_canonical(int(x) for x in labels))

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "SetPartition":
        labels = [-1] * n
        for b, block in enumerate(blocks):
            for i in block:
                if not 0 <= i < n or labels[i] != -1:
                    raise PartitionError(f"element {i} repeated or out of range")
                labels[i] = b
        if -1 in labels:
            raise PartitionError("blocks do not cover the ground set")
        return cls.from_labels(labels)

    @classmethod
    def parse(cls, text: str) -> "SetPartition":
        """Parse the ``"0,0,1"`` text form (labels need not be canonical)."""
        try:
            return cls.from_labels(int(tok) for tok in text.split(","))
        except ValueError as exc:
            raise PartitionError(f"cannot parse partition {text!r}: {exc}") from None

    @property
    def n(self) -> int:
        return len(self.labels)

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_blocks)]
        for i, lab in enumerate(self.labels):
            out[lab].append(i)
        return out

    def block_sizes(self) -> list[int]:
        sizes = [0] * self.num_blocks
        for lab in self.labels:
            sizes[lab] += 1
        return sizes

    def __str__(self) -> str:
        return ",".join(map(str, self.labels))


def p_min(n: int) -> SetPartition:
    return SetPartition(tuple(range(n)))


def p_max(n: int) -> SetPartition:
    return SetPartition((0,) * n)


def _check_same_n(p: SetPartition, q: SetPartition) -> None:
    if p.n != q.n:
        raise PartitionError(f"size mismatch: {p.n} != {q.n}")


def _check_map(n: int, f: Sequence[int]) -> None:
    if len(f) != n:
        raise PartitionError(f"map has length {len(f)}, expected {n}")
    for v in f:
        if not 0 <= v < n:
            raise PartitionError(f"map value {v} outside [0, {n})")


def partition_from_map(f: Sequence[int]) -> SetPartition:
    """Partition into the non-empty preimages of ``f``."""
    f = [int(v) for v in f]
    _check_map(len(f), f)
    return SetPartition(_canonical(f))


def meet(p: SetPartition, q: SetPartition) -> SetPartition:
    """Coarsest common refinement: blocks are the non-empty intersections."""
    _check_same_n(p, q)
    return SetPartition(_canonical(zip(p.labels, q.labels)))


class UnionFind:
    """Disjoint-set forest with union by size and path halving."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def labels(self) -> tuple[int, ...]:
        return _canonical(self.find(i) for i in range(len(self.parent)))


def join(p: SetPartition, q: SetPartition) -> SetPartition:
    """Finest common coarsening, via union-find over the blocks of both."""
    _check_same_n(p, q)
    uf = UnionFind(p.n)
    for part in (p, q):
        first: dict[int, int] = {}
        for i, lab in enumerate(part.labels):
            j = first.setdefault(lab, i)
            if j != i:
                uf.union(i, j)
    return SetPartition(uf.labels())


def join_streaming(n: int, maps: Sequence[Sequence[int]]) -> SetPartition:
    """Join of the partitions induced by ``maps`` without building any of them.

    One union-find pass per map, O(n) memory.
    """
    if n < 1:
        raise PartitionError("n must be positive")
    arr = np.ascontiguousarray(np.asarray(maps, dtype=np.int64).reshape(-1, n))
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        raise PartitionError(f"map values must lie in [0, {n})")
    if arr.shape[0] == 0:
        return p_min(n)
    return SetPartition(tuple(_kernels.join_maps(n, arr).tolist()))


def refines(p: SetPartition, q: SetPartition) -> bool:
    """True iff every block of ``p`` lies inside a block of ``q``."""
    _check_same_n(p, q)
    image: dict[int, int] = {}
    for a, b in zip(p.labels, q.labels):
        if image.setdefault(a, b) != b:
            return False
    return True


@dataclass(frozen=True)
class BlockStats:
    num_blocks: int
    largest_block: int
    singletons: int
    size_histogram: dict[int, int]


def block_stats(p: SetPartition) -> BlockStats:
    hist = Counter(p.block_sizes())
    return BlockStats(
        num_blocks=p.num_blocks,
        largest_block=max(hist),
        singletons=hist.get(1, 0),
        size_histogram=dict(sorted(hist.items())),
    )


def _reachable_sums(sizes: Iterable[int], n: int) -> int:
    # bit s set <=> some sub-multiset of sizes sums to s
    reach = 1
    limit = (1 << (n + 1)) - 1
    for size, mult in Counter(sizes).items():
        chunk = 1
        while mult > 0:
            take = min(chunk, mult)
            reach |= (reach << (size * take)) & limit
            mult -= take
            chunk <<= 1
    return reach


def kfree_spectrum(p: SetPartition, max_n: int = KFREE_MAX_N) -> frozenset[int]:
    """All ``s`` in ``[1, n]`` that are sizes of unions of distinct blocks."""
    if p.n > max_n:
        raise PartitionError(f"n = {p.n} exceeds the subset-sum guard {max_n}")
    reach = _reachable_sums(p.block_sizes(), p.n)
    return frozenset(s for s in range(1, p.n + 1) if reach >> s & 1)


def is_k_free(p: SetPartition, k: int, max_n: int = KFREE_MAX_N) -> bool:
    """True iff no coarsening of ``p`` has a block of size exactly ``k``."""
    if not 0 < k < p.n:
        raise PartitionError(f"k must satisfy 0 < k < n = {p.n}, got {k}")
    if p.n > max_n:
        raise PartitionError(f"n = {p.n} exceeds the subset-sum guard {max_n}")
    return not (_reachable_sums(p.block_sizes(), p.n) >> k & 1)


NOT_APPLICABLE = "n/a"


@dataclass(frozen=True)
class KFreeReport:
    """Outcome of each k-free property: ``"pass"``, ``"fail"`` or ``"n/a"``.

    - ``interval_block``: k-free on [a, b] => a block of size >= b - a.
    - ``doubled_interval_block``: also 2a <= b => a block of size >= b.
    - ``singletons_block``: h singletons and b-free with b > h => a block >= h.
    - ``big_blocks_cover``: k-free on [a, b], 2a <= b => blocks of size >= a
      cover at least n - a elements.
    """

    interval_block: str
    doubled_interval_block: str
    singletons_block: str
    big_blocks_cover: str

    def failures(self) -> list[str]:
        return [k for k, v in self.__dict__.items() if v == "fail"]

    def as_dict(self) -> dict[str, str]:
        return dict(self.__dict__)


def _verdict(hypothesis: bool, conclusion: bool) -> str:
    if not hypothesis:
        return NOT_APPLICABLE
    return "pass" if conclusion else "fail"


@lru_cache(maxsize=65536)
def _kfree_report(sizes: tuple[int, ...], a: int, b: int) -> KFreeReport:
    n = sum(sizes)
    reach = _reachable_sums(sizes, n)
    largest = max(sizes)
    singles = sizes.count(1)
    free_on_interval = all(not (reach >> k & 1) for k in range(a, b + 1))
    doubled = free_on_interval and 2 * a <= b
    big_cover = sum(s for s in sizes if s >= a)
    return KFreeReport(
        interval_block=_verdict(free_on_interval, largest >= b - a),
        doubled_interval_block=_verdict(doubled, largest >= b),
        singletons_block=_verdict(not (reach >> b & 1) and b > singles, largest >= singles),
        big_blocks_cover=_verdict(doubled, big_cover >= n - a),
    )


def verify_kfree_properties(p: SetPartition, a: int, b: int) -> KFreeReport:
    """Check the four k-free properties on ``p`` for the window ``[a, b]``."""
    if not 1 <= a < b < p.n:
        raise PartitionError(f"need 1 <= a < b < n = {p.n}, got a={a}, b={b}")
    return _kfree_report(tuple(sorted(p.block_sizes())), a, b)


def graph_components_oracle(n: int, maps: Sequence[Sequence[int]]) -> SetPartition:
    """Connected components of the multigraph joining ``i, j`` when some map
    sends them to the same point. Independent of the union-find path."""
    adjacency: list[set[int]] = [set() for _ in range(n)]
    for f in maps:
        f = [int(v) for v in f]
        _check_map(n, f)
        fibres: dict[int, list[int]] = {}
        for i, v in enumerate(f):
            fibres.setdefault(v, []).append(i)
        for fibre in fibres.values():
            for i, j in itertools.combinations(fibre, 2):
                adjacency[i].add(j)
                adjacency[j].add(i)
    comp = [-1] * n
    for root in range(n):
        if comp[root] >= 0:
            continue
        comp[root] = root
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in adjacency[u]:
                if comp[w] < 0:
                    comp[w] = root
                    queue.append(w)
    return SetPartition.from_labels(comp)


def all_partitions(n: int) -> Iterator[SetPartition]:
    """Every partition of ``{0, ..., n-1}``, as restricted growth strings."""
    if n < 1:
        return
    labels = [0] * n

    def rec(i: int, top: int) -> Iterator[SetPartition]:
        if i == n:
            yield SetPartition(tuple(labels))
            return
        for lab in range(top + 2):
            labels[i] = lab
            yield from rec(i + 1, max(top, lab))

    yield from rec(1, 0)
