"""Stirling numbers of the second kind, exact and in log space."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

DEFAULT_NMAX = 2000
ENV_NMAX = "RANDPART_STIRLING_NMAX"
# Rows up to this size are kept as a full triangle; larger rows are computed
# on demand and only the most recent few are cached.
_TRIANGLE_ROWS = 512


class StirlingDomainError(ValueError):
    pass


class StirlingCapacityError(StirlingDomainError):
    pass


def default_nmax() -> int:
    value = os.environ.get(ENV_NMAX)
    return int(value) if value else DEFAULT_NMAX


class StirlingTable:
    """Exact triangle ``S(n, k)``, grown lazily by the recurrence
    ``S(n, k) = k S(n-1, k) + S(n-1, k-1)``."""

    def __init__(self, n_max: int | None = None):
        self.n_max = default_nmax() if n_max is None else n_max
        self.rows: list[list[int]] = [[1]]
        self._far_rows: dict[int, list[int]] = {}

    @staticmethod
    def _next_row(prev: list[int]) -> list[int]:
        n = len(prev)
        row = [0] * (n + 1)
        for k in range(1, n + 1):
            row[k] = (k * prev[k] if k < n else 0) + prev[k - 1]
        return row

    def row(self, n: int) -> list[int]:
        if n < 0:
            raise StirlingDomainError("n must be non-negative")
        if n > self.n_max:
            raise StirlingCapacityError(
                f"n = {n} exceeds the exact table cap {self.n_max}; use stirling_log"
            )
        while len(self.rows) <= min(n, _TRIANGLE_ROWS):
            self.rows.append(self._next_row(self.rows[-1]))
        if n < len(self.rows):
            return self.rows[n]
        if n in self._far_rows:
            return self._far_rows[n]
        start = max((m for m in self._far_rows if m < n), default=len(self.rows) - 1)
        row = self._far_rows.get(start) or self.rows[start]
        for _ in range(start, n):
            row = self._next_row(row)
        if len(self._far_rows) >= 4:
            self._far_rows.pop(min(self._far_rows))
        self._far_rows[n] = row
        return row

    def __call__(self, n: int, k: int) -> int:
        if not 0 <= k <= n:
            raise StirlingDomainError(f"need 0 <= k <= n, got n={n}, k={k}")
        return self.row(n)[k]


_table = StirlingTable()


def stirling_exact(n: int, k: int) -> int:
    return _table(n, k)


@dataclass(frozen=True)
class LogStirlingRow:
    """``log S(n, k)`` for ``k = 1..n`` (index ``k - 1``).

    ``error_bound`` is a bound on the absolute error of each log value
    (equivalently the relative error of ``S(n, k)``).
    """

    n: int
    log_values: np.ndarray
    error_bound: float


class LogStirlingTable:
    """Rows of ``log S(n, k)`` by log-sum-exp on the recurrence."""

    def __init__(self):
        # row n holds log S(n, k) for k = 0..n; log S(n, 0) = -inf for n >= 1
        self._rows: list[np.ndarray] = [np.array([0.0])]

    def _extend(self, n: int) -> None:
        while len(self._rows) <= n:
            prev = self._rows[-1]
            m = len(prev)
            row = np.full(m + 1, -np.inf)
            k = np.arange(1, m)
            # np.logaddexp adds the smaller term onto the larger one
            row[1:m] = np.logaddexp(np.log(k) + prev[1:m], prev[0 : m - 1])
            row[m] = 0.0
            self._rows.append(row)

    def value(self, n: int, k: int) -> float:
        self._extend(n)
        return float(self._rows[n][k])

    def row(self, n: int) -> LogStirlingRow:
        self._extend(n)
        values = self._rows[n][1:].copy()
        values.setflags(write=False)
        peak = float(np.max(np.abs(values))) if n else 0.0
        # each step adds at most a few ulps of the running magnitude
        bound = 4.0 * n * np.finfo(float).eps * max(1.0, peak)
        return LogStirlingRow(n=n, log_values=values, error_bound=bound)


_log_table = LogStirlingTable()


def stirling_log(n: int, k: int) -> float:
    """Natural log of ``S(n, k)`` for ``1 <= k <= n``."""
    if not 1 <= k <= n:
        raise StirlingDomainError(f"need 1 <= k <= n, got n={n}, k={k}")
    return _log_table.value(n, k)


def log_stirling_row(n: int) -> LogStirlingRow:
    if n < 1:
        raise StirlingDomainError("n must be positive")
    return _log_table.row(n)


def surjection_count(k: int, l: int) -> int:
    """Number of surjections ``[k] -> [l]``: ``S(k, l) * l!``."""
    if not 1 <= l <= k:
        raise StirlingDomainError(f"need 1 <= l <= k, got k={k}, l={l}")
    return stirling_exact(k, l) * math.factorial(l)


def check_log_concavity(n: int) -> bool:
    """``S(n,k)^2 >= S(n,k-1) S(n,k+1)`` for every ``2 <= k <= n-1``."""
    if n < 3:
        raise StirlingDomainError("log-concavity needs n >= 3")
    row = _table.row(n)
    return all(row[k] * row[k] >= row[k - 1] * row[k + 1] for k in range(2, n))


def check_ratio_bound(k: int, l: int) -> bool:
    """``S(k, l-1) / S(k, l) <= l (l-1) / (2 (k - l + 1))``, cross-multiplied."""
    if not 2 <= l <= k:
        raise StirlingDomainError(f"need 2 <= l <= k, got k={k}, l={l}")
    row = _table.row(k)
    return 2 * (k - l + 1) * row[l - 1] <= l * (l - 1) * row[l]


def check_rough_ratio_bound(k: int, l: int) -> bool:
    """``S(k, l-1) / S(k, l) <= k^2 / 2``."""
    if not 2 <= l <= k:
        raise StirlingDomainError(f"need 2 <= l <= k, got k={k}, l={l}")
    row = _table.row(k)
    return 2 * row[l - 1] <= k * k * row[l]


def check_ratio_monotone(n: int) -> bool:
    """``S(n, k-1) / S(n, k)`` is nondecreasing in ``k`` (exact rationals)."""
    row = _table.row(n)
    ratios = [Fraction(row[k - 1], row[k]) for k in range(2, n + 1)]
    return all(a <= b for a, b in zip(ratios, ratios[1:]))


@lru_cache(maxsize=None)
def bell_number(n: int) -> int:
    """Bell number via the Bell (Aitken) triangle, independent of Stirling rows."""
    row = [1]
    for _ in range(n):
        new = [row[-1]]
        for v in row:
            new.append(new[-1] + v)
        row = new
    return row[0]
