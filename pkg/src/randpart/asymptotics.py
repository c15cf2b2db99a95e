"""Closed-form quantities: the gamma equation, g(c), entropy, the t=4 and t=3
exponent curves, the bound functions f_k(l) and s_t(k), exact moments of the
singleton count M, and the exact probability that an infimum is p_min.

Natural logarithms throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .stirling import stirling_log

C_MIN = 1e-6
C_MAX = 1.0 - 1e-6
TOL = 1e-12
MAX_ITER = 200
LOG2 = math.log(2.0)


class DomainError(ValueError):
    pass


def _clamp_check(c: float) -> None:
    if not C_MIN <= c <= C_MAX:
        raise DomainError(f"c = {c!r} outside [{C_MIN}, {C_MAX}]")


def _gamma_map(g: float) -> float:
    # g * (1 - exp(-1/g)), increasing from 0 to 1 on (0, inf)
    return g * -math.expm1(-1.0 / g)


@dataclass(frozen=True)
class GammaSolve:
    c: float
    gamma: float
    residual: float
    iterations: int


def solve_gamma(c: float) -> GammaSolve:
    """Root of ``gamma (1 - e^{-1/gamma}) = c`` by bisection."""
    _clamp_check(c)
    # gamma(1 - e^{-1/gamma}) < gamma, so the root exceeds c
    lo, hi = c, 1.0
    while _gamma_map(hi) < c:
        hi *= 2.0
    it = 0
    while it < MAX_ITER:
        it += 1
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if _gamma_map(mid) < c:
            lo = mid
        else:
            hi = mid
    gamma = lo if abs(_gamma_map(lo) - c) <= abs(_gamma_map(hi) - c) else hi
    return GammaSolve(c=c, gamma=gamma, residual=abs(_gamma_map(gamma) - c), iterations=it)


def g_of_c(c: float) -> float:
    """``c + log g + (g - c) log(g - c) - g log g`` at ``g = gamma(c)``."""
    gamma = solve_gamma(c).gamma
    # gamma - c = gamma e^{-1/gamma}; avoids cancellation for small c
    gap = gamma * math.exp(-1.0 / gamma)
    log_gap = math.log(gamma) - 1.0 / gamma
    return c + math.log(gamma) + gap * log_gap - gamma * math.log(gamma)


def entropy_H(c: float) -> float:
    if c <= 0.0 or c >= 1.0:
        return 0.0
    return -c * math.log(c) - (1.0 - c) * math.log1p(-c)


def x_of_c(c: float) -> float:
    """Smallest root of ``2x = e (c - x)^2``.

    The quadratic ``e x^2 - (2ec + 2) x + e c^2`` has roots with product
    ``c^2``; take the larger root and divide.
    """
    if c <= 0.0:
        raise DomainError("x(c) needs c > 0")
    e = math.e
    b = 2.0 * e * c + 2.0
    big = (b + math.sqrt(8.0 * e * c + 4.0)) / (2.0 * e)
    return c * c / big


def mu4(c: float) -> float:
    if not 0.0 < c <= 0.5:
        raise DomainError(f"mu4 needs c in (0, 1/2], got {c!r}")
    x = x_of_c(c)
    if c - x <= 0.0 or x <= 0.0:
        raise DomainError(f"c - x(c) not positive at c = {c!r}")
    return (
        (1.0 - c) * math.log1p(-c)
        - x * LOG2
        + 2.0 * c * math.log(c)
        - 2.0 * (c - x) * math.log(c - x)
        - x * math.log(x)
    )


def lambda4(c: float) -> float:
    return entropy_H(c) + 4.0 * mu4(c)


def mu3(c: float) -> float:
    _clamp_check(c)
    h = 1.0 - 0.5 * c
    return (
        LOG2 * (0.5 * c - 1.0 / 6.0)
        - h * math.log(h)
        - 0.5 * c
        + 0.5 * g_of_c(c)
        + 0.5 * math.log(h)
    )


@dataclass(frozen=True)
class ExponentPoint:
    c: float
    H: float
    x: float
    mu4: float | None
    lambda4: float | None
    mu3: float
    g: float


def exponent_point(c: float) -> ExponentPoint:
    quartic = 0.0 < c <= 0.5
    return ExponentPoint(
        c=c,
        H=entropy_H(c),
        x=x_of_c(c),
        mu4=mu4(c) if quartic else None,
        lambda4=lambda4(c) if quartic else None,
        mu3=mu3(c),
        g=g_of_c(c),
    )


def sign_changes(xs, ys) -> list[float]:
    """Abscissae where ``ys`` changes sign, by linear interpolation."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    out = []
    for i in np.nonzero(np.signbit(ys[:-1]) != np.signbit(ys[1:]))[0]:
        x0, x1, y0, y1 = xs[i], xs[i + 1], ys[i], ys[i + 1]
        out.append(float(x0 - y0 * (x1 - x0) / (y1 - y0)))
    return out


def lambda4_interval(step: float = 1e-4) -> tuple[float, float]:
    """Endpoints of the region where ``lambda4 < 0``, from a sign scan on
    ``(0, 1/2]``."""
    grid = np.arange(step, 0.5 + step / 2, step)
    values = [lambda4(c) for c in grid]
    roots = sign_changes(grid, values)
    if len(roots) != 2:
        raise RuntimeError(f"expected two sign changes of lambda4, found {roots}")
    return roots[0], roots[1]


@dataclass(frozen=True)
class BoundEvaluation:
    n: int
    k: int
    l: int
    log_value: float


def f_k_l_log(n: int, k: int, l: int) -> float:
    """``log(n^{l-n} S(k, l) (n-l)^{n-k})``."""
    if not 1 <= l <= k <= n - 1:
        raise DomainError(f"need 1 <= l <= k <= n-1, got n={n}, k={k}, l={l}")
    return (l - n) * math.log(n) + stirling_log(k, l) + (n - k) * math.log(n - l)


def s_t_k_log(n: int, t: int, k: int) -> float:
    """``log(n^{k-t} S(t, k) (1 - k/n)^t)``."""
    if not (1 <= k <= t and k <= n - 1):
        raise DomainError(f"need 1 <= k <= t and k <= n-1, got n={n}, t={t}, k={k}")
    return (k - t) * math.log(n) + stirling_log(t, k) + t * math.log1p(-k / n)


def _check_nt(n: int, t: int) -> None:
    if n < 1 or t < 1:
        raise DomainError("need n >= 1 and t >= 1")


def exact_E_M(n: int, t: int) -> float:
    """``E[M] = n ((1 - 1/n)^{n-1})^t``."""
    _check_nt(n, t)
    if n == 1:
        return 1.0
    return n * math.exp(t * (n - 1) * math.log1p(-1.0 / n))


def exact_E_M_pairs(n: int, t: int) -> float:
    """``E[C(M, 2)] = C(n, 2) ((1 - 1/n)(1 - 2/n)^{n-2})^t``."""
    _check_nt(n, t)
    if n < 2:
        return 0.0
    if n == 2:
        # (1 - 2/n)^0 = 1
        return math.exp(t * math.log1p(-0.5))
    per_map = math.log1p(-1.0 / n) + (n - 2) * math.log1p(-2.0 / n)
    return n * (n - 1) / 2.0 * math.exp(t * per_map)


def exact_var_M(n: int, t: int) -> float:
    em = exact_E_M(n, t)
    return 2.0 * exact_E_M_pairs(n, t) + em - em * em


def exact_inf_min_prob(n: int, t: int) -> float:
    """``prod_{s<n} (1 - s / n^t)``: the tuple map ``i -> (f_1(i), ..., f_t(i))``
    is injective."""
    _check_nt(n, t)
    if n == 1:
        return 1.0
    s = np.arange(n, dtype=float)
    ratio = s * math.exp(-t * math.log(n))
    if ratio[-1] >= 1.0:
        return 0.0
    return float(math.exp(np.sum(np.log1p(-ratio))))
