import itertools
import math

import numpy as np
import pytest
from scipy.optimize import brentq

from randpart import asymptotics as asy
from randpart import stirling as st


def bisect(f, lo, hi, iters=200):
    flo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if (f(mid) < 0) == (flo < 0):
            lo, flo = mid, f(mid)
        else:
            hi = mid
    return 0.5 * (lo + hi)


class TestGamma:
    def test_exact_point(self):
        c = 1 - math.exp(-1)
        assert abs(asy.solve_gamma(c).gamma - 1.0) <= 1e-10

    def test_half(self):
        sol = asy.solve_gamma(0.5)
        assert sol.residual <= 1e-12
        oracle = brentq(lambda g: g * (1 - math.exp(-1 / g)) - 0.5, 0.5, 2.0, xtol=1e-15)
        assert abs(sol.gamma - oracle) <= 1e-12
        assert abs(sol.gamma - 0.6275004874579876) <= 1e-12

    def test_grid_against_brentq(self):
        for c in np.linspace(0.001, 0.999, 37):
            c = float(c)
            oracle = brentq(lambda g: g * -math.expm1(-1 / g) - c, c / 2, 1e4, xtol=1e-15)
            assert abs(asy.solve_gamma(c).gamma - oracle) <= 1e-10 * max(1.0, oracle)

    def test_residual_and_monotone_grid(self):
        grid = np.linspace(asy.C_MIN, asy.C_MAX, 1000)
        sols = [asy.solve_gamma(float(c)) for c in grid]
        assert max(s.residual for s in sols) <= 1e-12
        assert all(s.iterations <= 200 for s in sols)
        gammas = [s.gamma for s in sols]
        assert all(a < b for a, b in zip(gammas, gammas[1:]))

    @pytest.mark.parametrize("c", [0.0, 1e-7, 1.0, 1.5, -0.1])
    def test_domain(self, c):
        with pytest.raises(asy.DomainError):
            asy.solve_gamma(c)


class TestG:
    def test_exact_point(self):
        c = 1 - math.exp(-1)
        assert abs(asy.g_of_c(c) - (1 - 2 / math.e)) <= 1e-12
        assert abs(asy.g_of_c(c) - (c + (1 - c) * math.log(1 - c))) <= 1e-12

    def test_grid_finite_continuous(self):
        grid = np.linspace(0.01, 0.99, 1000)
        vals = np.array([asy.g_of_c(float(c)) for c in grid])
        assert np.all(np.isfinite(vals))
        # the slope grows like 1/c at the left end and like -log(1-c) at the right
        step = grid[1] - grid[0]
        right = grid[1:]
        slope_cap = 1 / grid[:-1] + 1 - np.log1p(-right)
        assert np.all(np.abs(np.diff(vals)) <= 2 * step * slope_cap)

    def test_naive_formula_agrees_mid_range(self):
        for c in np.linspace(0.2, 0.95, 20):
            g = asy.solve_gamma(float(c)).gamma
            naive = c + math.log(g) + (g - c) * math.log(g - c) - g * math.log(g)
            assert abs(naive - asy.g_of_c(float(c))) <= 1e-9

    def test_log_asymptotic(self):
        n, c = 2000, 0.5
        k = int(c * n)
        err = abs(st.stirling_log(n, k) - ((n - k) * math.log(n) + asy.g_of_c(c) * n)) / n
        assert err <= 0.05


class TestEntropy:
    def test_values(self):
        assert asy.entropy_H(0.5) == pytest.approx(math.log(2), abs=1e-15)
        assert asy.entropy_H(0.0) == asy.entropy_H(1.0) == 0.0
        for c in np.linspace(0.01, 0.99, 50):
            assert asy.entropy_H(c) == pytest.approx(asy.entropy_H(1 - c), abs=1e-14)


class TestX:
    def test_one_third_against_bisection(self):
        c = 1 / 3
        oracle = bisect(lambda x: 2 * x - math.e * (c - x) ** 2, 0.0, c)
        x = asy.x_of_c(c)
        assert abs(x - oracle) <= 1e-10
        assert abs(x - 0.0843) <= 5e-5
        assert abs(2 * x - math.e * (c - x) ** 2) <= 1e-12

    def test_grid(self):
        for c in np.linspace(0.01, 0.5, 200):
            c = float(c)
            x = asy.x_of_c(c)
            assert 0 < x < c
            assert abs(2 * x - math.e * (c - x) ** 2) <= 1e-12
            oracle = bisect(lambda y: 2 * y - math.e * (c - y) ** 2, 0.0, c)
            assert abs(x - oracle) <= 1e-10

    def test_small_c_limit(self):
        assert asy.x_of_c(1e-12) < 1e-20
        assert asy.x_of_c(1e-3) < asy.x_of_c(1e-2)


class TestLambda4:
    def test_signs(self):
        assert asy.lambda4(0.2) < 0
        assert asy.lambda4(0.05) > 0

    def test_interval(self):
        lo, hi = asy.lambda4_interval()
        assert abs(lo - 0.087412) <= 1e-3
        assert abs(hi - 0.340034) <= 1e-3

    def test_domain(self):
        with pytest.raises(asy.DomainError):
            asy.mu4(0.6)
        with pytest.raises(asy.DomainError):
            asy.mu4(0.0)


class TestMu3:
    def test_max_and_negative(self):
        grid = np.linspace(0.001, 0.999, 10_000)
        vals = np.array([asy.mu3(float(c)) for c in grid])
        assert np.all(vals < 0)
        assert -1 / 500 < vals.max() < 0

    def test_continuity(self):
        # slope grows like 1/(2c) at the left end; continuity checked from 0.01
        grid = np.arange(0.01, 0.999, 1e-4)
        vals = np.array([asy.mu3(float(c)) for c in grid])
        assert np.max(np.abs(np.diff(vals))) < 1e-2


def exact_log_f(n, k, l):
    return math.log(st.stirling_exact(k, l) * (n - l) ** (n - k)) - (n - l) * math.log(n)



class TestBounds:
    def test_f_diagonal(self):
        for n, k in [(100, 5), (1000, 30), (10_000, 99)]:
            assert asy.f_k_l_log(n, k, k) == pytest.approx((n - k) * math.log1p(-k / n), rel=1e-12)

    def test_s_diagonal(self):
        for n, t in [(100, 5), (10_000, 921)]:
            assert asy.s_t_k_log(n, t, t) == pytest.approx(t * math.log1p(-t / n), rel=1e-12)

    def test_against_big_integers(self):
        for n in (10, 57, 200):
            for k in range(1, n):
                for l in range(1, k + 1, max(1, k // 7)):
                    want = exact_log_f(n, k, l)
                    got = asy.f_k_l_log(n, k, l)
                    assert abs(got - want) <= 1e-8 * max(1.0, abs(want))
            for t in range(1, n, max(1, n // 9)):
                for k in range(1, t + 1):
                    # s_t(k) = n^{k-t} S(t,k) (n-k)^t / n^t
                    want = math.log(st.stirling_exact(t, k) * (n - k) ** t) + (k - t) * math.log(n) - t * math.log(n)
                    got = asy.s_t_k_log(n, t, k)
                    assert abs(got - want) <= 1e-8 * max(1.0, abs(want))

    def test_f_ratio_bounds(self):
        n = 10_000
        for k in range(2, 101):
            for l in range(2, k + 1):
                ratio = asy.f_k_l_log(n, k, l - 1) - asy.f_k_l_log(n, k, l)
                assert ratio <= math.log(math.e * k * k / (2 * n)) + 1e-9
                assert ratio <= math.log(math.e * k * k / (2 * n * (k - l + 1))) + 1e-9

    def test_s_max_bound(self):
        n = 10_000
        t = int(math.sqrt(n) * math.log(n))
        best = max(asy.s_t_k_log(n, t, k) for k in range(1, t + 1))
        assert best <= math.log(2) - math.log(n) ** 2 / 2

    def test_s_ratio_below_one(self):
        n = 10_000
        t = int(math.sqrt(n) * math.log(n))
        cutoff = t - math.log(n) ** 2
        for k in range(2, int(cutoff), 7):
            assert asy.s_t_k_log(n, t, k - 1) - asy.s_t_k_log(n, t, k) < 0

    def test_domains(self):
        with pytest.raises(asy.DomainError):
            asy.f_k_l_log(10, 10, 1)
        with pytest.raises(asy.DomainError):
            asy.s_t_k_log(10, 3, 4)


def brute_moments(n, t):
    maps = list(itertools.product(range(n), repeat=n))
    total_m = total_pairs = 0
    for combo in itertools.product(maps, repeat=t):
        # i is a singleton of the join iff it is alone in its fibre under every map
        single = [all(sum(1 for v in f if v == f[i]) == 1 for f in combo) for i in range(n)]
        m = sum(single)
        total_m += m
        total_pairs += m * (m - 1) // 2
    count = len(maps) ** t
    return total_m / count, total_pairs / count


def brute_inf_min(n, t):
    maps = list(itertools.product(range(n), repeat=n))
    hits = 0
    for combo in itertools.product(maps, repeat=t):
        tuples = {tuple(f[i] for f in combo) for i in range(n)}
        hits += len(tuples) == n
    return hits / len(maps) ** t


class TestMoments:
    def test_n2_t1(self):
        assert asy.exact_E_M(2, 1) == pytest.approx(1.0)
        assert asy.exact_E_M_pairs(2, 1) == pytest.approx(0.5)

    @pytest.mark.parametrize("n,t", [(n, t) for n in range(1, 5) for t in (1, 2)])
    def test_against_enumeration(self, n, t):
        em, ep = brute_moments(n, t)
        assert asy.exact_E_M(n, t) == pytest.approx(em, abs=1e-12)
        assert asy.exact_E_M_pairs(n, t) == pytest.approx(ep, abs=1e-12)
        assert asy.exact_var_M(n, t) == pytest.approx(2 * ep + em - em * em, abs=1e-12)

    def test_asymptotic_consistency(self):
        # E[M] - n e^{-t} is about t e^{-t} / 2; a constant of 1 covers the grid
        for n in (10**3, 10**4, 10**5, 10**6):
            for t in range(1, int(2 * math.log(n)) + 1):
                gap = abs(asy.exact_E_M(n, t) - n * math.exp(-t))
                assert gap <= 1.0 * t * math.exp(-t)


class TestInfMin:
    def test_small(self):
        assert asy.exact_inf_min_prob(1, 3) == 1.0
        assert asy.exact_inf_min_prob(2, 2) == pytest.approx(0.75)

    @pytest.mark.parametrize("n,t", [(n, t) for n in range(1, 4) for t in (1, 2)])
    def test_against_enumeration(self, n, t):
        assert asy.exact_inf_min_prob(n, t) == pytest.approx(brute_inf_min(n, t), abs=1e-12)

    def test_limit(self):
        assert abs(asy.exact_inf_min_prob(10**5, 2) - math.exp(-0.5)) <= 1e-3
