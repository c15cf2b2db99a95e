"""Self-checks run by ``randpart verify``.

Each suite returns a list of ``Check`` rows; a build is healthy when every
row passes.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import asymptotics as asy
from . import stirling as st
from .partition import (
    SetPartition,
    all_partitions,
    graph_components_oracle,
    join,
    join_streaming,
    meet,
    refines,
    verify_kfree_properties,
)
from .rng import SeedSpec, Xoshiro256, derive_trial_rng


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""


def random_partition(rng: Xoshiro256, n: int) -> SetPartition:
    """Canonicalised uniform labelling; every partition of ``n`` has positive mass."""
    return SetPartition.from_labels(rng.bounded_array(n, n).tolist())


def stirling_suite(n_max: int = 300, enum_max: int = 10) -> list[Check]:
    checks = []
    bad = [n for n in range(3, n_max + 1) if not st.check_log_concavity(n)]
    checks.append(Check(f"log-concavity n<={n_max}", not bad, f"failing n: {bad[:5]}"))
    bad = [(k, l) for k in range(2, n_max + 1) for l in range(2, k + 1)
           if not st.check_ratio_bound(k, l)]
    checks.append(Check(f"ratio bound 2<=l<=k<={n_max}", not bad, f"failing: {bad[:5]}"))
    bad = [(k, l) for k in range(2, n_max + 1) for l in range(2, k + 1)
           if not st.check_rough_ratio_bound(k, l)]
    checks.append(Check(f"rough ratio bound k<={n_max}", not bad, f"failing: {bad[:5]}"))
    bad = [n for n in range(2, n_max + 1) if not st.check_ratio_monotone(n)]
    checks.append(Check(f"S(n,k-1)/S(n,k) nondecreasing n<={n_max}", not bad, f"failing: {bad[:5]}"))
    bad = [n for n in range(31) if sum(st.StirlingTable().row(n)) != st.bell_number(n)]
    checks.append(Check("row sums = Bell numbers n<=30", not bad, f"failing: {bad}"))
    bad = []
    for n in range(1, enum_max + 1):
        counts = Counter(p.num_blocks for p in all_partitions(n))
        if any(counts[k] != st.stirling_exact(n, k) for k in range(1, n + 1)):
            bad.append(n)
    checks.append(Check(f"triangle = enumeration n<={enum_max}", not bad, f"failing: {bad}"))
    return checks


def lattice_suite(triples: int = 2000, n_max: int = 8, seed: int = 0, glb_n: int = 5) -> list[Check]:
    failures: Counter[str] = Counter()
    for i in range(triples):
        rng = derive_trial_rng(SeedSpec(seed, i))
        n = 1 + rng.bounded(n_max)
        p, q, r = (random_partition(rng, n) for _ in range(3))
        laws = {
            "meet commutative": meet(p, q) == meet(q, p),
            "join commutative": join(p, q) == join(q, p),
            "meet associative": meet(meet(p, q), r) == meet(p, meet(q, r)),
            "join associative": join(join(p, q), r) == join(p, join(q, r)),
            "idempotent": meet(p, p) == p and join(p, p) == p,
            "absorption": meet(p, join(p, q)) == p and join(p, meet(p, q)) == p,
            "meet below": refines(meet(p, q), p) and refines(meet(p, q), q),
            "join above": refines(p, join(p, q)) and refines(q, join(p, q)),
        }
        failures.update(name for name, ok in laws.items() if not ok)
    checks = [Check(f"lattice laws on {triples} random triples n<={n_max}", not failures,
                    str(dict(failures)))]
    parts = list(all_partitions(glb_n))
    glb_bad = 0
    for p in parts:
        for q in parts:
            m = meet(p, q)
            for r in parts:
                if refines(r, p) and refines(r, q) and not refines(r, m):
                    glb_bad += 1
    checks.append(Check(f"meet is greatest lower bound, exhaustive n={glb_n}", glb_bad == 0,
                        f"{glb_bad} violations"))
    return checks


def kfree_suite(n_max: int = 10) -> list[Check]:
    """Every partition of every n <= n_max, every window 1 <= a < b < n.

    The property checks depend on a partition only through its block sizes, so
    partitions are grouped by size multiset and each group is checked once
    on a representative, with counts weighted by the group size.
    """
    checks = []
    for n in range(3, n_max + 1):
        groups: dict[tuple[int, ...], list] = {}
        for p in all_partitions(n):
            key = tuple(sorted(p.block_sizes()))
            entry = groups.setdefault(key, [p, 0])
            entry[1] += 1
        failures = 0
        applicable: Counter[str] = Counter()
        for rep, weight in groups.values():
            for a in range(1, n - 1):
                for b in range(a + 1, n):
                    report = verify_kfree_properties(rep, a, b)
                    failures += weight * len(report.failures())
                    for k, v in report.as_dict().items():
                        if v != "n/a":
                            applicable[k] += weight
        total = sum(w for _, w in groups.values())
        checks.append(Check(f"k-free properties, all {total} partitions of n={n}", failures == 0,
                            f"{failures} failures; applicable counts {dict(applicable)}"))
    return checks


def oracle_suite(instances: int = 1000, n_max: int = 64, t_max: int = 5, seed: int = 0) -> list[Check]:
    mismatches = 0
    fold_mismatches = 0
    for i in range(instances):
        rng = derive_trial_rng(SeedSpec(seed, i))
        n = 1 + rng.bounded(n_max)
        t = 1 + rng.bounded(t_max)
        maps = rng.bounded_array(n, n * t).reshape(t, n)
        streamed = join_streaming(n, maps)
        if graph_components_oracle(n, maps.tolist()) != streamed:
            mismatches += 1
        folded = SetPartition.from_labels(maps[0].tolist())
        for row in maps[1:]:
            folded = join(folded, SetPartition.from_labels(row.tolist()))
        if folded != streamed:
            fold_mismatches += 1
    return [
        Check(f"graph components = join_streaming on {instances} instances", mismatches == 0,
              f"{mismatches} mismatches"),
        Check(f"iterated join = join_streaming on {instances} instances", fold_mismatches == 0,
              f"{fold_mismatches} mismatches"),
    ]


def roots_suite() -> list[Check]:
    grid = np.linspace(asy.C_MIN, asy.C_MAX, 1000)
    worst = max(asy.solve_gamma(float(c)).residual for c in grid)
    gammas = [asy.solve_gamma(float(c)).gamma for c in grid]
    mono = all(a < b for a, b in zip(gammas, gammas[1:]))
    c1 = -math.expm1(-1.0)
    g1 = asy.solve_gamma(c1).gamma
    xs = np.linspace(0.01, 0.5, 1000)
    x_res = max(abs(2 * asy.x_of_c(c) - math.e * (c - asy.x_of_c(c)) ** 2) for c in xs)
    lo, hi = asy.lambda4_interval()
    mu3_grid = np.arange(1, 10000) / 10000
    mu3_max = max(asy.mu3(float(c)) for c in mu3_grid)
    return [
        Check("gamma residual <= 1e-12 on 1000-point grid", worst <= 1e-12, f"max residual {worst:.3g}"),
        Check("gamma strictly increasing", mono),
        Check("gamma(1 - 1/e) = 1", abs(g1 - 1.0) <= 1e-10, f"gamma = {g1!r}"),
        Check("x(c) residual <= 1e-12", x_res <= 1e-12, f"max residual {x_res:.3g}"),
        Check("lambda4 < 0 exactly on [0.087412, 0.340034] (+-1e-3)",
              abs(lo - 0.087412) <= 1e-3 and abs(hi - 0.340034) <= 1e-3,
              f"interval [{lo:.6f}, {hi:.6f}]"),
        Check("max mu3 in (-1/500, 0)", -0.002 < mu3_max < 0, f"max mu3 = {mu3_max:.6g}"),
    ]


SUITES = {
    "stirling": stirling_suite,
    "lattice": lattice_suite,
    "kfree": kfree_suite,
    "oracle": oracle_suite,
    "roots": roots_suite,
}


def run_suite(name: str) -> list[Check]:
    if name == "all":
        out = []
        for fn in SUITES.values():
            out.extend(fn())
        return out
    return SUITES[name]()
