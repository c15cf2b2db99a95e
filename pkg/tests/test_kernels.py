"""Compiled kernels against the pure-Python twin, and published vectors."""

import numpy as np
import pytest

from randpart import _fallback
from randpart._fallback import splitmix64, trial_state

try:
    from randpart import _core
except ImportError:
    _core = None

needs_core = pytest.mark.skipif(_core is None, reason="extension not built")


def test_splitmix64_reference_vector():
    # reference outputs of SplitMix64 seeded with 1234567
    s, out = 1234567, []
    for _ in range(5):
        s, o = splitmix64(s)
        out.append(o)
    assert out == [
        6457827717110365317,
        3203168211198807973,
        9817491932198370423,
        4593380528125082431,
        16408922859458223821,
    ]


def test_xoshiro_reference_vector(kernel):
    state = np.array([1, 2, 3, 4], dtype=np.uint64)
    out = np.empty(4, dtype=np.uint64)
    kernel.fill_u64(state, out)
    assert out.tolist() == [11520, 0, 1509978240, 1215971899390074240]


def test_bounded_is_multiply_shift(kernel):
    # with a bound that never rejects in 64 draws, output = high word of x * bound
    state = np.array(trial_state(3, 9), dtype=np.uint64)
    raw = np.empty(64, dtype=np.uint64)
    kernel.fill_u64(state.copy(), raw)
    out = np.empty(64, dtype=np.int64)
    kernel.fill_bounded(state, 1000, out)
    assert out.tolist() == [(int(x) * 1000) >> 64 for x in raw]


def test_bounded_rejects_biased_window():
    # bound 2**63 + 1: threshold (2**64 - b) % b = 2**63 - 1 rejects about half the draws
    bound = 2**63 + 1
    state = np.array(trial_state(0, 0), dtype=np.uint64)
    raw = np.empty(200, dtype=np.uint64)
    _fallback.fill_u64(state.copy(), raw)
    expected, threshold = [], ((1 << 64) - bound) % bound
    for x in map(int, raw):
        m = x * bound
        if (m & (2**64 - 1)) >= threshold:
            expected.append(m >> 64)
    out = np.empty(20, dtype=np.int64)
    _fallback.fill_bounded(state, bound, out)
    assert out.tolist() == expected[:20]


@needs_core
@pytest.mark.parametrize("bound", [1, 2, 3, 7, 1000, 2**40 + 3])
def test_fill_bounded_matches(bound):
    a = np.array(trial_state(5, 1), dtype=np.uint64)
    b = a.copy()
    oa = np.empty(500, dtype=np.int64)
    ob = np.empty(500, dtype=np.int64)
    _core.fill_bounded(a, bound, oa)
    _fallback.fill_bounded(b, bound, ob)
    assert np.array_equal(oa, ob)
    assert np.array_equal(a, b)


@needs_core
@pytest.mark.parametrize("n,t", [(1, 1), (1, 3), (2, 1), (2, 2), (3, 4), (17, 2), (40, 6)])
@pytest.mark.parametrize("name", ["sup_batch", "inf_batch"])
def test_batches_match(name, n, t):
    outs = []
    for mod in (_core, _fallback):
        cols = [np.full(30, -1, dtype=np.int64) for _ in range(3)]
        getattr(mod, name)(n, t, 0xDEADBEEF, 100, 130, *cols)
        outs.append(np.stack(cols))
    assert np.array_equal(outs[0], outs[1])


@needs_core
def test_join_maps_match():
    rng = np.random.default_rng(0)
    for _ in range(50):
        n = int(rng.integers(1, 40))
        maps = rng.integers(0, n, size=(int(rng.integers(1, 5)), n)).astype(np.int64)
        assert np.array_equal(_core.join_maps(n, maps), _fallback.join_maps(n, maps))


def test_inf_batch_counts_two_blocks(kernel):
    # n = 2, t = 2: inf is p_min unless both maps collide (prob 1/4)
    cols = [np.zeros(400, dtype=np.int64) for _ in range(3)]
    kernel.inf_batch(2, 2, 0, 0, 400, *cols)
    blocks, pairs, largest = cols
    assert set(blocks.tolist()) <= {1, 2}
    assert np.array_equal(pairs == 1, blocks == 1)
    assert np.array_equal(largest, 3 - blocks)


def test_benchmark_quick(capsys):
    import importlib.util
    from pathlib import Path

    from randpart import _kernels

    if not _kernels.COMPILED:
        pytest.skip("compiled extension not built")
    path = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"
    spec = importlib.util.spec_from_file_location("bench_kernels", path)
    bench = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(bench)
    assert bench.main(["--quick", "--repeat", "1"]) == 0
    assert "True" in capsys.readouterr().out


def test_pure_env_selects_fallback():
    import os
    import subprocess
    import sys

    env = dict(os.environ, RANDPART_PURE="1")
    proc = subprocess.run([sys.executable, "-c", "import randpart; print(randpart.BACKEND)"],
                          capture_output=True, text=True, env=env, check=True)
    assert proc.stdout.strip() == "python"
