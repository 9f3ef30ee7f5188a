import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from depthmod import _pykernels as py
from depthmod._backend import compiled_kernels

ck = compiled_kernels()
needs_compiled = pytest.mark.skipif(ck is None, reason="extension not built")

seeds = st.integers(0, 2**64 - 1)


@pytest.mark.parametrize("k", [py] + ([ck] if ck else []), ids=lambda k: k.BACKEND)
@given(seed=seeds, rep=st.integers(0, 2**64 - 1), sub=st.integers(0, 3))
@settings(max_examples=30, deadline=None)
def test_philox_matches_numpy(k, seed, rep, sub):
    ref = np.random.Philox(key=(rep << 64) | seed, counter=sub << 192).random_raw(11)
    assert np.array_equal(np.asarray(k.philox_raw(seed, rep, 11, sub), dtype=np.uint64), ref)


def test_philox_known_value():
    assert py.philox_raw(42, 5, 3).tolist() == [5531143619848960914, 9933038500078301344, 3620821414095311746]


def test_bounded_draws_uniform():
    x = np.asarray(py.bounded_draws(3, 0, [7] * 70000))
    assert x.min() == 0 and x.max() == 6
    counts = np.bincount(x, minlength=7)
    assert np.all(np.abs(counts - 10000) < 500)


@needs_compiled
@given(m=st.integers(2, 15), n=st.integers(1, 300), seed=seeds, rep=st.integers(0, 1000))
@settings(max_examples=40, deadline=None)
def test_kernels_bit_identical(m, n, seed, rep):
    assert np.array_equal(ck.bounded_draws(seed, rep, list(range(1, 50))), py.bounded_draws(seed, rep, list(range(1, 50))))
    assert np.array_equal(ck.rrt_urn(m, n, seed, rep, 3), py.rrt_urn(m, n, seed, rep, 3))
    for a, b in zip(ck.bst_urn(m, n, seed, rep, 3), py.bst_urn(m, n, seed, rep, 3)):
        assert np.array_equal(a, b)
    assert np.array_equal(ck.rrt_depths(n, seed, rep), py.rrt_depths(n, seed, rep))
    assert np.array_equal(ck.bst_depths(n, seed, rep), py.bst_depths(n, seed, rep))
    xi = np.array([2, 2, 1, 1, 1, 1, 0, 0, 0])
    for a, b in zip(ck.cgwt_walk(xi, seed, rep), py.cgwt_walk(xi, seed, rep)):
        assert np.array_equal(a, b)


@pytest.mark.parametrize("k", [py] + ([ck] if ck else []), ids=lambda k: k.BACKEND)
def test_cgwt_walk_rejects_bad_multiset(k):
    with pytest.raises(ValueError):
        k.cgwt_walk(np.array([2, 2, 0]), 0, 0)


def test_env_selects_fallback():
    import os
    import subprocess
    import sys

    code = "import depthmod, depthmod.urn as u; print(depthmod.BACKEND, u.simulate_rrt_urn(4, 1000, 3).counts)"
    env = dict(os.environ, DEPTHMOD_BACKEND="python")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True).stdout
    assert out.strip() == "python (257, 258, 231, 254)"
