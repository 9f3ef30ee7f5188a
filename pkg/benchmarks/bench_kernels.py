"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--n 20000] [--repeat 3]

Prints one line per kernel with the best-of-``repeat`` time of each backend,
the speedup, and whether the two outputs are bit-identical.
"""

import argparse
import time

import numpy as np

from depthmod import _pykernels as py
from depthmod._backend import compiled_kernels
from depthmod.treegen import OffspringDistribution, sample_degree_counts


def best_time(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--n", type=int, default=20000, help="steps / tree size per call")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    ck = compiled_kernels()
    if ck is None:
        raise SystemExit("compiled extension not built; run: pip install -e . --no-build-isolation")

    n = args.n
    counts = sample_degree_counts(n, OffspringDistribution.poisson1(), np.random.default_rng(0))
    xi = np.repeat(np.arange(counts.size), counts)
    cases = [
        ("philox_raw", lambda k: k.philox_raw(1, 2, n)),
        ("rrt_urn m=7", lambda k: k.rrt_urn(7, n, 1, 0, 1)),
        ("bst_urn m=12", lambda k: k.bst_urn(12, n, 1, 0, 1)),
        ("rrt_depths", lambda k: k.rrt_depths(n, 1, 0)),
        ("bst_depths", lambda k: k.bst_depths(n, 1, 0)),
        ("cgwt_walk", lambda k: k.cgwt_walk(xi, 1, 0)),
    ]
    print(f"{'kernel':<14} {'compiled':>12} {'python':>12} {'speedup':>9}  identical")
    for name, call in cases:
        tc, oc = best_time(lambda: call(ck), args.repeat)
        tp, op = best_time(lambda: call(py), args.repeat)
        print(f"{name:<14} {tc * 1e3:10.3f}ms {tp * 1e3:10.3f}ms {tp / tc:8.1f}x  {same(oc, op)}")


if __name__ == "__main__":
    main()
