"""Pure-Python twins of the compiled kernels.

Same signatures, same random streams, same output bit for bit; only much
slower.  The raw 64-bit stream is numpy's own Philox generator, which the
compiled kernel reimplements inline.
"""

import numpy as np

BACKEND = "python"

MASK64 = (1 << 64) - 1
_BLOCK = 512


class _Stream:
    def __init__(self, seed, replicate, substream=0):
        key = ((replicate & MASK64) << 64) | (seed & MASK64)
        self._bitgen = np.random.Philox(key=key, counter=(substream & MASK64) << 192)
        self._buf = []
        self._pos = 0

    def next(self):
        if self._pos == len(self._buf):
            self._buf = self._bitgen.random_raw(_BLOCK).tolist()
            self._pos = 0
        x = self._buf[self._pos]
        self._pos += 1
        return x

    def bounded(self, t):
        prod = self.next() * t
        lo = prod & MASK64
        if lo < t:
            thr = (-t) % t
            while lo < thr:
                prod = self.next() * t
                lo = prod & MASK64
        return prod >> 64


def philox_raw(seed, replicate, count, substream=0):
    s = _Stream(seed, replicate, substream)
    return np.array([s.next() for _ in range(count)], dtype=np.uint64)


def bounded_draws(seed, replicate, bounds):
    s = _Stream(seed, replicate)
    return np.array([s.bounded(int(b)) for b in bounds], dtype=np.uint64)


def rrt_urn(m, n, seed, replicate_start, replicates):
    out = np.zeros((replicates, m), dtype=np.int64)
    for r in range(replicates):
        s = _Stream(seed, replicate_start + r)
        c = [0] * m
        c[0] = 1
        for k in range(1, n):
            u = s.bounded(k)
            j = 0
            while u >= c[j]:
                u -= c[j]
                j += 1
            c[(j + 1) % m] += 1
        out[r] = c
    return out


def bst_urn(m, n, seed, replicate_start, replicates):
    xs = np.zeros((replicates, m), dtype=np.int64)
    ys = np.zeros((replicates, m), dtype=np.int64)
    for r in range(replicates):
        s = _Stream(seed, replicate_start + r)
        x = [0] * m
        y = [0] * m
        y[0] = 1
        for k in range(n):
            u = s.bounded(k + 1)
            j = 0
            while u >= y[j]:
                u -= y[j]
                j += 1
            x[j] += 1
            y[j] -= 1
            y[(j + 1) % m] += 2
        xs[r] = x
        ys[r] = y
    return xs, ys


def rrt_depths(n, seed, replicate):
    s = _Stream(seed, replicate)
    d = [0] * n
    for k in range(1, n):
        d[k] = d[s.bounded(k)] + 1
    return np.array(d, dtype=np.int64)


def bst_depths(n, seed, replicate):
    s = _Stream(seed, replicate)
    p = list(range(n))
    for i in range(n - 1, 0, -1):
        j = s.bounded(i + 1)
        p[i], p[j] = p[j], p[i]
    left = [-1] * n
    right = [-1] * n
    d = [0] * n
    for i in range(1, n):
        cur, depth = 0, 1
        while True:
            side = left if p[i] < p[cur] else right
            if side[cur] < 0:
                side[cur] = i
                break
            cur = side[cur]
            depth += 1
        d[i] = depth
    return np.array(d, dtype=np.int64)


def cgwt_walk(xi_multiset, seed, replicate):
    s = _Stream(seed, replicate, substream=1)
    x = [int(v) for v in xi_multiset]
    n = len(x)
    if n == 0 or min(x) < 0 or sum(x) != n - 1:
        raise ValueError("degree multiset must be nonnegative and sum to len - 1")
    for i in range(n - 1, 0, -1):
        j = s.bounded(i + 1)
        x[i], x[j] = x[j], x[i]
    walk, low, start = 0, 1, 0
    for i, v in enumerate(x):
        walk += v - 1
        if walk < low:
            low, start = walk, i + 1
    exc = x[start:] + x[:start]
    d = [0] * n
    stack = [exc[0]]
    for i in range(1, n):
        while stack[-1] == 0:
            stack.pop()
        stack[-1] -= 1
        d[i] = len(stack)
        stack.append(exc[i])
    return np.array(exc, dtype=np.int64), np.array(d, dtype=np.int64)
