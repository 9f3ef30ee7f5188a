# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops.

Every function here has a pure-Python twin in ``_pykernels`` with the same
signature and bit-identical output.  Randomness comes from Philox4x64-10
keyed by ``(seed, replicate)``; the stream is the one produced by
``numpy.random.Philox(key=replicate << 64 | seed, counter=substream << 192)``.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t

cnp.import_array()

cdef extern from *:
    """
    #include <stdint.h>

    typedef struct {
        uint64_t ctr[4];
        uint64_t key[2];
        uint64_t buf[4];
        int pos;
    } dm_philox;

    static inline uint64_t dm_mulhilo(uint64_t a, uint64_t b, uint64_t *hi) {
        __uint128_t p = (__uint128_t)a * (__uint128_t)b;
        *hi = (uint64_t)(p >> 64);
        return (uint64_t)p;
    }

    static inline void dm_philox_init(dm_philox *s, uint64_t k0, uint64_t k1,
                                      uint64_t substream) {
        s->ctr[0] = 0; s->ctr[1] = 0; s->ctr[2] = 0; s->ctr[3] = substream;
        s->key[0] = k0; s->key[1] = k1;
        s->pos = 4;
    }

    static inline void dm_philox_refill(dm_philox *s) {
        uint64_t c0, c1, c2, c3, k0, k1, hi0, hi1, lo0, lo1;
        int r;
        if (++s->ctr[0] == 0 && ++s->ctr[1] == 0 && ++s->ctr[2] == 0) {
            ++s->ctr[3];
        }
        c0 = s->ctr[0]; c1 = s->ctr[1]; c2 = s->ctr[2]; c3 = s->ctr[3];
        k0 = s->key[0]; k1 = s->key[1];
        for (r = 0; r < 10; r++) {
            if (r > 0) {
                k0 += 0x9E3779B97F4A7C15ULL;
                k1 += 0xBB67AE8584CAA73BULL;
            }
            lo0 = dm_mulhilo(0xD2E7470EE14C6C93ULL, c0, &hi0);
            lo1 = dm_mulhilo(0xCA5A826395121157ULL, c2, &hi1);
            c0 = hi1 ^ c1 ^ k0;
            c1 = lo1;
            c2 = hi0 ^ c3 ^ k1;
            c3 = lo0;
        }
        s->buf[0] = c0; s->buf[1] = c1; s->buf[2] = c2; s->buf[3] = c3;
        s->pos = 0;
    }

    static inline uint64_t dm_next(dm_philox *s) {
        if (s->pos == 4) dm_philox_refill(s);
        return s->buf[s->pos++];
    }

    /* Lemire's multiply-shift with rejection: exact uniform on [0, t). */
    static inline uint64_t dm_bounded(dm_philox *s, uint64_t t) {
        uint64_t hi, lo, thr;
        lo = dm_mulhilo(dm_next(s), t, &hi);
        if (lo < t) {
            thr = (0 - t) % t;
            while (lo < thr) {
                lo = dm_mulhilo(dm_next(s), t, &hi);
            }
        }
        return hi;
    }
    """
    ctypedef struct dm_philox:
        pass
    void dm_philox_init(dm_philox *s, uint64_t k0, uint64_t k1, uint64_t substream) nogil
    uint64_t dm_next(dm_philox *s) nogil
    uint64_t dm_bounded(dm_philox *s, uint64_t t) nogil


BACKEND = "compiled"

cdef uint64_t MASK64 = 0xFFFFFFFFFFFFFFFF


def philox_raw(seed, replicate, Py_ssize_t count, substream=0):
    """First ``count`` raw 64-bit outputs of the replicate's stream."""
    cdef dm_philox s
    cdef Py_ssize_t i
    out = np.empty(count, dtype=np.uint64)
    cdef uint64_t[::1] o = out
    dm_philox_init(&s, <uint64_t>(seed & MASK64), <uint64_t>(replicate & MASK64),
                   <uint64_t>(substream & MASK64))
    with nogil:
        for i in range(count):
            o[i] = dm_next(&s)
    return out


def bounded_draws(seed, replicate, bounds):
    """Sequence of uniform draws on ``[0, b)`` for each ``b`` in ``bounds``."""
    cdef dm_philox s
    cdef Py_ssize_t i
    b = np.ascontiguousarray(bounds, dtype=np.uint64)
    cdef uint64_t[::1] bb = b
    out = np.empty(b.shape[0], dtype=np.uint64)
    cdef uint64_t[::1] o = out
    dm_philox_init(&s, <uint64_t>(seed & MASK64), <uint64_t>(replicate & MASK64), 0)
    with nogil:
        for i in range(bb.shape[0]):
            o[i] = dm_bounded(&s, bb[i])
    return out


def rrt_urn(int m, int64_t n, seed, replicate_start, Py_ssize_t replicates):
    cdef dm_philox s
    cdef Py_ssize_t r
    cdef int64_t k, u
    cdef int j, jj
    cdef int64_t *row
    cdef uint64_t key0 = <uint64_t>(seed & MASK64)
    cdef uint64_t r0 = <uint64_t>(replicate_start & MASK64)
    out = np.zeros((replicates, m), dtype=np.int64)
    cdef int64_t[:, ::1] c = out
    if replicates == 0:
        return out
    with nogil:
        for r in range(replicates):
            dm_philox_init(&s, key0, r0 + <uint64_t>r, 0)
            row = &c[r, 0]
            row[0] = 1
            for k in range(1, n):
                u = <int64_t>dm_bounded(&s, <uint64_t>k)
                j = 0
                while u >= row[j]:
                    u -= row[j]
                    j += 1
                jj = j + 1
                if jj == m:
                    jj = 0
                row[jj] += 1
    return out


def bst_urn(int m, int64_t n, seed, replicate_start, Py_ssize_t replicates):
    cdef dm_philox s
    cdef Py_ssize_t r
    cdef int64_t k, u
    cdef int j, jj
    cdef int64_t *xr
    cdef int64_t *yr
    cdef uint64_t key0 = <uint64_t>(seed & MASK64)
    cdef uint64_t r0 = <uint64_t>(replicate_start & MASK64)
    xs = np.zeros((replicates, m), dtype=np.int64)
    ys = np.zeros((replicates, m), dtype=np.int64)
    cdef int64_t[:, ::1] x = xs
    cdef int64_t[:, ::1] y = ys
    if replicates == 0:
        return xs, ys
    with nogil:
        for r in range(replicates):
            dm_philox_init(&s, key0, r0 + <uint64_t>r, 0)
            xr = &x[r, 0]
            yr = &y[r, 0]
            yr[0] = 1
            for k in range(n):
                u = <int64_t>dm_bounded(&s, <uint64_t>(k + 1))
                j = 0
                while u >= yr[j]:
                    u -= yr[j]
                    j += 1
                jj = j + 1
                if jj == m:
                    jj = 0
                xr[j] += 1
                yr[j] -= 1
                yr[jj] += 2
    return xs, ys


def rrt_depths(int64_t n, seed, replicate):
    cdef dm_philox s
    cdef int64_t k, p
    out = np.zeros(n, dtype=np.int64)
    cdef int64_t[::1] d = out
    dm_philox_init(&s, <uint64_t>(seed & MASK64), <uint64_t>(replicate & MASK64), 0)
    with nogil:
        for k in range(1, n):
            p = <int64_t>dm_bounded(&s, <uint64_t>k)
            d[k] = d[p] + 1
    return out


def bst_depths(int64_t n, seed, replicate):
    cdef dm_philox s
    cdef int64_t i, j, t, cur, nxt, depth
    perm = np.arange(n, dtype=np.int64)
    left = np.full(n, -1, dtype=np.int64)
    right = np.full(n, -1, dtype=np.int64)
    out = np.zeros(n, dtype=np.int64)
    cdef int64_t[::1] p = perm
    cdef int64_t[::1] lf = left
    cdef int64_t[::1] rt = right
    cdef int64_t[::1] d = out
    dm_philox_init(&s, <uint64_t>(seed & MASK64), <uint64_t>(replicate & MASK64), 0)
    with nogil:
        i = n - 1
        while i > 0:
            j = <int64_t>dm_bounded(&s, <uint64_t>(i + 1))
            t = p[i]
            p[i] = p[j]
            p[j] = t
            i -= 1
        # vertex i holds key p[i]; vertex 0 is the root
        for i in range(1, n):
            cur = 0
            depth = 1
            while True:
                if p[i] < p[cur]:
                    nxt = lf[cur]
                    if nxt < 0:
                        lf[cur] = i
                        break
                else:
                    nxt = rt[cur]
                    if nxt < 0:
                        rt[cur] = i
                        break
                cur = nxt
                depth += 1
            d[i] = depth
    return out


def cgwt_walk(xi_multiset, seed, replicate):
    """Shuffle a degree multiset, rotate it into an excursion, read off depths.

    ``xi_multiset`` must sum to ``len - 1``.  Returns ``(excursion, depths)``
    where ``excursion`` is the child-count sequence in preorder.
    """
    cdef dm_philox s
    cdef Py_ssize_t n = len(xi_multiset)
    cdef Py_ssize_t i, j, start, top
    cdef int64_t t, walk, low
    xs = np.array(xi_multiset, dtype=np.int64, copy=True)
    if n == 0 or xs.min() < 0 or xs.sum() != n - 1:
        raise ValueError("degree multiset must be nonnegative and sum to len - 1")
    exc = np.empty(n, dtype=np.int64)
    out = np.zeros(n, dtype=np.int64)
    stack_arr = np.empty(n + 1, dtype=np.int64)
    cdef int64_t[::1] x = xs
    cdef int64_t[::1] e = exc
    cdef int64_t[::1] d = out
    cdef int64_t[::1] st = stack_arr
    dm_philox_init(&s, <uint64_t>(seed & MASK64), <uint64_t>(replicate & MASK64), 1)
    with nogil:
        i = n - 1
        while i > 0:
            j = <Py_ssize_t>dm_bounded(&s, <uint64_t>(i + 1))
            t = x[i]
            x[i] = x[j]
            x[j] = t
            i -= 1
        # cycle lemma: start right after the first time the walk hits its minimum
        walk = 0
        low = 1
        start = 0
        for i in range(n):
            walk += x[i] - 1
            if walk < low:
                low = walk
                start = i + 1
        for i in range(n):
            j = start + i
            if j >= n:
                j -= n
            e[i] = x[j]
        # preorder stack walk: st holds remaining child slots per open vertex
        top = 0
        if n > 0:
            d[0] = 0
            st[0] = e[0]
            top = 1
        for i in range(1, n):
            while st[top - 1] == 0:
                top -= 1
            st[top - 1] -= 1
            d[i] = top
            st[top] = e[i]
            top += 1
    return exc, out
