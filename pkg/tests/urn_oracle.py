"""Exact finite-n covariance of the urn count vectors.

The Fourier modes of an urn with circulant replacement satisfy closed linear
recursions for their first and mixed second moments, so the covariance of the
counts after ``n`` steps is computable exactly (up to rounding) in O(n m^2).
"""

import numpy as np


def exact_count_covariance(model, m, n):
    k = np.arange(m)
    w = np.exp(2j * np.pi * k / m)
    d = (k[:, None] - k[None, :]) % m  # index of mode j - l
    if model == "rrt":
        # t balls; a draw of label J adds one ball J+1: mode k gains w^k w^{kJ}
        lam = w
        mean = np.ones(m, dtype=complex)
        mix = np.ones((m, m), dtype=complex)
        t0, steps = 1, n - 1
    else:
        # t external balls; a draw of label J changes external mode k by lam_k w^{kJ}
        lam = 2 * w - 1
        mean = np.ones(m, dtype=complex)
        mix = np.ones((m, m), dtype=complex)
        t0, steps = 1, n
    gain = lam[:, None] * lam.conj()[None, :]
    grow = lam[:, None] + lam.conj()[None, :]
    for s in range(steps):
        t = t0 + s
        mix = mix * (1 + grow / t) + gain * mean[d] / t
        mean = mean * (1 + lam / t)
    cov = mix - mean[:, None] * mean.conj()[None, :]
    if model == "bst":
        # internal modes: X(k) = (Y(k) - 1) / lam_k for k != 0, X(0) = n
        cov = cov / gain
        cov[0, :] = 0
        cov[:, 0] = 0
    else:
        cov[0, :] = 0
        cov[:, 0] = 0
    # counts X_a = (1/m) sum_k X(k) w^{-ka}
    f = np.exp(-2j * np.pi * np.outer(k, k) / m) / m  # f[a, k]
    return (f @ cov @ f.conj().T).real
