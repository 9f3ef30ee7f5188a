"""Monte Carlo harness: replicate streams, DFT on Z_m, streaming covariance
with jackknife errors, and variance-exponent fits."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import urn
from .errors import (
    ConfigError,
    DataError,
    FeasibilityError,
    InvalidModeError,
    InvalidModulusError,
    InvalidSizeError,
)
from .treegen import OffspringDistribution, TreeModel, gen_cgwt_depths
from .urn import ModDepthCounts, Regime

SQRT_N = "sqrt-n"
SQRT_N_LOG_N = "sqrt-n-log-n"
N_ALPHA = "n-alpha"
SCALINGS = (SQRT_N, SQRT_N_LOG_N, N_ALPHA)

MIN_FIT_N = 1000


def reduce_mod_m(depths, m: int) -> ModDepthCounts:
    if int(m) != m or m < 2:
        raise InvalidModulusError(f"modulus must be an integer >= 2, got {m!r}")
    d = np.asarray(depths, dtype=np.int64)
    return ModDepthCounts(tuple(np.bincount(d % m, minlength=m)))


def _roots(m):
    k = np.arange(m)
    # reduce the exponent mod m before exponentiating to keep w^{kj} accurate
    return np.exp(2j * np.pi * (np.outer(k, k) % m) / m)


def dft_mod_m(counts) -> np.ndarray:
    """``hat X(k) = sum_j w^{kj} X_j`` with ``w = exp(2 pi i / m)``."""
    c = np.asarray(tuple(counts), dtype=np.int64)
    out = _roots(c.size) @ c.astype(float)
    out[0] = float(int(c.sum()))
    return out


def idft_mod_m(coeffs) -> np.ndarray:
    x = np.asarray(coeffs, dtype=complex)
    return (_roots(x.size).conj() @ x) / x.size


class StreamingCovariance:
    """Single-pass mean and co-moment accumulator (Welford updates, merged
    batch by batch with Chan's pairwise formula)."""

    def __init__(self, dim: int):
        self.count = 0
        self.mean = np.zeros(dim)
        self.comoment = np.zeros((dim, dim))

    def update(self, batch) -> None:
        x = np.atleast_2d(np.asarray(batch, dtype=float))
        nb = x.shape[0]
        if nb == 0:
            return
        mb = x.mean(axis=0)
        d = x - mb
        cb = d.T @ d
        n = self.count + nb
        delta = mb - self.mean
        self.comoment += cb + np.outer(delta, delta) * (self.count * nb / n)
        self.mean = self.mean + delta * (nb / n)
        self.count = n

    @property
    def covariance(self) -> np.ndarray:
        if self.count < 2:
            raise DataError("covariance needs at least two observations")
        c = self.comoment / (self.count - 1)
        return (c + c.T) / 2


def jackknife_cov_se(x) -> np.ndarray:
    """Delete-one jackknife standard errors of every sample-covariance entry.

    With ``d_i`` the centred rows and ``C = sum d_i d_i^T`` the leave-one-out
    estimates are ``(C - R/(R-1) d_i d_i^T) / (R-2)``, which collapses the
    jackknife variance to ``(R S2 - C^2) / ((R-1)(R-2)^2)`` with
    ``S2 = sum_i (d_i d_i^T)^2`` taken entrywise.
    """
    x = np.asarray(x, dtype=float)
    r = x.shape[0]
    if r < 3:
        return np.full((x.shape[1], x.shape[1]), np.nan)
    d = x - x.mean(axis=0)
    c = d.T @ d
    d2 = d * d
    s2 = d2.T @ d2
    var = (r * s2 - c * c) / ((r - 1) * (r - 2) ** 2)
    return np.sqrt(np.maximum(var, 0.0))


@dataclass
class MonteCarloSummary:
    model: str
    m: int
    n: int
    replicates: int
    seed: int
    scaling: str
    mean: np.ndarray
    sample_cov: np.ndarray
    standard_errors: np.ndarray

    @property
    def norm(self) -> float:
        return scaling_norm(self.scaling, self.n, self.model, self.m)


@dataclass
class ScalingFit:
    ns: np.ndarray
    variances: np.ndarray
    gamma_hat: float
    r2: float
    variance_se: Optional[np.ndarray] = None


def _as_model(model, offspring=None) -> TreeModel:
    if isinstance(model, TreeModel):
        return model
    key = str(model).lower()
    if key.startswith("cgwt"):
        if offspring is None:
            name = key.partition(":")[2] or "poisson1"
            offspring = OffspringDistribution.from_name(name)
        elif isinstance(offspring, str):
            offspring = OffspringDistribution.from_name(offspring)
        return TreeModel.cgwt(offspring)
    return TreeModel(key)


def model_label(model: TreeModel) -> str:
    return f"cgwt:{model.offspring.kind}" if model.kind == "cgwt" else model.kind


def regime_of(model: TreeModel, m: int):
    if model.kind == "cgwt":
        return Regime.SMALL, None
    cls = urn.classify_regime(model.kind, m)
    return cls.regime, cls


def default_scaling(model: TreeModel, m: int) -> str:
    regime, _ = regime_of(model, m)
    return {Regime.SMALL: SQRT_N, Regime.CRITICAL: SQRT_N_LOG_N, Regime.LARGE: N_ALPHA}[regime]


def scaling_norm(scaling: str, n: int, model="rrt", m: int = 2) -> float:
    if scaling == SQRT_N:
        return math.sqrt(n)
    if scaling == SQRT_N_LOG_N:
        if n < 2:
            raise ConfigError("n log n scaling needs n >= 2")
        return math.sqrt(n * math.log(n))
    if scaling == N_ALPHA:
        kind = model if isinstance(model, str) else model.kind
        return n ** urn.classify_regime(kind.split(":")[0], m).alpha
    raise ConfigError(f"unknown scaling {scaling!r}; choose from {SCALINGS}")


def _chunks(total, pieces):
    size = max(1, -(-total // pieces))
    return [(s, min(size, total - s)) for s in range(0, total, size)]


def _cgwt_counts(model, m, n, seed, start, count):
    out = np.empty((count, m), dtype=np.int64)
    for i in range(count):
        d = gen_cgwt_depths(n, model.offspring, seed, start + i)
        out[i] = np.bincount(d % m, minlength=m)
    return out


def simulate_counts(model, m: int, n: int, replicates: int, seed: int, threads: int = 1,
                    offspring=None) -> np.ndarray:
    """``(replicates, m)`` array of depth-mod-m counts, row ``r`` drawn from
    replicate stream ``r``.  Identical for any ``threads``."""
    model = _as_model(model, offspring)
    if int(m) != m or m < 2:
        raise InvalidModulusError(f"modulus must be an integer >= 2, got {m!r}")
    if int(n) != n or n < 1:
        raise InvalidSizeError(f"n must be a positive integer, got {n!r}")
    if replicates < 1:
        raise ConfigError("need at least one replicate")
    m, n = int(m), int(n)
    if model.kind == "cgwt":
        if not model.offspring.is_attainable(n):
            raise FeasibilityError(f"size {n} is unattainable for offspring span {model.offspring.span}")
        job = lambda s, c: _cgwt_counts(model, m, n, seed, s, c)  # noqa: E731
    else:
        job = lambda s, c: urn.urn_counts(model.kind, m, n, seed, s, c)  # noqa: E731
    threads = max(1, int(threads))
    if threads == 1:
        return job(0, replicates)
    parts = _chunks(replicates, 4 * threads)
    with ThreadPoolExecutor(threads) as pool:
        results = list(pool.map(lambda p: job(*p), parts))
    return np.concatenate(results, axis=0)


def summarize_counts(counts, model_name: str, m: int, n: int, seed: int, scaling: str,
                     norm: float) -> MonteCarloSummary:
    counts = np.asarray(counts)
    acc = StreamingCovariance(m)
    for s, c in _chunks(counts.shape[0], max(1, counts.shape[0] // 4096)):
        acc.update(counts[s:s + c])
    mean = counts.sum(axis=0) / counts.shape[0]
    scaled = (counts - n / m) / norm
    if counts.shape[0] >= 2:
        cov = acc.covariance / norm**2
    else:
        cov = np.full((m, m), np.nan)
    return MonteCarloSummary(model_name, m, n, counts.shape[0], seed, scaling, mean, cov,
                             jackknife_cov_se(scaled))


def run_replicates(model, m: int, n: int, replicates: int, seed: int, scaling: Optional[str] = None,
                   threads: int = 1, offspring=None) -> MonteCarloSummary:
    """Mean counts and the covariance of ``(X - n/m) / norm`` over independent
    replicates, where ``norm`` is ``sqrt(n)``, ``sqrt(n log n)`` or ``n^alpha``
    according to the regime."""
    model = _as_model(model, offspring)
    if replicates < 2:
        raise ConfigError("need at least two replicates for a covariance")
    expected = default_scaling(model, m)
    scaling = scaling or expected
    if scaling not in SCALINGS:
        raise ConfigError(f"unknown scaling {scaling!r}; choose from {SCALINGS}")
    if scaling != expected:
        regime, _ = regime_of(model, m)
        raise ConfigError(
            f"scaling {scaling!r} does not match the {regime.value} regime of "
            f"{model_label(model)} with m={m} (use {expected!r})"
        )
    norm = scaling_norm(scaling, n, model.kind, m)
    counts = simulate_counts(model, m, n, replicates, seed, threads)
    return summarize_counts(counts, model_label(model), int(m), int(n), seed, scaling, norm)


def fit_variance_exponent(points: Sequence, min_n: float = MIN_FIT_N) -> ScalingFit:
    """Least-squares slope of ``log Var`` against ``log n``; sizes below
    ``min_n`` are dropped first."""
    pts = [(float(a), float(b)) for a, b in points]
    if len(pts) < 4:
        raise DataError(f"need at least 4 points, got {len(pts)}")
    if any(v <= 0 or not math.isfinite(v) for _, v in pts):
        raise DataError("variances must be positive and finite")
    pts = sorted(p for p in pts if p[0] >= min_n)
    ns = np.array([p[0] for p in pts])
    vs = np.array([p[1] for p in pts])
    if ns.size < 4:
        raise DataError(f"fewer than 4 points with n >= {min_n:g}")
    if np.any(np.diff(ns) <= 0):
        raise DataError("sizes must be distinct")
    if math.log10(ns[-1] / ns[0]) < 2 - 1e-9:
        raise DataError("sizes must span at least two decades")
    x, y = np.log(ns), np.log(vs)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    tot = np.sum((y - y.mean()) ** 2)
    r2 = 1.0 - float(np.sum(resid**2) / tot) if tot > 0 else 1.0
    return ScalingFit(ns, vs, float(slope), r2)


def _var_se(x):
    r = x.size
    d = x - x.mean()
    return math.sqrt(max(float(np.sum(d**4)) / r - (float(np.sum(d**2)) / r) ** 2, 0.0) / r)


def variance_scaling(model, m: int, ns: Sequence[int], replicates, seed: int, threads: int = 1,
                     offspring=None, min_n: float = MIN_FIT_N) -> ScalingFit:
    """Estimate ``Var X_0`` at each size and fit its growth exponent.

    ``replicates`` is one count or one count per size; size ``i`` uses seed
    ``seed + i``.
    """
    model = _as_model(model, offspring)
    reps = list(replicates) if np.ndim(replicates) else [int(replicates)] * len(ns)
    if len(reps) != len(ns):
        raise ConfigError("need one replicate count per size")
    variances, ses = [], []
    for i, (n, r) in enumerate(zip(ns, reps)):
        x0 = simulate_counts(model, m, n, r, seed + i, threads)[:, 0].astype(float)
        variances.append(float(np.var(x0, ddof=1)))
        ses.append(_var_se(x0))
    fit = fit_variance_exponent(list(zip(ns, variances)), min_n=min_n)
    fit.ns = np.asarray(ns)
    fit.variances = np.asarray(variances)
    fit.variance_se = np.asarray(ses)
    return fit


def mode_power(counts, k: int, n: int) -> np.ndarray:
    """Per-replicate ``|hat X(k)|^2 / n``."""
    c = np.asarray(counts, dtype=float)
    m = c.shape[1]
    w = np.exp(2j * np.pi * ((k * np.arange(m)) % m) / m)
    return np.abs(c @ w) ** 2 / n


def mode_variance_estimate(model, m: int, k: int, n: int, replicates: int, seed: int,
                           threads: int = 1, offspring=None, return_se: bool = False):
    """Empirical ``E|hat X(k)|^2 / n``; compare with the Fourier-mode limit
    variance in the small regime."""
    model = _as_model(model, offspring)
    if int(k) != k or not 1 <= k <= m - 1:
        raise InvalidModeError(f"mode must lie in 1..{m - 1}, got {k!r}")
    regime, _ = regime_of(model, m)
    if regime is not Regime.SMALL:
        raise ConfigError(
            f"{model_label(model)} with m={m} is in the {regime.value} regime; "
            "mode variances are only defined in the small regime"
        )
    p = mode_power(simulate_counts(model, m, n, replicates, seed, threads), k, n)
    est = float(p.mean())
    if return_se:
        return est, float(p.std(ddof=1) / math.sqrt(p.size))
    return est
