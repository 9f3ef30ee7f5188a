"""Depth sequences of random recursive trees, binary search trees and
conditioned Galton-Watson trees, plus an exact enumeration oracle.

Every generator is a pure function of its parameters and ``(seed, replicate)``.
Replicate ``r`` of seed ``s`` draws from the Philox4x64 stream keyed by
``(s mod 2**64, r)``, so results never depend on execution order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import permutations
from typing import Optional

import numpy as np

from ._backend import kernels
from .errors import (
    EnumerationBudgetError,
    FeasibilityError,
    InvalidModulusError,
    InvalidSizeError,
    OffspringError,
    SamplingBudgetError,
    UnsupportedModelError,
)

REJECTION_CAP = 10**6
ENUMERATION_MAX_N = 9

_MASK64 = (1 << 64) - 1


def _check_size(n):
    if int(n) != n or n < 1:
        raise InvalidSizeError(f"tree size must be a positive integer, got {n!r}")
    return int(n)


def _check_modulus(m):
    if int(m) != m or m < 2:
        raise InvalidModulusError(f"modulus must be an integer >= 2, got {m!r}")
    return int(m)


def _tail_sums(pmf):
    # summing from the far end keeps small tails accurate
    return np.cumsum(pmf[::-1])[::-1]


@dataclass(frozen=True)
class OffspringDistribution:
    """Critical offspring law given as a finite pmf table over ``0..K``.

    The infinite-support presets are truncated where the pmf underflows to
    zero in double precision, so the discarded mass is below 1e-300.
    """

    kind: str
    pmf: np.ndarray = field(repr=False, compare=False)

    def __post_init__(self):
        p = np.asarray(self.pmf, dtype=float)
        if p.ndim != 1 or p.size == 0 or not np.all(np.isfinite(p)):
            raise OffspringError("pmf must be a finite 1-d table")
        if np.any(p < 0):
            raise OffspringError("pmf entries must be nonnegative")
        p = np.trim_zeros(p, "b")
        if abs(p.sum() - 1.0) > 1e-12:
            raise OffspringError(f"pmf sums to {p.sum()!r}, not 1")
        k = np.arange(p.size)
        mean = float(np.dot(k, p))
        if abs(mean - 1.0) > 1e-12:
            raise OffspringError(f"offspring mean is {mean!r}; a critical law needs mean 1")
        var = float(np.dot((k - mean) ** 2, p))
        if not var > 0:
            raise OffspringError("offspring variance must be positive")
        p.setflags(write=False)
        object.__setattr__(self, "pmf", p)

    @property
    def mean(self) -> float:
        return float(np.dot(np.arange(self.pmf.size), self.pmf))

    @property
    def variance(self) -> float:
        k = np.arange(self.pmf.size)
        return float(np.dot((k - self.mean) ** 2, self.pmf))

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.pmf > 0)

    @property
    def span(self) -> int:
        """gcd of the differences of support points."""
        s = self.support
        return int(reduce(math.gcd, (int(v - s[0]) for v in s[1:]), 0))

    def is_attainable(self, n: int) -> bool:
        # 0 is always in the support of a critical nondegenerate law,
        # so sum(xi) = n - 1 forces n - 1 to be a multiple of the span
        return (n - 1) % self.span == 0

    @classmethod
    def poisson1(cls):
        k = np.arange(200)
        logp = -1.0 - np.array([math.lgamma(i + 1.0) for i in k])
        p = np.exp(logp)
        return cls("poisson1", p[p > 0])

    @classmethod
    def geometric_half(cls):
        k = np.arange(1100)
        p = np.ldexp(1.0, -(k + 1))
        return cls("geometric-half", p[p > 0])

    @classmethod
    def binomial2_half(cls):
        return cls("binomial2-half", np.array([0.25, 0.5, 0.25]))

    @classmethod
    def two_point_02(cls):
        return cls("twopoint-0-2", np.array([0.5, 0.0, 0.5]))

    @classmethod
    def custom(cls, pmf):
        return cls("custom", np.asarray(pmf, dtype=float))

    @classmethod
    def from_name(cls, name: str):
        presets = {
            "poisson1": cls.poisson1,
            "geometric-half": cls.geometric_half,
            "binomial2-half": cls.binomial2_half,
            "twopoint-0-2": cls.two_point_02,
        }
        key = name.lower().replace("_", "-")
        if key.startswith("custom:"):
            return cls.custom([float(v) for v in key[len("custom:"):].split(",")])
        try:
            return presets[key]()
        except KeyError:
            raise OffspringError(
                f"unknown offspring law {name!r}; choose from {sorted(presets)} or custom:p0,p1,..."
            ) from None


@dataclass(frozen=True)
class TreeModel:
    kind: str  # "rrt", "bst" or "cgwt"
    offspring: Optional[OffspringDistribution] = None

    def __post_init__(self):
        if self.kind not in ("rrt", "bst", "cgwt"):
            raise UnsupportedModelError(f"unknown tree model {self.kind!r}")
        if self.kind == "cgwt" and self.offspring is None:
            raise OffspringError("a conditioned Galton-Watson tree needs an offspring law")

    @classmethod
    def rrt(cls):
        return cls("rrt")

    @classmethod
    def bst(cls):
        return cls("bst")

    @classmethod
    def cgwt(cls, offspring: OffspringDistribution):
        return cls("cgwt", offspring)


def is_depth_sequence(depths) -> bool:
    """Root first at depth 0, exactly one root, and no gaps between levels."""
    d = np.asarray(depths)
    if d.size == 0 or d[0] != 0 or np.count_nonzero(d == 0) != 1 or d.min() < 0:
        return False
    return bool(np.all(np.bincount(d) > 0))


def gen_rrt_depths(n: int, seed: int, replicate: int = 0) -> np.ndarray:
    """Depths of a random recursive tree on ``n`` vertices, in insertion order."""
    n = _check_size(n)
    return kernels.rrt_depths(n, seed & _MASK64, replicate)


def gen_bst_depths(n: int, seed: int, replicate: int = 0) -> np.ndarray:
    """Depths of a random BST built from a uniform permutation of ``1..n``."""
    n = _check_size(n)
    return kernels.bst_depths(n, seed & _MASK64, replicate)


def _rejection_batch(n, offspring):
    # acceptance is roughly span / (sigma * sqrt(2 pi n))
    guess = 4.0 * math.sqrt(2 * math.pi * n * offspring.variance) / offspring.span
    return int(min(max(guess, 64), 1 << 16))


def sample_degree_counts(n: int, offspring: OffspringDistribution, rng: np.random.Generator,
                         cap: int = REJECTION_CAP) -> np.ndarray:
    """Counts ``N_k`` of an i.i.d. offspring sample of size ``n`` conditioned
    on ``sum(xi) == n - 1``.

    Each attempt draws the multinomial count vector of ``n`` i.i.d. values by
    sequential binomials; attempts are made in vectorised batches and the
    first accepted one (in attempt order) is returned.
    """
    p = offspring.pmf
    tails = _tail_sums(p)
    batch = _rejection_batch(n, offspring)
    tried = 0
    while tried < cap:
        size = min(batch, cap - tried)
        remaining = np.full(size, n, dtype=np.int64)
        total = np.zeros(size, dtype=np.int64)
        rows = []
        for k in range(p.size):
            if p[k] == 0:
                rows.append(np.zeros(size, dtype=np.int64))
                continue
            q = 1.0 if k == p.size - 1 else min(1.0, p[k] / tails[k])
            nk = rng.binomial(remaining, q)
            rows.append(nk)
            remaining -= nk
            total += k * nk
            if not remaining.any():
                break
        ok = np.flatnonzero((total == n - 1) & (remaining == 0))
        tried += size
        if ok.size:
            i = ok[0]
            counts = np.zeros(p.size, dtype=np.int64)
            for k, row in enumerate(rows):
                counts[k] = row[i]
            return counts
    raise SamplingBudgetError(
        f"no degree sequence with sum {n - 1} in {cap} attempts (n={n}, {offspring.kind})"
    )


def _cgwt_stream(seed, replicate):
    key = ((replicate & _MASK64) << 64) | (seed & _MASK64)
    return np.random.Generator(np.random.Philox(key=key))


def gen_cgwt(n: int, offspring: OffspringDistribution, seed: int, replicate: int = 0,
             cap: int = REJECTION_CAP):
    """Return ``(excursion, depths)`` for a conditioned Galton-Watson tree.

    ``excursion`` lists child counts in preorder; its Lukasiewicz path
    first reaches -1 at step ``n``.
    """
    n = _check_size(n)
    if not offspring.is_attainable(n):
        raise FeasibilityError(
            f"size {n} is unattainable: offspring span {offspring.span} must divide n - 1"
        )
    rng = _cgwt_stream(seed, replicate)
    counts = sample_degree_counts(n, offspring, rng, cap=cap)
    multiset = np.repeat(np.arange(counts.size, dtype=np.int64), counts)
    return kernels.cgwt_walk(multiset, seed & _MASK64, replicate)


def gen_cgwt_depths(n: int, offspring: OffspringDistribution, seed: int, replicate: int = 0,
                    cap: int = REJECTION_CAP) -> np.ndarray:
    return gen_cgwt(n, offspring, seed, replicate, cap)[1]


def gen_depths(model: TreeModel, n: int, seed: int, replicate: int = 0) -> np.ndarray:
    if model.kind == "rrt":
        return gen_rrt_depths(n, seed, replicate)
    if model.kind == "bst":
        return gen_bst_depths(n, seed, replicate)
    return gen_cgwt_depths(n, model.offspring, seed, replicate)


# -- exact enumeration -------------------------------------------------------

def _rrt_histories(n):
    depths = [0]

    def grow():
        if len(depths) == n:
            yield depths
            return
        for parent in range(len(depths)):
            depths.append(depths[parent] + 1)
            yield from grow()
            depths.pop()

    yield from grow()


def _bst_insertion_depths(keys):
    left, right, depths = {}, {}, [0]
    root = keys[0]
    for key in keys[1:]:
        cur, d = root, 1
        while True:
            side = left if key < cur else right
            if cur not in side:
                side[cur] = key
                break
            cur = side[cur]
            d += 1
        depths.append(d)
    return depths


def _mod_counts(depths, m):
    c = [0] * m
    for d in depths:
        c[d % m] += 1
    return tuple(c)


def enumerate_exact_mod_counts(model: TreeModel, n: int, m: int) -> dict:
    """Exact law of the depth-mod-``m`` count vector by exhausting all growth
    histories (RRT: ``(n-1)!`` attachment sequences, BST: ``n!`` insertion
    orders), each weighted by its exact probability.
    """
    n = _check_size(n)
    m = _check_modulus(m)
    if model.kind == "cgwt":
        raise UnsupportedModelError("exact enumeration covers only RRT and BST")
    if n > ENUMERATION_MAX_N:
        raise EnumerationBudgetError(f"n={n} exceeds the enumeration limit {ENUMERATION_MAX_N}")
    tally: dict = {}
    if model.kind == "rrt":
        weight = Fraction(1, math.factorial(n - 1))
        for depths in _rrt_histories(n):
            key = _mod_counts(depths, m)
            tally[key] = tally.get(key, 0) + weight
    else:
        weight = Fraction(1, math.factorial(n))
        for keys in permutations(range(n)):
            key = _mod_counts(_bst_insertion_depths(keys), m)
            tally[key] = tally.get(key, 0) + weight
    return tally
