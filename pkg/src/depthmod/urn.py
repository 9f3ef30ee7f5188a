"""Urn-space simulation of depth-mod-m counts, replacement matrices and
regime classification.

RRT urn: one ball labelled 0; each draw returns the ball and adds one ball
with the next label (mod m).  BST urn: balls are external positions; a drawn
ball becomes an internal vertex of its label and is replaced by two balls
with the next label.  Both run in O(n m) time with O(m) integer state.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import InvalidModulusError, InvalidSizeError, UnsupportedModelError

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class ModDepthCounts:
    counts: tuple

    def __post_init__(self):
        c = tuple(int(v) for v in self.counts)
        if len(c) < 2 or min(c) < 0:
            raise ValueError(f"invalid count vector {self.counts!r}")
        object.__setattr__(self, "counts", c)

    @property
    def m(self) -> int:
        return len(self.counts)

    @property
    def n(self) -> int:
        return sum(self.counts)

    def __iter__(self):
        return iter(self.counts)

    def __getitem__(self, j):
        return self.counts[j]

    def __len__(self):
        return len(self.counts)


class Regime(str, enum.Enum):
    SMALL = "small"
    CRITICAL = "critical"
    LARGE = "large"


@dataclass(frozen=True)
class RegimeClassification:
    model: str
    m: int
    regime: Regime
    lambda2: complex

    @property
    def alpha(self) -> float:
        return self.lambda2.real

    @property
    def beta(self) -> float:
        return self.lambda2.imag


def _check(m, n=None):
    if int(m) != m or m < 2:
        raise InvalidModulusError(f"modulus must be an integer >= 2, got {m!r}")
    if n is not None and (int(n) != n or n < 1):
        raise InvalidSizeError(f"n must be a positive integer, got {n!r}")


def _urn_model(model):
    key = str(model).lower().removesuffix("-urn")
    if key not in ("rrt", "bst"):
        raise UnsupportedModelError(f"no urn for model {model!r}")
    return key


def simulate_rrt_urn(m: int, n: int, seed: int, replicate: int = 0) -> ModDepthCounts:
    _check(m, n)
    row = kernels.rrt_urn(int(m), int(n), seed & _MASK64, replicate, 1)[0]
    return ModDepthCounts(tuple(row))


def simulate_bst_urn(m: int, n: int, seed: int, replicate: int = 0) -> ModDepthCounts:
    """Internal-vertex counts after ``n`` insertions."""
    return ModDepthCounts(tuple(bst_urn_state(m, n, seed, replicate)[0]))


def bst_urn_state(m: int, n: int, seed: int, replicate: int = 0):
    """``(internal, external)`` count vectors of the BST urn after ``n`` steps."""
    _check(m, n)
    x, y = kernels.bst_urn(int(m), int(n), seed & _MASK64, replicate, 1)
    return x[0], y[0]


def urn_counts(model: str, m: int, n: int, seed: int, start: int, replicates: int) -> np.ndarray:
    """Count vectors for replicates ``start .. start+replicates-1`` as an
    ``(replicates, m)`` integer array."""
    _check(m, n)
    key = _urn_model(model)
    if key == "rrt":
        return kernels.rrt_urn(int(m), int(n), seed & _MASK64, start, replicates)
    return kernels.bst_urn(int(m), int(n), seed & _MASK64, start, replicates)[0]


def erika_residual(internal, external) -> np.ndarray:
    """``2 X[j-1] - X[j] - Y[j] + [j == 0]`` for every class; zero on every
    reachable BST urn state."""
    x = np.asarray(internal, dtype=np.int64)
    y = np.asarray(external, dtype=np.int64)
    r = 2 * np.roll(x, 1) - x - y
    r[0] += 1
    return r


def replacement_matrix(model: str, m: int) -> np.ndarray:
    """RRT: ``A[i, j] = [i == j+1]``; BST: ``A[i, j] = 2[i == j+1] - [i == j]``
    (indices mod m).  Column ``j`` lists the balls added per draw of label j."""
    _check(m)
    key = _urn_model(model)
    shift = np.roll(np.eye(m, dtype=np.int64), 1, axis=0)
    if key == "rrt":
        return shift
    return 2 * shift - np.eye(m, dtype=np.int64)


def replacement_spectrum(model: str, m: int) -> np.ndarray:
    """Eigenvalues ``hat a(j) = sum_k a_k w^{jk}`` of the circulant replacement
    matrix, from the DFT of its first column."""
    col = replacement_matrix(model, m)[:, 0].astype(float)
    k = np.arange(m)
    w = np.exp(2j * np.pi * np.outer(k, k) / m)
    return w @ col


def classify_regime(model: str, m: int) -> RegimeClassification:
    _check(m)
    key = _urn_model(model)
    w = cmath.exp(2j * math.pi / m)
    if key == "rrt":
        lam = w
        # cos(2 pi / m) against 1/2: m <= 5 below, m == 6 equal, m >= 7 above
        regime = Regime.SMALL if m <= 5 else Regime.CRITICAL if m == 6 else Regime.LARGE
    else:
        lam = 2 * w - 1
        # cos(2 pi / m) against 3/4, never equal for integer m
        regime = Regime.SMALL if m <= 8 else Regime.LARGE
    if m == 6 and key == "rrt":
        lam = complex(0.5, math.sqrt(3) / 2)
    return RegimeClassification(key, int(m), regime, lam)
