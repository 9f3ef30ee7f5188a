"""Exact limit covariances of the depth-mod-m counts.

All three models give circulant covariance matrices, so a matrix is stored as
its first row.  For RRT and BST the row is characterised by its discrete
Fourier transform, ``hat c(j) = f(cos(2 pi j / m)) / m`` for ``j != 0`` and
``hat c(0) = 0``, with ``f`` a rational function.  Clearing the denominator of
``f`` turns that into a banded circulant linear system with integer
coefficients, which is solved in exact rational arithmetic.  The
floating-point eigen-sum over Fourier modes is kept as an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import numpy as np

from .errors import DepthModError, InvalidModeError, InvalidModulusError, RegimeError

PER_N = "n"
PER_N_LOG_N = "n log n"

# (a, b) pairs: the Fourier multiplier a + 2b cos(theta) applied as the
# circulant operator c -> a c_l + b (c_{l-1} + c_{l+1})
_RRT_DEN = (1, -1)      # 1 - 2 cos
_BST_DEN = (3, -2)      # 3 - 4 cos
_BST_EXT_NUM = (5, -2)  # 5 - 4 cos


@dataclass(frozen=True)
class CirculantCovariance:
    model: str
    m: int
    first_row: tuple  # Fractions, sigma^2 already applied for CGWT
    scale: str = PER_N
    sigma2: Fraction | None = None

    def denominator(self) -> int:
        return reduce(lambda a, b: a * b // math.gcd(a, b), (x.denominator for x in self.first_row), 1)

    def numerators(self) -> tuple:
        d = self.denominator()
        return tuple(int(x * d) for x in self.first_row)

    def format_row(self) -> str:
        """Common-denominator form, e.g. ``(2,1,-1,-2,-1,1)/36``."""
        return "(" + ",".join(str(v) for v in self.numerators()) + f")/{self.denominator()}"

    def entry_strings(self) -> list:
        """Each entry over the common denominator, e.g. ``["2/36", "1/36", ...]``."""
        d = self.denominator()
        return [f"{v}/{d}" for v in self.numerators()]

    def matrix(self) -> np.ndarray:
        row = np.array([float(x) for x in self.first_row])
        idx = (np.arange(self.m)[None, :] - np.arange(self.m)[:, None]) % self.m
        return row[idx]

    def exact_matrix(self) -> list:
        return [[self.first_row[(j - i) % self.m] for j in range(self.m)] for i in range(self.m)]

    def spectrum(self) -> np.ndarray:
        """Eigenvalues (real, since the row is symmetric)."""
        row = np.array([float(x) for x in self.first_row])
        return np.fft.fft(row).real


def _check_m(m, hi=None, model=""):
    if int(m) != m or m < 2:
        raise InvalidModulusError(f"modulus must be an integer >= 2, got {m!r}")
    if hi is not None and m > hi:
        raise RegimeError(
            f"{model} with m={m} is in the large regime: the counts have no Gaussian limit"
        )


def _circulant_operator(m, a, b):
    op = [[Fraction(0)] * m for _ in range(m)]
    for i in range(m):
        op[i][i] += a
        op[i][(i - 1) % m] += b
        op[i][(i + 1) % m] += b
    return op


def _apply(op, v):
    return [sum(r[j] * v[j] for j in range(len(v))) for r in op]


def solve_exact(a, b):
    """Solve ``a x = b`` over the rationals by Gauss-Jordan elimination."""
    n = len(b)
    aug = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise DepthModError("singular system")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n] for row in aug]


def _fourier_row(m, den, num=None):
    """First row whose Fourier coefficients are ``num(cos)/den(cos)/m`` off
    the zero mode and 0 at the zero mode."""
    centred = [Fraction(int(l == 0), m) - Fraction(1, m * m) for l in range(m)]
    rhs = centred if num is None else _apply(_circulant_operator(m, *num), centred)
    return tuple(solve_exact(_circulant_operator(m, *den), rhs))


def rrt_sigma(m: int) -> CirculantCovariance:
    _check_m(m, 6, "RRT")
    if m == 6:
        # only the modes j = 1, 5 survive: entries 2 cos(pi l / 3) / 36,
        # generated exactly by t_{l+1} = t_l - t_{l-1}
        t = [2, 1]
        while len(t) < m:
            t.append(t[-1] - t[-2])
        return CirculantCovariance("rrt", 6, tuple(Fraction(v, 36) for v in t), PER_N_LOG_N)
    return CirculantCovariance("rrt", int(m), _fourier_row(m, _RRT_DEN))


def bst_sigma(m: int) -> CirculantCovariance:
    _check_m(m, 8, "BST")
    return CirculantCovariance("bst", int(m), _fourier_row(m, _BST_DEN))


def bst_external_sigma(m: int) -> CirculantCovariance:
    _check_m(m, 8, "BST")
    return CirculantCovariance("bst-external", int(m), _fourier_row(m, _BST_DEN, _BST_EXT_NUM))


def cgwt_sigma(m: int, sigma2=1) -> CirculantCovariance:
    """``sigma2 * (m^2 - 1 - 6k(m-k)) / (12 m^2)`` at lag ``k``.

    ``sigma2`` is kept exact: ints and Fractions as given, floats via their
    exact binary value.
    """
    _check_m(m)
    s2 = Fraction(sigma2)
    if not s2 > 0:
        raise DepthModError(f"offspring variance must be positive, got {sigma2!r}")
    row = tuple(s2 * Fraction(m * m - 1 - 6 * k * (m - k), 12 * m * m) for k in range(m))
    return CirculantCovariance("cgwt", int(m), row, PER_N, s2)


def limit_sigma(model: str, m: int, sigma2=1) -> CirculantCovariance:
    model = model.lower()
    if model == "rrt":
        return rrt_sigma(m)
    if model == "bst":
        return bst_sigma(m)
    if model == "bst-external":
        return bst_external_sigma(m)
    if model == "cgwt":
        return cgwt_sigma(m, sigma2)
    raise DepthModError(f"unknown model {model!r}")


_GAUSSIAN_MAX = {"rrt": 5, "bst": 8, "bst-external": 8}


def fourier_limit_variance(model: str, k: int, m: int, sigma2: float = 1.0) -> float:
    """``E|V_k|^2`` for the limit of ``n^{-1/2} hat X(k)``.

    CGWT values carry the factor ``sigma2`` (1 for the standard examples).
    """
    model = model.lower()
    if int(m) != m or m < 2:
        raise InvalidModulusError(f"modulus must be an integer >= 2, got {m!r}")
    if int(k) != k or not 1 <= k <= m - 1:
        raise InvalidModeError(f"mode must lie in 1..{m - 1}, got {k!r}")
    if model in _GAUSSIAN_MAX and m > _GAUSSIAN_MAX[model]:
        raise RegimeError(f"{model} with m={m} is not in the small regime")
    c = math.cos(2 * math.pi * k / m)
    if model == "rrt":
        return 1.0 / (1.0 - 2.0 * c)
    if model == "bst":
        return 1.0 / (3.0 - 4.0 * c)
    if model == "bst-external":
        return (5.0 - 4.0 * c) / (3.0 - 4.0 * c)
    if model == "cgwt":
        return sigma2 / (2.0 - 2.0 * c)
    raise DepthModError(f"unknown model {model!r}")


def eigen_sum_row(model: str, m: int, sigma2: float = 1.0) -> np.ndarray:
    """Floating-point first row ``m^-2 sum_j g_j w^{jl}`` summed over modes,
    where ``g_j`` is the mode variance; RRT m=6 keeps only the critical modes
    with unit weight."""
    model = model.lower()
    w = np.exp(2j * np.pi / m)
    ls = np.arange(m)
    row = np.zeros(m, dtype=complex)
    for j in range(1, m):
        if model == "rrt" and m == 6:
            g = 1.0 if j in (1, 5) else 0.0
        else:
            g = fourier_limit_variance(model, j, m, sigma2)
        row += g * w ** (j * ls)
    return row.real / m**2
