"""Joint moments of the complex fixed-point limits in the large regime.

For RRT, ``Z = U^w (Z + w Z')``; for BST, ``Z = w U^{2w-1} (Z + Z')``, with
``E Z = 1`` in both cases.  Raising either equation to the power
``Z^a conj(Z)^b`` and taking expectations (using ``E U^s = 1/(1+s)``) gives
each ``m_{a,b} = E Z^a conj(Z)^b`` in terms of moments of lower total
degree.  The rescaled limit ``Zhat`` follows from
``Z = (m/2) kappa W^lam Zhat`` with ``W ~ Exp(1)`` and ``E W^s = Gamma(1+s)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .errors import DegenerateParameterError, DomainError, InvalidModulusError, RegimeError
from .urn import Regime, classify_regime

# Lanczos approximation, g = 7, 9 coefficients
_LANCZOS_G = 7
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2 * math.pi)


def complex_gamma(z) -> complex:
    """Gamma function for complex arguments (Lanczos, with reflection for
    ``Re z < 1/2``)."""
    z = complex(z)
    if z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real):
        raise DomainError(f"Gamma has a pole at {z.real:g}")
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * complex_gamma(1 - z))
    z -= 1
    x = _LANCZOS_COEF[0]
    for i in range(1, _LANCZOS_G + 2):
        x += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _SQRT_2PI * t ** (z + 0.5) * cmath.exp(-t) * x


@dataclass(frozen=True)
class MomentTable:
    model: str
    m: int
    max_degree: int
    entries: dict = field(default_factory=dict)
    hat_entries: dict = field(default_factory=dict)

    def __getitem__(self, ab):
        return self.entries[ab]

    def hat(self, a, b):
        return self.hat_entries[(a, b)]


def _large_regime(model, m):
    if int(m) != m or m < 2:
        raise InvalidModulusError(f"modulus must be an integer >= 2, got {m!r}")
    cls = classify_regime(model, m)
    if cls.regime is not Regime.LARGE:
        raise RegimeError(
            f"{cls.model} with m={m} is in the {cls.regime.value} regime; "
            "the fixed-point limit only exists in the large regime"
        )
    return cls.model, cmath.exp(2j * math.pi / m)


def _z_entries(model, m, max_degree):
    model, w = _large_regime(model, m)
    if max_degree < 1:
        raise ValueError("max_degree must be at least 1")
    wc = w.conjugate()
    mom = {(0, 0): 1 + 0j, (1, 0): 1 + 0j, (0, 1): 1 + 0j}
    for d in range(2, max_degree + 1):
        for a in range(d, -1, -1):
            b = d - a
            # sum over splits (i, j) of the binomial expansion, leaving out
            # the two terms that contain m_{a,b} itself
            acc = 0j
            for i in range(a + 1):
                for j in range(b + 1):
                    if (i, j) in ((0, 0), (a, b)):
                        continue
                    term = comb(a, i) * comb(b, j) * mom[(i, j)] * mom[(a - i, b - j)]
                    if model == "rrt":
                        # (Z + w Z')^a: Z' carries the factor w
                        term *= w ** (a - i) * wc ** (b - j)
                    acc += term
            if model == "rrt":
                s = a * w + b * wc
                rot = w**a * wc**b
                denom = s - rot
                rhs = acc
            else:
                lam = 2 * w - 1
                s = a * lam + b * lam.conjugate()
                rot = w**a * wc**b
                denom = 1 + s - 2 * rot
                rhs = rot * acc
            if abs(denom) < 1e-12:
                raise DegenerateParameterError(f"vanishing recursion denominator at ({a},{b})")
            mom[(a, b)] = rhs / denom
    return model, w, mom


def _hat(model, m, w, mom):
    if model == "rrt":
        kappa, lam = 1 + 0j, w
    else:
        kappa = lam = 2 * w - 1
    out = {}
    for (a, b), v in mom.items():
        scale = (m / 2) ** (a + b) * kappa**a * kappa.conjugate() ** b
        out[(a, b)] = v / (scale * complex_gamma(1 + a * lam + b * lam.conjugate()))
    return out


def z_moments(model: str, m: int, max_degree: int = 3) -> MomentTable:
    model, _, mom = _z_entries(model, m, max_degree)
    return MomentTable(model, int(m), max_degree, mom)


def zhat_moments(model: str, m: int, max_degree: int = 3) -> MomentTable:
    model, w, mom = _z_entries(model, m, max_degree)
    return MomentTable(model, int(m), max_degree, mom, _hat(model, m, w, mom))


@dataclass(frozen=True)
class OscillationReport:
    model: str
    m: int
    c2: complex
    c11: float
    c3: complex
    oscillates: bool


def oscillation_check(model: str, m: int, tol: float = 1e-12) -> OscillationReport:
    """Second and third central moments of ``Zhat``.  A limit law of a single
    class count along all subsequences would force either
    ``|E(Zhat-EZhat)^2| == E|Zhat-EZhat|^2`` or a vanishing third central
    moment; neither holding means the fluctuations genuinely oscillate."""
    t = zhat_moments(model, m, 3)
    h1, h2, h11, h3 = t.hat(1, 0), t.hat(2, 0), t.hat(1, 1), t.hat(3, 0)
    c2 = h2 - h1 * h1
    c11 = (h11 - abs(h1) ** 2).real
    c3 = h3 - 3 * h2 * h1 + 2 * h1**3
    oscillates = abs(c2) < c11 - tol and abs(c3) > tol * max(1.0, abs(h3))
    return OscillationReport(t.model, int(m), c2, c11, c3, bool(oscillates))


def fixed_point_population(model: str, m: int, particles: int = 100_000, iterations: int = 60,
                           seed: int = 0, groups: int = 20):
    """Simulate the fixed-point law by population dynamics.

    The particles are split into ``groups`` independent sub-populations.
    Each generation replaces a population by ``T(Z, Z')`` with ``Z, Z'``
    resampled from it and a fresh uniform ``U``.  The equation fixes ``Z``
    only up to a complex scale, so every generation but the last is rescaled
    to empirical mean 1.  Returns the final populations as a
    ``(groups, particles // groups)`` array.
    """
    model, w = _large_regime(model, m)
    rng = np.random.default_rng(seed)
    size = particles // groups
    z = np.ones((groups, size), dtype=complex)
    rows = np.arange(groups)[:, None]
    for it in range(iterations):
        i1 = rng.integers(0, size, (groups, size))
        i2 = rng.integers(0, size, (groups, size))
        logu = np.log1p(-rng.random((groups, size)))  # U in (0, 1]
        if model == "rrt":
            z = np.exp(w * logu) * (z[rows, i1] + w * z[rows, i2])
        else:
            z = w * np.exp((2 * w - 1) * logu) * (z[rows, i1] + z[rows, i2])
        if it < iterations - 1:
            z /= z.mean(axis=1, keepdims=True)
    return z
