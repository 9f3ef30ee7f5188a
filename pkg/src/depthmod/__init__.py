"""Depths modulo m in random recursive trees, binary search trees and
conditioned Galton-Watson trees: simulation, exact limit covariances and
fixed-point moments."""

from ._backend import BACKEND
from .covariance import CirculantCovariance, fourier_limit_variance, limit_sigma
from .errors import DepthModError, SamplingBudgetError
from .moments import oscillation_check, z_moments, zhat_moments
from .stats import run_replicates, variance_scaling
from .treegen import OffspringDistribution, TreeModel, gen_depths
from .urn import ModDepthCounts, Regime, classify_regime, simulate_bst_urn, simulate_rrt_urn

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CirculantCovariance",
    "DepthModError",
    "ModDepthCounts",
    "OffspringDistribution",
    "Regime",
    "SamplingBudgetError",
    "TreeModel",
    "classify_regime",
    "fourier_limit_variance",
    "gen_depths",
    "limit_sigma",
    "oscillation_check",
    "run_replicates",
    "simulate_bst_urn",
    "simulate_rrt_urn",
    "variance_scaling",
    "z_moments",
    "zhat_moments",
]
