from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from depthmod import treegen
from depthmod.errors import (
    EnumerationBudgetError,
    FeasibilityError,
    InvalidSizeError,
    OffspringError,
    SamplingBudgetError,
    UnsupportedModelError,
)
from depthmod.treegen import OffspringDistribution, TreeModel


def test_golden_depths():
    # frozen outputs: any change to stream layout shows up here
    assert treegen.gen_rrt_depths(12, 7).tolist() == [0, 1, 1, 2, 2, 1, 3, 2, 3, 1, 3, 2]
    assert treegen.gen_bst_depths(12, 7).tolist() == [0, 1, 2, 1, 2, 3, 3, 4, 4, 3, 4, 5]
    exc, depths = treegen.gen_cgwt(12, OffspringDistribution.poisson1(), 7)
    assert exc.tolist() == [2, 0, 2, 2, 1, 1, 1, 0, 1, 1, 0, 0]
    assert depths.tolist() == [0, 1, 1, 2, 3, 4, 5, 6, 3, 4, 5, 2]


@given(n=st.integers(1, 300), seed=st.integers(0, 2**64 - 1), rep=st.integers(0, 50))
@settings(max_examples=60, deadline=None)
def test_rrt_and_bst_give_depth_sequences(n, seed, rep):
    for gen in (treegen.gen_rrt_depths, treegen.gen_bst_depths):
        d = gen(n, seed, rep)
        assert d.size == n and treegen.is_depth_sequence(d)
        assert np.array_equal(d, gen(n, seed, rep))


def test_bst_depth_shape():
    d = treegen.gen_bst_depths(200, 3)
    # at most 2^k vertices at depth k
    counts = np.bincount(d)
    assert all(c <= 2**k for k, c in enumerate(counts))


@given(n=st.integers(1, 200), seed=st.integers(0, 10**6),
       law=st.sampled_from(["poisson1", "geometric-half", "binomial2-half"]))
@settings(max_examples=40, deadline=None)
def test_cgwt_excursion(n, seed, law):
    off = OffspringDistribution.from_name(law)
    exc, depths = treegen.gen_cgwt(n, off, seed)
    walk = np.cumsum(exc - 1)
    assert exc.size == n and walk[-1] == -1 and np.all(walk[:-1] >= 0)
    assert treegen.is_depth_sequence(depths)
    # depth d + 1 vertices equal total children of depth d vertices
    kids = np.bincount(depths, weights=exc, minlength=depths.max() + 2)
    assert np.array_equal(np.bincount(depths, minlength=depths.max() + 2)[1:], kids[:-1].astype(int))


def test_twopoint_feasibility():
    off = OffspringDistribution.two_point_02()
    assert off.span == 2 and off.is_attainable(11) and not off.is_attainable(10)
    with pytest.raises(FeasibilityError):
        treegen.gen_cgwt(10, off, 0)
    exc, _ = treegen.gen_cgwt(11, off, 0)
    assert set(exc.tolist()) <= {0, 2}


def test_offspring_validation():
    assert OffspringDistribution.poisson1().variance == pytest.approx(1.0, abs=1e-12)
    assert OffspringDistribution.geometric_half().variance == pytest.approx(2.0, abs=1e-12)
    assert OffspringDistribution.binomial2_half().variance == 0.5
    assert OffspringDistribution.from_name("custom:0.5,0,0.5").span == 2
    with pytest.raises(OffspringError):
        OffspringDistribution.custom([0.2, 0.8])  # subcritical
    with pytest.raises(OffspringError):
        OffspringDistribution.custom([0, 1])  # degenerate
    with pytest.raises(OffspringError):
        OffspringDistribution.from_name("zipf")


def test_rejection_budget():
    rng = np.random.default_rng(0)
    with pytest.raises(SamplingBudgetError):
        treegen.sample_degree_counts(10**6, OffspringDistribution.poisson1(), rng, cap=1)


def test_degree_counts_conditioned_sum():
    rng = np.random.default_rng(1)
    off = OffspringDistribution.geometric_half()
    for _ in range(5):
        c = treegen.sample_degree_counts(500, off, rng)
        assert c.sum() == 500 and (np.arange(c.size) * c).sum() == 499


def test_bad_sizes():
    with pytest.raises(InvalidSizeError):
        treegen.gen_rrt_depths(0, 1)
    with pytest.raises(UnsupportedModelError):
        TreeModel("avl")


def test_enumeration_small_cases():
    # n=3 RRT: path (0,1,2) or cherry (0,1,1), each with probability 1/2
    law = treegen.enumerate_exact_mod_counts(TreeModel.rrt(), 3, 2)
    assert law == {(2, 1): Fraction(1, 2), (1, 2): Fraction(1, 2)}
    # n=3 BST: balanced for the 2 permutations with the middle key first
    law = treegen.enumerate_exact_mod_counts(TreeModel.bst(), 3, 3)
    assert law == {(1, 2, 0): Fraction(1, 3), (1, 1, 1): Fraction(2, 3)}
    for model in (TreeModel.rrt(), TreeModel.bst()):
        for n in range(1, 8):
            assert sum(treegen.enumerate_exact_mod_counts(model, n, 2).values()) == 1
    with pytest.raises(EnumerationBudgetError):
        treegen.enumerate_exact_mod_counts(TreeModel.rrt(), 12, 2)


def test_enumeration_matches_generators():
    law = treegen.enumerate_exact_mod_counts(TreeModel.bst(), 5, 2)
    R = 20000
    seen = {}
    for r in range(R):
        key = tuple(np.bincount(treegen.gen_bst_depths(5, 99, r) % 2, minlength=2))
        seen[key] = seen.get(key, 0) + 1
    for key, p in law.items():
        assert abs(seen.get(key, 0) / R - float(p)) < 5 * np.sqrt(float(p) / R) + 1e-3
