import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings, strategies as st

from models.errors import (
    ConfigError,
    InvalidParameterError,
    InvalidRankingError,
    InvalidScaleError,
    InvalidSubsetError,
    ItemIndexError,
)
from models.mnl_instance import MnlInstance

thetas = st.lists(st.floats(min_value=0.01, max_value=10.0, allow_nan=False), min_size=2, max_size=8)


class TestConstruction:
    def test_rejects_single_item(self):
        with pytest.raises(InvalidParameterError):
            MnlInstance((1.0,))

    @pytest.mark.parametrize("bad", [0.0, -0.5, math.inf, math.nan])
    def test_rejects_non_positive_or_non_finite(self, bad):
        with pytest.raises(InvalidParameterError):
            MnlInstance((1.0, bad))

    def test_is_immutable(self, g1):
        with pytest.raises(Exception):
            g1.theta = (1.0, 2.0)
        with pytest.raises(ValueError):
            g1.weights[0] = 5.0


class TestChoiceProb:
    def test_g1_pair(self, g1):
        assert g1.choice_prob(0, [0, 1]) == pytest.approx(0.8)

    def test_singleton_is_certain(self, g1):
        assert g1.choice_prob(3, [3]) == 1.0

    def test_uniform_subset(self, uniform4):
        for i in range(4):
            assert uniform4.choice_prob(i, [0, 1, 2, 3]) == pytest.approx(0.25)

    def test_item_outside_subset(self, g1):
        assert g1.choice_prob(2, [0, 1]) == 0.0

    def test_empty_subset(self, g1):
        with pytest.raises(InvalidSubsetError):
            g1.choice_prob(0, [])

    def test_out_of_range_item(self, g1):
        with pytest.raises(ItemIndexError):
            g1.choice_prob(16, [0, 1])
        with pytest.raises(IndexError):
            g1.choice_prob(0, [0, 99])

    @given(thetas, st.data())
    def test_probabilities_sum_to_one(self, theta, data):
        inst = MnlInstance(tuple(theta))
        subset = data.draw(st.lists(st.integers(0, inst.n - 1), min_size=1, unique=True))
        assert math.fsum(inst.choice_prob(i, subset) for i in subset) == pytest.approx(1.0, abs=1e-12)

    @given(thetas)
    def test_independence_of_irrelevant_alternatives(self, theta):
        inst = MnlInstance(tuple(theta))
        small = [0, 1]
        large = list(range(inst.n))
        ratio_small = inst.choice_prob(0, small) / inst.choice_prob(1, small)
        ratio_large = inst.choice_prob(0, large) / inst.choice_prob(1, large)
        assert ratio_small == pytest.approx(ratio_large, rel=1e-10)


class TestRankingProb:
    def test_g1_full_pair(self, g1):
        assert g1.ranking_prob([0, 1], [0, 1]) == pytest.approx(0.8)

    def test_g1_three_items(self, g1):
        assert g1.ranking_prob([1, 0], [0, 1, 2]) == pytest.approx(0.2 / 1.2 * 0.8 / 1.0)

    def test_uniform_pairs(self, uniform4):
        for sigma in itertools.permutations([0, 1, 2], 2):
            assert uniform4.ranking_prob(sigma, [0, 1, 2]) == pytest.approx(1 / 6)

    def test_rejects_duplicates(self, g1):
        with pytest.raises(InvalidRankingError):
            g1.ranking_prob([0, 0], [0, 1])

    def test_rejects_items_outside_subset(self, g1):
        with pytest.raises(InvalidRankingError):
            g1.ranking_prob([2], [0, 1])

    def test_sums_to_one(self, geo):
        subset = [0, 3, 5, 7]
        for m in range(1, 5):
            total = math.fsum(geo.ranking_prob(s, subset) for s in itertools.permutations(subset, m))
            assert total == pytest.approx(1.0, abs=1e-10)


class TestSampleTopM:
    def test_singleton(self, g1, rng):
        fb = g1.sample_top_m([4], 3, rng)
        assert fb.order == (4,)

    def test_clamps_m(self, g1, rng):
        fb = g1.sample_top_m([0, 1, 2], 10, rng)
        assert sorted(fb.order) == [0, 1, 2]

    def test_reproducible_under_seed(self, g1):
        a = g1.sample_top_m([0, 1, 2, 3], 2, np.random.default_rng(42))
        b = g1.sample_top_m([0, 1, 2, 3], 2, np.random.default_rng(42))
        assert a == b
        assert len(a.order) == 2

    def test_empty_subset(self, g1, rng):
        with pytest.raises(InvalidSubsetError):
            g1.sample_top_m([], 1, rng)

    def test_winner_frequency(self, g1):
        rng = np.random.default_rng(7)
        draws = 20000
        wins = sum(g1.sample_top_m([0, 1], 1, rng).winner == 0 for _ in range(draws))
        assert abs(wins / draws - 0.8) < 0.015


class TestScale:
    def test_identity(self, g1):
        assert g1.scale(1).theta == g1.theta

    def test_probabilities_unchanged(self, g1):
        scaled = g1.scale(5)
        assert scaled.choice_prob(0, [0, 1]) == pytest.approx(0.8)

    def test_gaps_scale_linearly(self, g1):
        assert g1.scale(5).winner_gap(1) == pytest.approx(3.0)

    @pytest.mark.parametrize("c", [0, -1, math.inf, "2"])
    def test_rejects_bad_factor(self, g1, c):
        with pytest.raises(InvalidScaleError):
            g1.scale(c)

    # integer-valued floats keep the products exact, so no new ties appear
    @given(st.lists(st.integers(1, 1000).map(float), min_size=2, max_size=8), st.integers(1, 1000).map(float))
    @hyp_settings(max_examples=50)
    def test_argmax_invariance(self, theta, c):
        inst = MnlInstance(tuple(theta))
        scaled = inst.scale(c)
        assert scaled.best_item == inst.best_item
        assert scaled.top_k_set(inst.n - 1) == inst.top_k_set(inst.n - 1)


class TestInstanceStats:
    def test_best_item(self, g1):
        assert g1.best_item == 0
        assert g1.has_unique_best

    def test_top_k_tie_break(self, g4):
        assert g4.top_k_set(3) == [0, 1, 2]
        assert g4.is_degenerate_for_top_k(5)
        assert not g4.is_degenerate_for_top_k(6)

    def test_gap_k(self, g4):
        assert g4.gap_k(6) == pytest.approx(0.2)
        assert g4.gap_k(5) == 0.0

    def test_winner_gaps(self, g1):
        gaps = g1.winner_gaps()
        assert gaps[0] == 0.0
        assert np.allclose(gaps[1:], 0.6)

    @given(thetas)
    def test_pair_probabilities_complement(self, theta):
        p = MnlInstance(tuple(theta)).pair_prob_matrix()
        assert np.allclose(p + p.T, 1.0)

    @given(thetas, st.data())
    def test_top_k_dominates(self, theta, data):
        inst = MnlInstance(tuple(theta))
        k = data.draw(st.integers(1, inst.n))
        top = inst.top_k_set(k)
        assert len(set(top)) == k
        rest = [i for i in range(inst.n) if i not in top]
        if rest:
            assert min(inst.theta[i] for i in top) >= max(inst.theta[i] for i in rest)


class TestSerialization:
    def test_text_round_trip(self, geo):
        parsed = MnlInstance.from_text(geo.to_text(), name="geo")
        assert parsed == geo

    def test_declared_n_must_match(self):
        with pytest.raises(ConfigError):
            MnlInstance.from_text("n = 3\ntheta = 1, 2\n")

    def test_missing_theta(self):
        with pytest.raises(ConfigError):
            MnlInstance.from_text("n = 3\n")
