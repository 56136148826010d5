import itertools

import numpy as np
import pytest

from models.environments import environment_names, make_environment
from models.errors import InvalidParameterError, MismatchedOutcomeSpaceError, TooLargeError
from models.mnl_instance import MnlInstance
from utils.oracle import (
    ExactDistribution,
    best_subset_bruteforce,
    enumerate_ranking_distribution,
    sample_histogram,
    tv_distance,
)


class TestEnumeration:
    def test_uniform_pairs(self, uniform4):
        dist = enumerate_ranking_distribution(uniform4, [0, 1, 2], 2)
        assert len(dist) == 6
        for sigma in dist.outcomes:
            assert dist[sigma] == pytest.approx(1 / 6)

    def test_g1_winner(self, g1):
        dist = enumerate_ranking_distribution(g1, [0, 1], 1)
        assert dist.probabilities == pytest.approx({(0,): 0.8, (1,): 0.2})

    def test_outcome_count(self, geo):
        assert len(enumerate_ranking_distribution(geo, [0, 1, 2, 3], 2)) == 12

    def test_too_large(self, geo):
        with pytest.raises(TooLargeError):
            enumerate_ranking_distribution(geo, list(range(9)), 1)

    def test_bad_m(self, geo):
        with pytest.raises(InvalidParameterError):
            enumerate_ranking_distribution(geo, [0, 1], 3)

    @pytest.mark.parametrize("name", environment_names())
    def test_agrees_with_ranking_prob(self, name):
        inst = MnlInstance(make_environment(name).theta[:5], name=name)
        for size in range(1, 6):
            subset = list(range(size))
            for m in range(1, size + 1):
                dist = enumerate_ranking_distribution(inst, subset, m)
                for sigma in itertools.permutations(subset, m):
                    assert dist[sigma] == pytest.approx(inst.ranking_prob(sigma, subset), abs=1e-12)

    def test_distribution_must_sum_to_one(self):
        with pytest.raises(InvalidParameterError):
            ExactDistribution({'A': 0.5, 'B': 0.4})


class TestBestSubset:
    def test_winner_is_best_item(self, geo):
        assert best_subset_bruteforce(geo, 4, "winner") == [0]

    def test_g4_top_six(self, g4):
        assert best_subset_bruteforce(g4, 6, "top-k") == [0, 1, 2, 3, 4, 5]

    def test_ties_follow_lowest_index(self):
        inst = MnlInstance((1.0, 2.0, 2.0, 1.0))
        assert best_subset_bruteforce(inst, 1, "top-k") == inst.top_k_set(1) == [1]
        assert best_subset_bruteforce(inst, 3, "top-k") == sorted(inst.top_k_set(3)) == [0, 1, 2]

    def test_too_many_items(self):
        with pytest.raises(TooLargeError):
            best_subset_bruteforce(make_environment("geob"), 2, "top-k")

    def test_unknown_objective(self, g1):
        with pytest.raises(InvalidParameterError):
            best_subset_bruteforce(g1, 2, "borda")


class TestTvDistance:
    def test_hand_example(self):
        exact = ExactDistribution({'A': 0.5, 'B': 0.5})
        assert tv_distance({'A': 0.6, 'B': 0.4}, exact) == pytest.approx(0.1)

    def test_identical(self):
        exact = ExactDistribution({'A': 0.25, 'B': 0.75})
        assert tv_distance({'A': 1, 'B': 3}, exact) == pytest.approx(0.0)

    def test_disjoint_point_masses(self):
        exact = ExactDistribution({'A': 1.0, 'B': 0.0})
        assert tv_distance({'B': 7}, exact) == pytest.approx(1.0)

    def test_mismatched_outcomes(self):
        with pytest.raises(MismatchedOutcomeSpaceError):
            tv_distance({'C': 1}, ExactDistribution({'A': 1.0}))

    def test_empty_histogram(self):
        with pytest.raises(InvalidParameterError):
            tv_distance({}, ExactDistribution({'A': 1.0}))

    def test_sampler_matches_enumeration(self, geo):
        subset = [0, 1, 2, 3]
        counts = sample_histogram(geo, subset, 2, 20000, np.random.default_rng(2024))
        assert tv_distance(counts, enumerate_ranking_distribution(geo, subset, 2)) < 0.03
