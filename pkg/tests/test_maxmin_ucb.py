import numpy as np
import pytest

from models.errors import InsufficientPoolError, InvalidParameterError, InvalidSubsetError
from models.feedback import expected_pair_count
from models.mnl_instance import MnlInstance
from models.pairwise_stats import PairwiseStats
from models.regret import instant_regret_winner
from services.maxmin_ucb import MaxMinState, MaxMinUCB, build_s, candidate_set, candidates_from_ucb, step


def ucb_from(rows):
    u = np.asarray(rows, dtype=float)
    np.fill_diagonal(u, 0.5)
    return u


# row c is u_c.; the diagonal is overwritten with 1/2
HAND_U = ucb_from([
    [0.5, 0.9, 0.9, 0.9],
    [0.3, 0.5, 0.6, 0.3],
    [0.6, 0.4, 0.5, 0.2],
    [0.4, 0.7, 0.8, 0.5],
])


class TestCandidateSet:
    def test_fresh_stats_keep_the_whole_pool(self):
        assert candidate_set(PairwiseStats(5), [4, 1, 3], t=1) == [1, 3, 4]

    def test_dominant_item(self):
        u = ucb_from([[0.5, 0.9, 0.9], [0.2, 0.5, 0.7], [0.1, 0.6, 0.5]])
        assert candidates_from_ucb(u, [0, 1, 2]) == [0]

    def test_mutual_optimism(self):
        u = ucb_from([[0.5, 0.6], [0.7, 0.5]])
        assert candidates_from_ucb(u, [0, 1]) == [0, 1]

    def test_may_be_empty(self):
        u = ucb_from([[0.5, 0.9, 0.1], [0.1, 0.5, 0.9], [0.9, 0.1, 0.5]])
        assert candidates_from_ucb(u, [0, 1, 2]) == []

    def test_singleton_pool(self):
        assert candidates_from_ucb(HAND_U, [2]) == [2]

    def test_empty_pool(self):
        with pytest.raises(InvalidSubsetError):
            candidate_set(PairwiseStats(3), [], t=1)


class TestBuildS:
    def test_zero_additions(self):
        assert build_s(HAND_U, [0], [1, 2, 3], 0) == [0]

    def test_fresh_ucb_adds_lowest_indices(self):
        u = PairwiseStats(16).ucb_matrix(1)
        assert build_s(u, [7], [i for i in range(16) if i != 7], 3) == [7, 0, 1, 2]

    def test_max_min_pick(self):
        # min over seed {0}: item 2 -> 0.6, item 3 -> 0.4, item 1 -> 0.3
        assert build_s(HAND_U, [0], [1, 2, 3], 1) == [0, 2]

    def test_candidates_absorbed_before_max_min(self):
        # pool {1,2,3} has the single candidate 3, then 1 beats 2 on the max-min score
        assert build_s(HAND_U, [0], [1, 2, 3], 2) == [0, 3, 1]

    def test_empty_seed(self):
        assert build_s(HAND_U, [], [0, 1, 2, 3], 1) == [0]

    def test_insufficient_pool(self):
        with pytest.raises(InsufficientPoolError):
            build_s(HAND_U, [0], [1], 2)

    def test_overlap(self):
        with pytest.raises(InvalidSubsetError):
            build_s(HAND_U, [0], [0, 1], 1)

    def test_negative_ell(self):
        with pytest.raises(InvalidParameterError):
            build_s(HAND_U, [0], [1, 2], -1)


class TestState:
    @pytest.mark.parametrize("k,m", [(2, 2), (4, 0), (17, 1)])
    def test_rejects_bad_sizes(self, k, m):
        with pytest.raises(InvalidParameterError):
            MaxMinState(n=16, k=k, m=m)

    def test_rejects_small_alpha(self):
        with pytest.raises(InvalidParameterError):
            MaxMinState(n=16, k=2, m=1, alpha=0.4)

    def test_environment_size_must_match(self, g1, rng):
        state = MaxMinState(n=4, k=2, m=1)
        with pytest.raises(InvalidParameterError):
            step(state, g1, rng)


class TestStep:
    def test_first_round_plays_m_plus_one(self, g1, rng):
        state = MaxMinState(n=16, k=4, m=2)
        played, feedback, state = step(state, g1, rng)
        assert len(played) == 3
        assert len(feedback.order) == 2
        assert state.t == 2
        assert state.stats.total_comparisons() == expected_pair_count(3, 2)

    def test_settled_instance_plays_best_alone(self, g1, rng):
        state = MaxMinState(n=16, k=2, m=1)
        p = g1.pair_prob_matrix()
        wins = np.rint(1000 * p).astype(np.int64)
        np.fill_diagonal(wins, 0)
        state.stats.wins = wins
        state.stats.round = 1000
        for _ in range(5):
            played, _, state = step(state, g1, rng)
            assert played == (0,)
            assert state.holding == (0,)
            assert instant_regret_winner(g1, played) == 0.0

    def test_run_invariants(self, geo):
        policy = MaxMinUCB(n=16, k=5, m=3)
        rng = np.random.default_rng(11)
        for _ in range(400):
            before = policy.stats.total_comparisons()
            previous = policy.holding_items()
            played, feedback = policy.step(geo, rng)
            assert len(played) in (1, 4)
            assert len(set(played)) == len(played)
            if len(played) > 1:
                added = policy.stats.total_comparisons() - before
                assert added == expected_pair_count(len(played), len(feedback.order))
            if len(previous) == 1 and previous[0] in policy.state.last_candidates:
                assert policy.holding_items() == previous

    def test_deterministic_under_seed(self, g4):
        def trajectory(seed):
            policy = MaxMinUCB(n=16, k=3, m=2)
            rng = np.random.default_rng(seed)
            return [policy.step(g4, rng) for _ in range(150)]

        assert trajectory(5) == trajectory(5)
        assert trajectory(5) != trajectory(6)

    def test_two_item_instance(self):
        inst = MnlInstance((2.0, 1.0))
        policy = MaxMinUCB(n=2, k=2, m=1)
        rng = np.random.default_rng(0)
        for _ in range(50):
            played, _ = policy.step(inst, rng)
            assert sorted(played) in ([0], [1], [0, 1])
