import pytest
from hypothesis import given, strategies as st

from models.errors import InvalidOutcomeError, InvalidRankingError
from models.feedback import PairwiseOutcome, RankingFeedback, expected_pair_count, rank_break

A, B, C, D = 0, 1, 2, 3


def pairs(outcomes):
    return [(o.winner, o.loser) for o in outcomes]


def test_full_ranking_gives_six_pairs():
    fb = RankingFeedback((A, B, C, D), (B, A, C, D))
    assert pairs(rank_break(fb)) == [(B, A), (B, C), (B, D), (A, C), (A, D), (C, D)]


def test_top_two_gives_five_pairs():
    fb = RankingFeedback((A, B, C, D), (B, A))
    assert pairs(rank_break(fb)) == [(B, A), (B, C), (B, D), (A, C), (A, D)]


def test_count_formula_example():
    fb = RankingFeedback(tuple(range(5)), (4, 0, 2))
    assert len(rank_break(fb)) == 9 == expected_pair_count(5, 3)


def test_singleton_play_gives_nothing():
    assert rank_break(RankingFeedback((3,), (3,))) == []


def test_outcome_rejects_self_duel():
    with pytest.raises(InvalidOutcomeError):
        PairwiseOutcome(2, 2)


def test_outcome_display_is_one_indexed():
    assert PairwiseOutcome(0, 4).to_display() == (1, 5)


@pytest.mark.parametrize("order", [(), (0, 0), (0, 9), (0, 1, 2, 3, 4)])
def test_invalid_rankings(order):
    with pytest.raises(InvalidRankingError):
        RankingFeedback((0, 1, 2, 3), order)


def test_to_dict_is_one_indexed():
    fb = RankingFeedback((0, 5), (5,))
    assert fb.to_dict() == {'played_set': [1, 6], 'order': [6]}


@st.composite
def feedbacks(draw):
    k = draw(st.integers(1, 10))
    played = draw(st.lists(st.integers(0, 30), min_size=k, max_size=k, unique=True))
    order = draw(st.permutations(played))
    m = draw(st.integers(1, k))
    return RankingFeedback(tuple(played), tuple(order[:m]))


@given(feedbacks())
def test_count_identity(fb):
    k = len(fb.played_set)
    effective = min(len(fb.order), k - 1)
    outcomes = rank_break(fb)
    assert len(outcomes) == effective * (2 * k - effective - 1) // 2
    assert len(set(pairs(outcomes))) == len(outcomes)


@given(feedbacks())
def test_winners_come_from_the_ranking(fb):
    ranked = set(fb.order)
    for outcome in rank_break(fb):
        assert outcome.winner in ranked
        assert outcome.loser in fb.played_set
