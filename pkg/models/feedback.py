from dataclasses import dataclass
from typing import List, Tuple

from models.errors import InvalidOutcomeError, InvalidRankingError


@dataclass(frozen=True)
class PairwiseOutcome:
    """One duel extracted from a ranking: ``winner`` beat ``loser``"""
    winner: int
    loser: int

    def __post_init__(self):
        if self.winner == self.loser:
            raise InvalidOutcomeError(f"Outcome has identical winner and loser: {self.winner}")

    def to_display(self) -> Tuple[int, int]:
        """1-indexed (winner, loser) pair for user-facing output"""
        return self.winner + 1, self.loser + 1


@dataclass(frozen=True)
class RankingFeedback:
    """Ordered top-m list received after playing a subset"""
    played_set: Tuple[int, ...]
    order: Tuple[int, ...]

    def __post_init__(self):
        played = tuple(int(i) for i in self.played_set)
        order = tuple(int(i) for i in self.order)
        object.__setattr__(self, 'played_set', played)
        object.__setattr__(self, 'order', order)

        if not order or len(order) > len(played):
            raise InvalidRankingError(
                f"Ranking length {len(order)} must be within 1..{len(played)}"
            )
        if len(set(order)) != len(order):
            raise InvalidRankingError(f"Ranking has repeated items: {order}")
        members = set(played)
        outside = [i for i in order if i not in members]
        if outside:
            raise InvalidRankingError(f"Ranked items {outside} were not offered")

    @property
    def winner(self) -> int:
        return self.order[0]

    @property
    def effective_length(self) -> int:
        """Number of rank positions that produce pairs, min(|order|, |S| - 1)"""
        return min(len(self.order), len(self.played_set) - 1)

    def to_dict(self):
        return {
            'played_set': [i + 1 for i in self.played_set],
            'order': [i + 1 for i in self.order],
        }


def rank_break(fb: RankingFeedback) -> List[PairwiseOutcome]:
    """Split a (partial) ranking into the pairwise wins it implies.

    Each ranked item beats every item of the played set not ranked above it.
    Pairs come out by rank position, then by loser index.
    """
    outcomes: List[PairwiseOutcome] = []
    remaining = sorted(fb.played_set)
    for winner in fb.order[:fb.effective_length]:
        remaining.remove(winner)
        outcomes.extend(PairwiseOutcome(winner, loser) for loser in remaining)
    return outcomes


def expected_pair_count(set_size: int, ranked: int) -> int:
    """m''(2k - m'' - 1)/2 with m'' = min(ranked, k - 1)"""
    effective = min(ranked, set_size - 1)
    return effective * (2 * set_size - effective - 1) // 2
