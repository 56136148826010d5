import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from models.errors import InvalidParameterError
from models.feedback import RankingFeedback, rank_break
from models.mnl_instance import MnlInstance
from models.pairwise_stats import DEFAULT_ALPHA, PairwiseStats, check_alpha
from services.maxmin_ucb import build_s, candidates_from_ucb

logger = logging.getLogger(__name__)


@dataclass
class RecMaxMinState:
    """Mutable per-run state of Rec-MaxMin-UCB.

    ``slots[h]`` is the item held in slot h + 1, or None when empty.
    """
    n: int
    k: int
    alpha: float = DEFAULT_ALPHA
    stats: PairwiseStats = None
    slots: List[Optional[int]] = None

    def __post_init__(self):
        if not 2 <= self.k < self.n:
            raise InvalidParameterError(f"Rec-MaxMin-UCB needs 2 <= k < n, got k={self.k}, n={self.n}")
        self.alpha = check_alpha(self.alpha)
        if self.stats is None:
            self.stats = PairwiseStats(self.n)
        if self.slots is None:
            self.slots = [None] * self.k

    @property
    def t(self) -> int:
        return self.stats.round

    def held_items(self) -> Tuple[int, ...]:
        return tuple(i for i in self.slots if i is not None)


def _assign_slot(slots: List[Optional[int]], h: int, item: int):
    # an item may sit in one slot only; drop stale copies inherited elsewhere
    for other, held in enumerate(slots):
        if other != h and held == item:
            slots[other] = None
    slots[h] = item


def step(state: RecMaxMinState, env: MnlInstance,
         rng: np.random.Generator) -> Tuple[Tuple[int, ...], RankingFeedback, RecMaxMinState]:
    """Play one round of Rec-MaxMin-UCB and update ``state`` in place.

    Slots are filled recursively from the best down; the first slot that
    loses its holder is rebuilt with the max-min rule and the rest of the
    set is filled around it. Slots after that point keep their previous
    holders until the next round re-checks them.
    """
    if env.n != state.n:
        raise InvalidParameterError(f"Environment has {env.n} items, state expects {state.n}")

    k = state.k
    ucb = state.stats.ucb_matrix(state.t, state.alpha)
    slots = list(state.slots)
    pool = list(range(state.n))
    played: List[int] = []
    filled_early = False

    for h in range(k - 1):
        candidates = candidates_from_ucb(ucb, pool)
        previous = slots[h]
        if previous is not None and previous in candidates:
            played.append(previous)
            pool.remove(previous)
            continue

        slots[h] = None
        chosen = build_s(ucb, played, pool, 1)[-1]
        _assign_slot(slots, h, chosen)
        played.append(chosen)
        pool.remove(chosen)
        played = build_s(ucb, played, pool, k - len(played))
        filled_early = True
        break

    if not filled_early:
        candidates = candidates_from_ucb(ucb, pool)
        previous = slots[k - 1]
        slots[k - 1] = previous if previous in candidates else None
        if len(candidates) == 1:
            _assign_slot(slots, k - 1, candidates[0])
            played.append(candidates[0])
        else:
            played = build_s(ucb, played, pool, 1)

    played_set = tuple(played)
    feedback = env.sample_top_m(played_set, k, rng)
    state.stats.record(rank_break(feedback))
    state.slots = slots

    logger.debug("round %d: slots=%s S=%s", state.t, slots, played_set)
    state.stats.advance()
    return played_set, feedback, state


class RecMaxMinUCB:
    """Rec-MaxMin-UCB policy for top-k regret with full-ranking feedback"""

    name = "rec-maxmin"
    objective = "top-k"

    def __init__(self, n: int, k: int, alpha: float = DEFAULT_ALPHA):
        self.state = RecMaxMinState(n=n, k=k, alpha=alpha)

    def step(self, env: MnlInstance, rng: np.random.Generator) -> Tuple[Tuple[int, ...], RankingFeedback]:
        played, feedback, _ = step(self.state, env, rng)
        return played, feedback

    @property
    def stats(self) -> PairwiseStats:
        return self.state.stats

    def holding_items(self) -> Optional[Tuple[int, ...]]:
        return self.state.held_items()
