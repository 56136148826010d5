import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from models.errors import InsufficientPoolError, InvalidParameterError, InvalidSubsetError
from models.feedback import RankingFeedback, rank_break
from models.mnl_instance import MnlInstance
from models.pairwise_stats import DEFAULT_ALPHA, PairwiseStats, check_alpha

logger = logging.getLogger(__name__)


def candidates_from_ucb(ucb: np.ndarray, pool: Sequence[int]) -> List[int]:
    """Items of ``pool`` whose UCB beats 1/2 against every other pool item"""
    items = sorted(int(i) for i in pool)
    if not items:
        return []
    if len(items) == 1:
        return items
    sub = ucb[np.ix_(items, items)] > 0.5
    # the diagonal holds exactly 1/2, so mask it in
    np.fill_diagonal(sub, True)
    return [items[r] for r in np.flatnonzero(sub.all(axis=1))]


def candidate_set(stats: PairwiseStats, pool: Sequence[int], t: int,
                  alpha: float = DEFAULT_ALPHA) -> List[int]:
    """C = {i in pool : u_ij > 1/2 for all j in pool \\ {i}}; may be empty"""
    if not pool:
        raise InvalidSubsetError("Candidate pool is empty")
    return candidates_from_ucb(stats.ucb_matrix(t, alpha), pool)


def build_s(ucb: np.ndarray, seed: Sequence[int], pool: Sequence[int], ell: int) -> List[int]:
    """Grow ``seed`` by exactly ``ell`` items drawn from ``pool``.

    First absorbs whole candidate sets of the pool while they are
    non-empty and smaller than the slots left, then fills each remaining
    slot with the pool item whose worst UCB against the current set is
    largest (lowest index on ties).
    """
    chosen = [int(i) for i in seed]
    remaining_pool = sorted(int(i) for i in pool)
    if set(chosen) & set(remaining_pool):
        raise InvalidSubsetError(f"Seed {chosen} and pool overlap")
    if ell < 0:
        raise InvalidParameterError(f"Number of items to draw must be >= 0, got {ell}")
    if len(remaining_pool) < ell:
        raise InsufficientPoolError(f"Pool of {len(remaining_pool)} items cannot supply {ell}")

    remaining = ell
    while remaining > 0:
        candidates = candidates_from_ucb(ucb, remaining_pool)
        if not 0 < len(candidates) < remaining:
            break
        chosen.extend(candidates)
        absorbed = set(candidates)
        remaining_pool = [i for i in remaining_pool if i not in absorbed]
        remaining -= len(candidates)

    for _ in range(remaining):
        pick = _max_min_item(ucb, chosen, remaining_pool)
        chosen.append(pick)
        remaining_pool.remove(pick)

    return chosen


def _max_min_item(ucb: np.ndarray, chosen: Sequence[int], pool: Sequence[int]) -> int:
    pool_idx = np.asarray(pool, dtype=np.int64)
    if chosen:
        scores = ucb[np.ix_(pool_idx, np.asarray(chosen, dtype=np.int64))].min(axis=1)
    elif len(pool_idx) == 1:
        return int(pool_idx[0])
    else:
        # empty seed: compare each item against the rest of the pool
        block = ucb[np.ix_(pool_idx, pool_idx)].copy()
        np.fill_diagonal(block, np.inf)
        scores = block.min(axis=1)
    # argmax returns the first maximum and the pool is sorted ascending
    return int(pool_idx[int(np.argmax(scores))])


@dataclass
class MaxMinState:
    """Mutable per-run state of MaxMin-UCB"""
    n: int
    k: int
    m: int
    alpha: float = DEFAULT_ALPHA
    stats: PairwiseStats = None
    holding: Tuple[int, ...] = ()
    last_candidates: Tuple[int, ...] = field(default=(), repr=False)

    def __post_init__(self):
        if not 1 <= self.m <= self.k - 1 or self.k > self.n:
            raise InvalidParameterError(
                f"MaxMin-UCB needs 1 <= m <= k - 1 and k <= n, got m={self.m}, k={self.k}, n={self.n}"
            )
        self.alpha = check_alpha(self.alpha)
        if self.stats is None:
            self.stats = PairwiseStats(self.n)

    @property
    def t(self) -> int:
        return self.stats.round


def step(state: MaxMinState, env: MnlInstance,
         rng: np.random.Generator) -> Tuple[Tuple[int, ...], RankingFeedback, MaxMinState]:
    """Play one round of MaxMin-UCB and update ``state`` in place"""
    if env.n != state.n:
        raise InvalidParameterError(f"Environment has {env.n} items, state expects {state.n}")

    all_items = list(range(state.n))
    ucb = state.stats.ucb_matrix(state.t, state.alpha)

    observed = candidates_from_ucb(ucb, all_items)
    holding = tuple(i for i in state.holding if i in observed)
    candidates = observed or all_items

    if len(candidates) == 1:
        holding = tuple(candidates)
        played = tuple(candidates)
    else:
        if holding:
            seed = [holding[0]]
        else:
            seed = [candidates[int(rng.integers(len(candidates)))]]
        pool = [i for i in all_items if i not in seed]
        played = tuple(build_s(ucb, seed, pool, state.m))

    feedback = env.sample_top_m(played, state.m, rng)
    state.stats.record(rank_break(feedback))
    state.holding = holding
    state.last_candidates = tuple(observed)

    logger.debug("round %d: C=%s B=%s S=%s", state.t, candidates, holding, played)
    state.stats.advance()
    return played, feedback, state


class MaxMinUCB:
    """MaxMin-UCB policy for winner-regret with top-m ranking feedback"""

    name = "maxmin"
    objective = "winner"

    def __init__(self, n: int, k: int, m: int, alpha: float = DEFAULT_ALPHA):
        self.state = MaxMinState(n=n, k=k, m=m, alpha=alpha)

    def step(self, env: MnlInstance, rng: np.random.Generator) -> Tuple[Tuple[int, ...], RankingFeedback]:
        played, feedback, _ = step(self.state, env, rng)
        return played, feedback

    @property
    def stats(self) -> PairwiseStats:
        return self.state.stats

    def holding_items(self) -> Optional[Tuple[int, ...]]:
        return self.state.holding
