import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from models.errors import InvalidParameterError
from models.feedback import RankingFeedback, rank_break
from models.mnl_instance import MnlInstance

logger = logging.getLogger(__name__)

OBJECTIVES = ("winner", "top-k")


@dataclass
class SpTsState:
    """Per-item Beta(a_i, b_i) posteriors of Self-Sparring Thompson sampling"""
    n: int
    k: int
    m: int
    a: np.ndarray = field(default=None, repr=False)
    b: np.ndarray = field(default=None, repr=False)
    t: int = 1

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise InvalidParameterError(f"Sp-TS needs 1 <= k <= n, got k={self.k}, n={self.n}")
        if self.m < 1:
            raise InvalidParameterError(f"Feedback length m must be >= 1, got {self.m}")
        if self.a is None:
            self.a = np.ones(self.n, dtype=np.int64)
        if self.b is None:
            self.b = np.ones(self.n, dtype=np.int64)

    def update(self, outcomes):
        """Winner's a and loser's b both grow by one per duel"""
        for outcome in outcomes:
            self.a[outcome.winner] += 1
            self.b[outcome.loser] += 1

    def posterior_means(self) -> np.ndarray:
        return self.a / (self.a + self.b)


def sp_ts_step(state: SpTsState, env: MnlInstance, objective: str,
               rng: np.random.Generator) -> Tuple[Tuple[int, ...], RankingFeedback, SpTsState]:
    """Sample a score per item, play the k best samples, learn from rank-broken feedback"""
    if objective not in OBJECTIVES:
        raise InvalidParameterError(f"Unknown objective {objective!r}; expected one of {OBJECTIVES}")
    if env.n != state.n:
        raise InvalidParameterError(f"Environment has {env.n} items, state expects {state.n}")

    scores = rng.beta(state.a, state.b)
    played = tuple(int(i) for i in np.argsort(-scores, kind="stable")[:state.k])

    length = state.m if objective == "winner" else state.k
    feedback = env.sample_top_m(played, length, rng)
    state.update(rank_break(feedback))

    logger.debug("round %d: S=%s sigma=%s", state.t, played, feedback.order)
    state.t += 1
    return played, feedback, state


class SelfSparringTS:
    """Sp-TS baseline playing k distinct items per round"""

    name = "sp-ts"

    def __init__(self, n: int, k: int, m: int, objective: str = "winner"):
        if objective not in OBJECTIVES:
            raise InvalidParameterError(f"Unknown objective {objective!r}; expected one of {OBJECTIVES}")
        self.objective = objective
        self.state = SpTsState(n=n, k=k, m=m)

    def step(self, env: MnlInstance, rng: np.random.Generator) -> Tuple[Tuple[int, ...], RankingFeedback]:
        played, feedback, _ = sp_ts_step(self.state, env, self.objective, rng)
        return played, feedback

    @property
    def stats(self):
        return None

    def holding_items(self) -> Optional[Tuple[int, ...]]:
        return None
