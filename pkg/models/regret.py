import math
from typing import Dict, List, Sequence

import numpy as np

from models.errors import InvalidParameterError, InvalidSubsetError
from models.mnl_instance import MnlInstance

OBJECTIVES = ("winner", "top-k")


def instant_regret_winner(inst: MnlInstance, played: Sequence[int]) -> float:
    """Mean shortfall of the played items against the best item"""
    items = inst.check_subset(played)
    best = inst.theta[inst.best_item]
    return math.fsum(best - inst.theta[i] for i in items) / len(items)


def instant_regret_topk(inst: MnlInstance, played: Sequence[int], k: int) -> float:
    """(sum of top-k theta - sum of played theta) / k for a size-k play"""
    if len(played) != k:
        raise InvalidSubsetError(f"Top-k regret needs exactly k={k} played items, got {len(played)}")
    items = inst.check_subset(played)
    best = math.fsum(inst.theta[i] for i in inst.top_k_set(k))
    got = math.fsum(inst.theta[i] for i in items)
    return max(best - got, 0.0) / k


def holds_top_set(inst: MnlInstance, held: Sequence[int], size: int) -> bool:
    """Whether ``held`` is the top-``size`` set up to ties in theta.

    Every item strictly above theta_(size) must be held and nothing below it may be.
    Items tied at theta_(size) compete for the same slots and may leave them empty,
    but at least size + 1 - (number of tied items) items must be held.
    """
    cutoff = inst.theta[inst.sorted_items()[size - 1]]
    held_set = {int(i) for i in held}
    above = {i for i in range(inst.n) if inst.theta[i] > cutoff}
    tied = sum(1 for v in inst.theta if v == cutoff)
    if not above <= held_set:
        return False
    if any(inst.theta[i] < cutoff for i in held_set):
        return False
    return len(held_set) >= size + 1 - tied


def checkpoint_schedule(horizon: int, count: int) -> np.ndarray:
    """Strictly increasing, roughly geometric round indices ending at ``horizon``"""
    if horizon < 1:
        raise InvalidParameterError(f"Horizon must be >= 1, got {horizon}")
    if count < 1:
        raise InvalidParameterError(f"Checkpoint count must be >= 1, got {count}")
    if horizon <= count:
        return np.arange(1, horizon + 1, dtype=np.int64)

    ideal = np.geomspace(1, horizon, count)
    points: List[int] = []
    previous = 0
    for idx, value in enumerate(ideal):
        # leave room so the schedule can still end exactly at the horizon
        ceiling = horizon - (count - 1 - idx)
        point = min(max(int(round(value)), previous + 1), ceiling)
        points.append(point)
        previous = point
    return np.asarray(points, dtype=np.int64)


class RegretTrajectory:
    """Cumulative regret of one run, kept only at checkpoint rounds.

    Also remembers the cumulative value at the end of the first decile and
    at the start of the last decile, for per-round rate comparisons.
    """

    def __init__(self, objective: str, horizon: int, checkpoints: np.ndarray):
        if objective not in OBJECTIVES:
            raise InvalidParameterError(f"Unknown objective {objective!r}; expected one of {OBJECTIVES}")
        self.objective = objective
        self.horizon = int(horizon)
        self.checkpoints = np.asarray(checkpoints, dtype=np.int64)
        self.values = np.zeros(len(self.checkpoints), dtype=np.float64)
        self.t = 0
        self.total = 0.0
        self.marks: Dict[int, float] = {}
        self._next = 0
        decile = max(self.horizon // 10, 1)
        self._mark_rounds = {decile, self.horizon - decile}

    def add(self, regret: float):
        self.t += 1
        self.total += regret
        if self._next < len(self.checkpoints) and self.t == self.checkpoints[self._next]:
            self.values[self._next] = self.total
            self._next += 1
        if self.t in self._mark_rounds:
            self.marks[self.t] = self.total

    @property
    def cumulative(self) -> np.ndarray:
        return self.values[:self._next]

    @property
    def final_regret(self) -> float:
        return self.total

    def first_decile_rate(self) -> float:
        decile = max(self.horizon // 10, 1)
        return self.marks.get(decile, self.total) / decile

    def last_decile_rate(self) -> float:
        decile = max(self.horizon // 10, 1)
        start = self.marks.get(self.horizon - decile, 0.0)
        return (self.total - start) / decile

    def to_dict(self) -> dict:
        return {
            'objective': self.objective,
            'horizon': self.horizon,
            'checkpoints': self.checkpoints[:self._next].tolist(),
            'cumulative': self.cumulative.tolist(),
        }
