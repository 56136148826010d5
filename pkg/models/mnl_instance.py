import math
import numbers
from dataclasses import dataclass, field
from typing import Dict, Any, Iterable, List, Sequence, Tuple

import numpy as np

from models.errors import (
    ConfigError,
    InvalidParameterError,
    InvalidRankingError,
    InvalidScaleError,
    InvalidSubsetError,
    ItemIndexError,
)
from models.feedback import RankingFeedback
from utils.file_handler import parse_float_list, parse_key_values


@dataclass(frozen=True)
class MnlInstance:
    """MNL(n, theta) choice model over items 0..n-1.

    Immutable after construction, so one instance can be shared by every
    run of an experiment. Items are 0-indexed here; conversion to the
    1-indexed user-facing labels happens at the I/O boundary.
    """
    theta: Tuple[float, ...]
    name: str = "custom"
    _weights: np.ndarray = field(init=False, repr=False, compare=False)
    _order: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        theta = tuple(float(x) for x in self.theta)
        if len(theta) < 2:
            raise InvalidParameterError(f"An MNL instance needs n >= 2 items, got {len(theta)}")
        bad = [i + 1 for i, x in enumerate(theta) if not (math.isfinite(x) and x > 0)]
        if bad:
            raise InvalidParameterError(f"theta must be finite and strictly positive; offending items {bad}")

        weights = np.asarray(theta, dtype=np.float64)
        weights.setflags(write=False)
        # stable sort keeps the lowest index first among equal parameters
        order = np.argsort(-weights, kind="stable")
        order.setflags(write=False)

        object.__setattr__(self, 'theta', theta)
        object.__setattr__(self, '_weights', weights)
        object.__setattr__(self, '_order', order)

    @property
    def n(self) -> int:
        return len(self.theta)

    @property
    def weights(self) -> np.ndarray:
        """Read-only numpy view of theta"""
        return self._weights

    # ------------------------------------------------------------------
    # validation helpers

    def check_item(self, i: int) -> int:
        i = int(i)
        if not 0 <= i < self.n:
            raise ItemIndexError(f"Item index {i} outside 0..{self.n - 1}")
        return i

    def check_subset(self, subset: Iterable[int]) -> Tuple[int, ...]:
        items = tuple(int(i) for i in subset)
        if not items:
            raise InvalidSubsetError("Offered subset is empty")
        for i in items:
            self.check_item(i)
        if len(set(items)) != len(items):
            raise InvalidSubsetError(f"Offered subset has repeated items: {items}")
        return items

    # ------------------------------------------------------------------
    # choice model

    def choice_prob(self, i: int, subset: Sequence[int]) -> float:
        """Pr(i | S) = theta_i / sum_{j in S} theta_j, zero when i is not offered"""
        items = self.check_subset(subset)
        i = self.check_item(i)
        if i not in items:
            return 0.0
        return self.theta[i] / math.fsum(self.theta[j] for j in items)

    def ranking_prob(self, sigma: Sequence[int], subset: Sequence[int]) -> float:
        """Probability of the ordered prefix ``sigma`` under sequential MNL draws from S"""
        items = self.check_subset(subset)
        ranking = tuple(int(i) for i in sigma)
        if not ranking:
            raise InvalidRankingError("Ranking is empty")
        if len(set(ranking)) != len(ranking):
            raise InvalidRankingError(f"Ranking has repeated items: {ranking}")
        members = set(items)
        outside = [i for i in ranking if i not in members]
        if outside:
            raise InvalidRankingError(f"Ranked items {outside} are not in the offered subset")

        remaining_mass = math.fsum(self.theta[j] for j in items)
        prob = 1.0
        for item in ranking:
            prob *= self.theta[item] / remaining_mass
            remaining_mass -= self.theta[item]
        return prob

    def sample_top_m(self, subset: Sequence[int], m: int, rng: np.random.Generator) -> RankingFeedback:
        """Draw a Plackett-Luce top-m ranking of S, with m clamped to |S|.

        Uses the Gumbel-max construction: ordering log(theta) + Gumbel noise
        is distributed exactly as successive MNL winner draws without
        replacement.
        """
        items = self.check_subset(subset)
        if m < 1:
            raise InvalidParameterError(f"Feedback length m must be >= 1, got {m}")
        m = min(m, len(items))
        if len(items) == 1:
            return RankingFeedback(items, items)

        idx = np.fromiter(items, dtype=np.int64, count=len(items))
        keys = np.log(self._weights[idx]) + rng.gumbel(size=len(items))
        ranked = idx[np.argsort(-keys, kind="stable")[:m]]
        return RankingFeedback(items, tuple(int(i) for i in ranked))

    def scale(self, c: float) -> 'MnlInstance':
        """theta' = c * theta; every choice and ranking probability is unchanged"""
        if not (isinstance(c, numbers.Real) and math.isfinite(c) and c > 0):
            raise InvalidScaleError(f"Scale factor must be a finite positive real, got {c}")
        return MnlInstance(tuple(c * x for x in self.theta), name=self.name)

    # ------------------------------------------------------------------
    # instance statistics

    @property
    def best_item(self) -> int:
        return int(self._order[0])

    @property
    def has_unique_best(self) -> bool:
        return self.theta[self._order[0]] > self.theta[self._order[1]]

    def sorted_items(self) -> List[int]:
        """All items by descending theta, lowest index first among ties"""
        return [int(i) for i in self._order]

    def top_k_set(self, k: int) -> List[int]:
        self._check_k(k, allow_n=True)
        return [int(i) for i in self._order[:k]]

    def gap_k(self, k: int) -> float:
        """theta_(k) - theta_(k+1); zero marks the instance degenerate for top-k"""
        self._check_k(k, allow_n=False)
        return self.theta[self._order[k - 1]] - self.theta[self._order[k]]

    def is_degenerate_for_top_k(self, k: int) -> bool:
        return self.gap_k(k) <= 0.0

    def winner_gap(self, i: int) -> float:
        i = self.check_item(i)
        return self.theta[self.best_item] - self.theta[i]

    def winner_gaps(self) -> np.ndarray:
        return self._weights[self.best_item] - self._weights

    def pair_prob(self, i: int, j: int) -> float:
        """p_ij = theta_i / (theta_i + theta_j)"""
        i, j = self.check_item(i), self.check_item(j)
        return self.theta[i] / (self.theta[i] + self.theta[j])

    def pair_prob_matrix(self) -> np.ndarray:
        w = self._weights
        return w[:, None] / (w[:, None] + w[None, :])

    def _check_k(self, k: int, allow_n: bool):
        upper = self.n if allow_n else self.n - 1
        if not 1 <= k <= upper:
            raise InvalidParameterError(f"k must be within 1..{upper}, got {k}")

    # ------------------------------------------------------------------
    # serialization

    def to_dict(self) -> Dict[str, Any]:
        return {'name': self.name, 'n': self.n, 'theta': list(self.theta)}

    def to_text(self) -> str:
        """Key-value instance document: ``n`` and comma-separated ``theta``"""
        theta = ", ".join(repr(x) for x in self.theta)
        return f"# MNL instance {self.name}\nn = {self.n}\ntheta = {theta}\n"

    @classmethod
    def from_text(cls, text: str, name: str = "custom") -> 'MnlInstance':
        pairs = parse_key_values(text, allowed={'n', 'theta', 'name'})
        if 'theta' not in pairs:
            raise ConfigError("Instance document has no 'theta' entry")
        theta = parse_float_list(pairs['theta'], key='theta')
        if 'n' in pairs:
            try:
                n = int(pairs['n'])
            except ValueError:
                raise ConfigError(f"Invalid value for 'n': {pairs['n']!r}")
            if n != len(theta):
                raise ConfigError(f"Instance declares n = {n} but theta has {len(theta)} entries")
        return cls(tuple(theta), name=pairs.get('name', name))

    def __str__(self) -> str:
        return f"MnlInstance(name={self.name}, n={self.n}, best={self.best_item + 1})"
