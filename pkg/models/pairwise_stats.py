import math
from typing import Iterable

import numpy as np
import pandas as pd

from models.errors import InvalidOutcomeError, InvalidParameterError, ItemIndexError
from models.feedback import PairwiseOutcome

DEFAULT_ALPHA = 0.51


def check_alpha(alpha: float) -> float:
    if not alpha > 0.5:
        raise InvalidParameterError(f"alpha must exceed 1/2, got {alpha}")
    return float(alpha)


class PairwiseStats:
    """Win-count matrix W of rank-broken duels.

    W[i, j] counts how often i beat j. N = W + W^T, p_hat = W / N and the
    UCB matrix are derived on demand from (W, t), so only the n x n counts
    are stored.
    """

    def __init__(self, n: int):
        if n < 2:
            raise InvalidParameterError(f"PairwiseStats needs n >= 2, got {n}")
        self.n = n
        self.wins = np.zeros((n, n), dtype=np.int64)
        self.round = 1

    def record(self, outcomes: Iterable[PairwiseOutcome]) -> 'PairwiseStats':
        """Increment W[winner, loser] once per outcome"""
        for outcome in outcomes:
            w, l = outcome.winner, outcome.loser
            if w == l:
                raise InvalidOutcomeError(f"Outcome has identical winner and loser: {w}")
            if not (0 <= w < self.n and 0 <= l < self.n):
                raise ItemIndexError(f"Outcome ({w}, {l}) outside 0..{self.n - 1}")
            self.wins[w, l] += 1
        return self

    def advance(self):
        self.round += 1

    # ------------------------------------------------------------------
    # derived quantities

    @property
    def comparisons(self) -> np.ndarray:
        """N = W + W^T"""
        return self.wins + self.wins.T

    def total_comparisons(self) -> int:
        """sum over i < j of n_ij"""
        return int(self.wins.sum())

    def n_ij(self, i: int, j: int) -> int:
        return int(self.wins[i, j] + self.wins[j, i])

    def p_hat(self, i: int, j: int) -> float:
        """Empirical preference; 1/2 when the pair was never compared"""
        total = self.n_ij(i, j)
        if total == 0:
            return 0.5
        return self.wins[i, j] / total

    def p_hat_matrix(self) -> np.ndarray:
        counts = self.comparisons
        with np.errstate(divide='ignore', invalid='ignore'):
            p_hat = np.where(counts > 0, self.wins / np.maximum(counts, 1), 0.5)
        return p_hat

    def ucb(self, i: int, j: int, t: int, alpha: float = DEFAULT_ALPHA) -> float:
        """u_ij = p_hat_ij + sqrt(alpha ln t / n_ij).

        u_ii = 1/2, and an unobserved pair gets +inf so it stays optimistic
        until compared once.
        """
        alpha = check_alpha(alpha)
        if t < 1:
            raise InvalidParameterError(f"Round index t must be >= 1, got {t}")
        if i == j:
            return 0.5
        total = self.n_ij(i, j)
        if total == 0:
            return math.inf
        return self.wins[i, j] / total + math.sqrt(alpha * math.log(t) / total)

    def ucb_matrix(self, t: int, alpha: float = DEFAULT_ALPHA) -> np.ndarray:
        """Full U at round t, same conventions as ``ucb``"""
        alpha = check_alpha(alpha)
        if t < 1:
            raise InvalidParameterError(f"Round index t must be >= 1, got {t}")
        counts = self.comparisons
        observed = counts > 0
        safe = np.maximum(counts, 1)
        with np.errstate(divide='ignore', invalid='ignore'):
            u = np.where(observed, self.wins / safe + np.sqrt(alpha * math.log(t) / safe), np.inf)
        np.fill_diagonal(u, 0.5)
        return u

    def lcb_matrix(self, t: int, alpha: float = DEFAULT_ALPHA) -> np.ndarray:
        """l_ij = 1 - u_ji"""
        return 1.0 - self.ucb_matrix(t, alpha).T

    # ------------------------------------------------------------------
    # export

    def to_frame(self) -> pd.DataFrame:
        """Non-zero win counts as (i, j, wins), 1-indexed"""
        rows, cols = np.nonzero(self.wins)
        return pd.DataFrame({
            'i': rows + 1,
            'j': cols + 1,
            'wins': self.wins[rows, cols],
        })

    def copy(self) -> 'PairwiseStats':
        clone = PairwiseStats(self.n)
        clone.wins = self.wins.copy()
        clone.round = self.round
        return clone

    def __repr__(self) -> str:
        return f"PairwiseStats(n={self.n}, round={self.round}, comparisons={self.total_comparisons()})"
