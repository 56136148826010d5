"""Brute-force reference implementations.

Everything here enumerates exhaustively, so it is exact but only usable on
small sets. The ``validate`` command and the test-suite compare the fast
production code against these.
"""
import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Hashable, List, Mapping, Sequence, Tuple

import numpy as np

from models.errors import InvalidParameterError, MismatchedOutcomeSpaceError, TooLargeError
from models.mnl_instance import MnlInstance

MAX_ENUMERATION_SET = 8
MAX_BRUTEFORCE_ITEMS = 20


@dataclass(frozen=True)
class ExactDistribution:
    """Exact probabilities over a finite outcome space"""
    probabilities: Mapping[Hashable, float]

    def __post_init__(self):
        total = math.fsum(self.probabilities.values())
        if abs(total - 1.0) > 1e-10:
            raise InvalidParameterError(f"Probabilities sum to {total!r}, not 1")
        if any(p < 0 for p in self.probabilities.values()):
            raise InvalidParameterError("Probabilities must be non-negative")

    @property
    def outcomes(self) -> List[Hashable]:
        return list(self.probabilities.keys())

    def __len__(self) -> int:
        return len(self.probabilities)

    def __getitem__(self, outcome: Hashable) -> float:
        return self.probabilities[outcome]


def enumerate_ranking_distribution(inst: MnlInstance, subset: Sequence[int], m: int) -> ExactDistribution:
    """Every ordered m-prefix of S with its product-formula probability"""
    items = inst.check_subset(subset)
    if len(items) > MAX_ENUMERATION_SET:
        raise TooLargeError(f"Enumeration supports |S| <= {MAX_ENUMERATION_SET}, got {len(items)}")
    if not 1 <= m <= len(items):
        raise InvalidParameterError(f"m must lie within 1..{len(items)}, got {m}")

    theta = inst.theta
    total = math.fsum(theta[i] for i in items)
    probabilities: Dict[Tuple[int, ...], float] = {}
    for sigma in itertools.permutations(items, m):
        # recomputed here, not delegated to ranking_prob
        prob, mass = 1.0, total
        for item in sigma:
            prob *= theta[item] / mass
            mass -= theta[item]
        probabilities[sigma] = prob
    return ExactDistribution(probabilities)


def best_subset_bruteforce(inst: MnlInstance, k: int, objective: str) -> List[int]:
    """Exhaustive argmax of the mean theta over candidate subsets.

    Top-k searches the size-k subsets; winner searches every subset of
    size at most k. Among equal values the lexicographically first subset
    wins, which matches the lowest-index tie rule of ``top_k_set``.
    """
    if inst.n > MAX_BRUTEFORCE_ITEMS:
        raise TooLargeError(f"Brute force supports n <= {MAX_BRUTEFORCE_ITEMS}, got {inst.n}")
    if not 1 <= k <= inst.n:
        raise InvalidParameterError(f"k must lie within 1..{inst.n}, got {k}")
    if objective == "top-k":
        sizes = [k]
    elif objective == "winner":
        sizes = list(range(1, k + 1))
    else:
        raise InvalidParameterError(f"Unknown objective {objective!r}")

    theta = inst.theta
    best: Tuple[int, ...] = ()
    best_value = -math.inf
    for size in sizes:
        for combo in itertools.combinations(range(inst.n), size):
            value = math.fsum(theta[i] for i in combo) / size
            if value > best_value:
                best, best_value = combo, value
    return list(best)


def tv_distance(empirical: Mapping[Hashable, float], exact: ExactDistribution) -> float:
    """Total variation distance between a histogram (counts or frequencies) and an exact law"""
    unknown = [o for o in empirical if o not in exact.probabilities]
    if unknown:
        raise MismatchedOutcomeSpaceError(
            f"{len(unknown)} empirical outcomes are outside the exact space, e.g. {unknown[0]!r}"
        )
    total = math.fsum(empirical.values())
    if total <= 0:
        raise InvalidParameterError("Empirical histogram is empty")
    return 0.5 * math.fsum(
        abs(empirical.get(o, 0.0) / total - p) for o, p in exact.probabilities.items()
    )


def sample_histogram(inst: MnlInstance, subset: Sequence[int], m: int, draws: int,
                     rng: np.random.Generator) -> Counter:
    """Counts of the rankings produced by the production sampler"""
    counts: Counter = Counter()
    for _ in range(draws):
        counts[inst.sample_top_m(subset, m, rng).order] += 1
    return counts
