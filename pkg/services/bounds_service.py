import logging
import math
from typing import Dict, List, Optional, Tuple

from models.bounds import BoundsReport
from models.errors import DegenerateInstanceError, InvalidParameterError
from models.mnl_instance import MnlInstance
from models.pairwise_stats import DEFAULT_ALPHA, check_alpha

logger = logging.getLogger(__name__)


# ----------------------------------------------------------------------
# lower bounds (multipliers of ln T)

def winner_lb_constant(inst: MnlInstance, m: int = 1) -> float:
    """theta_a* (n - 1) / (m (min_i theta_a*/theta_i - 1))"""
    if m < 1:
        raise InvalidParameterError(f"m must be >= 1, got {m}")
    order = inst.sorted_items()
    best, second = inst.theta[order[0]], inst.theta[order[1]]
    if best <= second:
        raise DegenerateInstanceError("Best item is not unique; winner lower bound is undefined")
    min_ratio = best / second
    return best / (min_ratio - 1.0) * (inst.n - 1) / m


def winner_lb_pairwise_constant(inst: MnlInstance) -> float:
    """theta_a* (n - 1) / (4 (min_i p_a*i - 1/2))"""
    order = inst.sorted_items()
    best = order[0]
    margin = min(inst.pair_prob(best, i) for i in order[1:]) - 0.5
    if margin <= 0:
        raise DegenerateInstanceError("Best item is not unique; pairwise lower bound is undefined")
    return inst.theta[best] * (inst.n - 1) / (4.0 * margin)


def topk_lb_constant(inst: MnlInstance, k: int) -> float:
    """theta_1 theta_(k+1) / Delta_(k) * (n - k) / k"""
    gap = inst.gap_k(k)
    if gap <= 0:
        raise DegenerateInstanceError(f"theta_(k) = theta_(k+1) for k={k}; top-k lower bound is undefined")
    order = inst.sorted_items()
    return inst.theta[order[0]] * inst.theta[order[k]] / gap * (inst.n - k) / k


# ----------------------------------------------------------------------
# upper-bound ingredients

def f_delta(n: int, alpha: float, delta: float) -> float:
    """Round after which every pairwise confidence interval holds w.p. 1 - delta"""
    alpha = check_alpha(alpha)
    if not 0 < delta < 1:
        raise InvalidParameterError(f"delta must lie in (0, 1), got {delta}")
    return _power(2 * alpha * n * n / ((2 * alpha - 1) * delta), 1.0 / (2 * alpha - 1))


def expected_exploration_term(n: int, alpha: float) -> Optional[float]:
    """2 [2 alpha n^2 / (2 alpha - 1)]^(1/(2 alpha - 1)) (2 alpha - 1)/(alpha - 1); needs alpha > 1"""
    if alpha <= 1:
        return None
    base = _power(2 * alpha * n * n / (2 * alpha - 1), 1.0 / (2 * alpha - 1))
    return 2 * base * (2 * alpha - 1) / (alpha - 1)


def _power(base: float, exponent: float) -> float:
    try:
        return math.exp(exponent * math.log(base))
    except OverflowError:
        return math.inf


def _settle_term(d: float) -> float:
    """2 D ln(2 D), zero when there is nothing to saturate"""
    if d <= 0:
        return 0.0
    return 2 * d * math.log(2 * d)


def winner_complexities(inst: MnlInstance, alpha: float) -> Tuple[Dict[int, float], Dict[int, float], Dict[int, float], float, float]:
    """Delta_i, hat Delta_i, D_1i, D = sum_{i<j} D_ij and D_max"""
    best = inst.best_item
    theta_best = inst.theta[best]
    delta_i: Dict[int, float] = {}
    dhat_i: Dict[int, float] = {}
    d_1i: Dict[int, float] = {}
    for i in range(inst.n):
        if i == best:
            continue
        dhat_i[i] = theta_best - inst.theta[i]
        delta_i[i] = dhat_i[i] / (2 * (theta_best + inst.theta[i]))
        d_1i[i] = 4 * alpha / delta_i[i] ** 2 if delta_i[i] > 0 else math.inf

    total = math.fsum(d_1i.values())
    others = sorted(delta_i)
    for a, i in enumerate(others):
        for j in others[a + 1:]:
            smallest = min(delta_i[i], delta_i[j])
            total += 4 * alpha / smallest ** 2 if smallest > 0 else math.inf
    d_max = max(d_1i.values())
    return delta_i, dhat_i, d_1i, total, d_max


def topk_slot_complexity(inst: MnlInstance, g: int, k: int, alpha: float) -> Tuple[float, List[str]]:
    """D^(g): sum over every item i and every top-k item j strictly better than g of D^g_ij.

    Only the top k items count as better or worse than g. Items tied with g reuse D^g_gj,
    and every other pair has no term.
    """
    p = inst.pair_prob_matrix()
    theta = inst.theta
    top = inst.sorted_items()[:k]
    better = [j for j in top if theta[j] > theta[g]]
    worse = [i for i in top if theta[i] < theta[g]]
    tied = [i for i in range(inst.n) if i != g and theta[i] == theta[g]]

    total = 0.0
    for j in better:
        d_gj = 4 * alpha / (p[g, j] - 0.5) ** 2
        # the slot item itself plus every item tied with it
        total += d_gj * (1 + len(tied))
        for i in worse:
            total += 4 * alpha / (p[g, j] - p[i, j]) ** 2

    notes: List[str] = []
    if tied and better:
        items = ",".join(str(i + 1) for i in tied)
        notes.append(f"items {items} tie slot item {g + 1}; their pairs reuse D^g_gj")
    return total, notes


def challenger_margins(inst: MnlInstance, k: int) -> Dict[int, float]:
    """hat D_b = min over the top k-1 items g of (p_kg - p_bg), for every b outside the top k"""
    order = inst.sorted_items()
    p = inst.pair_prob_matrix()
    kth = order[k - 1]
    leaders = order[:k - 1]
    return {b: min(p[kth, g] - p[b, g] for g in leaders) for b in order[k:]}


# ----------------------------------------------------------------------

class BoundsService:
    """Compute every bound constant for one instance and package them as a report"""

    def lower_bound_constants(self, inst: MnlInstance, m: int = 1, k: int = 2,
                              alpha: float = DEFAULT_ALPHA, delta: float = 0.1,
                              horizon: int = 100000) -> BoundsReport:
        alpha = check_alpha(alpha)
        if not 1 <= k < inst.n:
            raise InvalidParameterError(f"k must lie within 1..{inst.n - 1}, got {k}")
        if horizon < 2:
            raise InvalidParameterError(f"Horizon must be >= 2, got {horizon}")

        report = BoundsReport(instance=inst.name, n=inst.n, m=m, k=k, alpha=alpha,
                              delta=delta, horizon=horizon)
        report.f_delta = f_delta(inst.n, alpha, delta)

        self._winner_section(inst, report)
        self._topk_section(inst, report)

        for message in report.flags:
            logger.warning("%s: %s", inst.name, message)
        return report

    def _winner_section(self, inst: MnlInstance, report: BoundsReport):
        try:
            report.winner_lb_constant = winner_lb_constant(inst, 1)
            report.winner_lb_topm_constant = winner_lb_constant(inst, report.m)
            report.winner_lb_pairwise_constant = winner_lb_pairwise_constant(inst)
        except DegenerateInstanceError as e:
            report.flag(str(e))
            return

        alpha, m = report.alpha, report.m
        delta_i, dhat_i, d_1i, d_total, d_max = winner_complexities(inst, alpha)
        report.delta_i, report.dhat_i, report.d_1i = delta_i, dhat_i, d_1i
        report.d_total, report.d_max = d_total, d_max
        report.delta_hat_max = max(dhat_i.values())

        settle = _settle_term(d_total)
        report.t0_winner = 2 * report.f_delta + settle

        log_t = math.log(report.horizon)
        per_item = math.fsum(
            dhat_i[i] * (d_1i[i] if m == 1 else d_max) for i in dhat_i
        )
        saturation = log_t / (m + 1) * per_item
        report.winner_ub_whp = report.t0_winner * report.delta_hat_max + saturation

        exploration = expected_exploration_term(inst.n, alpha)
        if exploration is not None:
            report.winner_ub_expected = (exploration + settle) * report.delta_hat_max + saturation
        else:
            report.flag("expected-regret bounds need alpha > 1")

    def _topk_section(self, inst: MnlInstance, report: BoundsReport):
        k, alpha = report.k, report.alpha
        order = inst.sorted_items()
        theta = inst.theta
        report.delta_prime_max = (
            math.fsum(theta[i] for i in order[:k]) - math.fsum(theta[i] for i in order[-k:])
        ) / k

        try:
            report.topk_lb_constant = topk_lb_constant(inst, k)
        except DegenerateInstanceError as e:
            report.flag(str(e))

        if k < 2:
            return

        dbar = 0.0
        for g in order[:k]:
            value, notes = topk_slot_complexity(inst, g, k, alpha)
            report.d_slot[g] = value
            dbar += value
            for note in notes:
                report.flag(note)
        report.dbar_k = dbar

        report.dhat_b = challenger_margins(inst, k)
        if inst.is_degenerate_for_top_k(k):
            report.flag(f"top-{k} upper bound undefined: theta_(k) = theta_(k+1)")
            return

        kth = theta[order[k - 1]]
        saturation = 4 * alpha * math.log(report.horizon) / k * math.fsum(
            (kth - theta[b]) / report.dhat_b[b] ** 2 for b in report.dhat_b
        )
        settle = _settle_term(dbar)
        report.topk_ub_whp = (2 * report.f_delta + settle) * report.delta_prime_max + saturation

        exploration = expected_exploration_term(inst.n, alpha)
        if exploration is not None:
            report.topk_ub_expected = (exploration + settle) * report.delta_prime_max + saturation
