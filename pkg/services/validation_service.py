import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from config.settings import Settings
from models.environments import environment_names, make_environment
from models.experiment_config import DEFAULT_OBJECTIVE, ExperimentConfig
from models.feedback import RankingFeedback, expected_pair_count, rank_break
from models.mnl_instance import MnlInstance
from models.pairwise_stats import PairwiseStats
from models.regret import checkpoint_schedule
from services.bounds_service import BoundsService, f_delta, topk_lb_constant, winner_lb_constant
from services.experiment_service import ExperimentService, run_single
from services.maxmin_ucb import MaxMinState, step as maxmin_step
from services.report_service import ReportService
from utils.oracle import enumerate_ranking_distribution, sample_histogram, tv_distance

logger = logging.getLogger(__name__)


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: Dict[str, Any] = field(default_factory=dict)

    def to_line(self) -> str:
        stats = ", ".join(f"{k}={_fmt(v)}" for k, v in self.details.items())
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {stats}"


def _fmt(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


class ValidationService:
    """User-runnable acceptance checks comparing production code with exact references"""

    def __init__(self, settings: Optional[Settings] = None, quick: bool = False):
        self.settings = settings or Settings()
        self.quick = quick
        self.experiments = ExperimentService(self.settings, show_progress=False)

    def _size(self, full: int, quick: int) -> int:
        return quick if self.quick else full

    def run_all(self, full: bool = False) -> List[CheckResult]:
        checks: List[Callable[[], CheckResult]] = [
            self.check_distribution_fidelity,
            self.check_rank_breaking,
            self.check_concentration,
            self.check_coverage,
            self.check_maxmin_structure,
            self.check_bounds,
            self.check_determinism,
        ]
        if full:
            checks += [
                self.check_sublinear_regret,
                self.check_m_scaling,
                self.check_baseline_ordering,
                self.check_topk_identification,
                self.check_environment_hardness,
            ]
        results = []
        for check in checks:
            result = check()
            log = logger.info if result.passed else logger.error
            log(result.to_line())
            results.append(result)
        return results

    # ------------------------------------------------------------------

    def check_distribution_fidelity(self) -> CheckResult:
        worst_sum, worst_entry, subsets = 0.0, 0.0, 0
        for name in environment_names():
            inst = MnlInstance(make_environment(name).theta[:5], name=f"{name}-5")
            for size in range(1, 6):
                for subset in itertools.combinations(range(5), size):
                    for m in range(1, size + 1):
                        exact = enumerate_ranking_distribution(inst, subset, m)
                        probs = [inst.ranking_prob(sigma, subset) for sigma in exact.outcomes]
                        worst_sum = max(worst_sum, abs(math.fsum(probs) - 1.0))
                        worst_entry = max(worst_entry, max(
                            abs(p - exact[sigma]) for p, sigma in zip(probs, exact.outcomes)
                        ))
                        subsets += 1

        draws = self._size(self.settings.VALIDATION_DRAWS, 20000)
        tv_limit = 0.01 if not self.quick else 0.03
        inst = MnlInstance(make_environment("geo").theta[:5], name="geo-5")
        subset = (0, 1, 2, 3)
        counts = sample_histogram(inst, subset, 2, draws, np.random.default_rng(self.settings.DEFAULT_SEED))
        tv = tv_distance(counts, enumerate_ranking_distribution(inst, subset, 2))

        passed = worst_sum <= 1e-10 and worst_entry <= 1e-12 and tv <= tv_limit
        return CheckResult("distribution-fidelity", passed, {
            'cases': subsets, 'max_sum_error': worst_sum, 'max_entry_error': worst_entry,
            'draws': draws, 'tv': tv, 'tv_limit': tv_limit,
        })

    def check_rank_breaking(self) -> CheckResult:
        rng = np.random.default_rng(self.settings.DEFAULT_SEED)
        trials = self._size(10000, 1000)
        mismatches = 0
        for _ in range(trials):
            k = int(rng.integers(2, 11))
            m = int(rng.integers(1, k))
            order = tuple(int(i) for i in rng.permutation(k)[:m])
            outcomes = rank_break(RankingFeedback(tuple(range(k)), order))
            if len(outcomes) != m * (2 * k - m - 1) // 2 or len(outcomes) != expected_pair_count(k, m):
                mismatches += 1
        return CheckResult("rank-breaking", mismatches == 0, {'trials': trials, 'mismatches': mismatches})

    def check_concentration(self, v: int = 200, eta: float = 0.1) -> CheckResult:
        """Deviation frequency of a rank-broken pairwise estimate after v comparisons"""
        replications = self._size(self.settings.VALIDATION_REPLICATIONS, 500)
        inst = MnlInstance(make_environment("geo").theta[:4], name="geo-4")
        i, j, subset = 0, 1, (0, 1, 2)
        p_ij = inst.pair_prob(i, j)
        rng = np.random.default_rng(self.settings.DEFAULT_SEED)

        violations = 0
        for _ in range(replications):
            stats = PairwiseStats(inst.n)
            while stats.n_ij(i, j) < v:
                stats.record(rank_break(inst.sample_top_m(subset, len(subset) - 1, rng)))
            if abs(stats.wins[i, j] / stats.n_ij(i, j) - p_ij) >= eta:
                violations += 1

        frequency = violations / replications
        limit = 2 * math.exp(-2 * v * eta ** 2) + 0.01
        return CheckResult("concentration", frequency <= limit, {
            'replications': replications, 'frequency': frequency, 'limit': limit,
        })

    def check_coverage(self, delta: float = 0.2) -> CheckResult:
        """Share of (t, i, j) after f(delta) whose interval [1 - u_ji, u_ij] misses p_ij"""
        alpha = self.settings.DEFAULT_ALPHA
        horizon = self._size(3000, 500)
        seeds = self._size(5, 2)
        bound_round = f_delta(5, alpha, delta)
        # near alpha = 1/2, f(delta) lies past any horizon; every round is then counted
        start = int(bound_round) if bound_round < horizon else 0

        misses, total = 0, 0
        for name in environment_names():
            inst = MnlInstance(make_environment(name).theta[:5], name=f"{name}-5")
            p = inst.pair_prob_matrix()
            off_diagonal = ~np.eye(inst.n, dtype=bool)
            for seed in range(seeds):
                rng = np.random.default_rng(self.settings.DEFAULT_SEED + seed)
                state = MaxMinState(n=inst.n, k=3, m=2, alpha=alpha)
                for _ in range(horizon):
                    _, _, state = maxmin_step(state, inst, rng)
                    if state.t <= start:
                        continue
                    u = state.stats.ucb_matrix(state.t, alpha)
                    outside = (p > u) | (p < 1.0 - u.T)
                    misses += int(outside[off_diagonal].sum())
                    total += inst.n * (inst.n - 1)

        fraction = misses / total if total else 0.0
        return CheckResult("coverage", fraction <= delta, {
            'horizon': horizon, 'seeds': seeds, 'from_round': start + 1,
            'fraction': fraction, 'delta': delta,
        })

    def check_maxmin_structure(self) -> CheckResult:
        horizon = self._size(10000, 2000)
        seeds = self._size(10, 3)
        k, m = 10, 5
        violations: Dict[str, int] = {'holding_size': 0, 'set_size': 0, 'persistence': 0}

        for name in ("g1", "geo"):
            inst = make_environment(name)
            for seed in range(seeds):
                rng = np.random.default_rng(self.settings.DEFAULT_SEED + seed)
                state = MaxMinState(n=inst.n, k=k, m=m, alpha=self.settings.DEFAULT_ALPHA)
                for _ in range(horizon):
                    previous = state.holding
                    played, _, state = maxmin_step(state, inst, rng)
                    if len(state.holding) > 1:
                        violations['holding_size'] += 1
                    if len(played) not in (1, m + 1) or len(played) > k:
                        violations['set_size'] += 1
                    if previous and previous[0] in state.last_candidates and state.holding != previous:
                        violations['persistence'] += 1

        return CheckResult("maxmin-structure", not any(violations.values()),
                           {'horizon': horizon, 'seeds': seeds, **violations})

    def check_bounds(self) -> CheckResult:
        g1 = make_environment("g1")
        values = {
            'g1_m1': (winner_lb_constant(g1, 1), 4.0),
            'g1_m5': (winner_lb_constant(g1, 5), 0.8),
            'f_delta': (f_delta(16, 1.0, 0.1), 5120.0),
        }
        # g4 ties at k = 2..5, so its top-k constant is checked at k = 6
        for name, k in (("geo", 2), ("g4", 6)):
            inst = make_environment(name)
            theta = np.sort(np.asarray(inst.theta))[::-1]
            ratio = theta[0] / theta[1]
            values[f"{name}_winner"] = (winner_lb_constant(inst, 1), theta[0] * (inst.n - 1) / (ratio - 1))
            values[f"{name}_top{k}"] = (
                topk_lb_constant(inst, k), theta[0] * theta[k] / (theta[k - 1] - theta[k]) * (inst.n - k) / k
            )
        errors = {key: abs(got - want) for key, (got, want) in values.items()}
        report = BoundsService().lower_bound_constants(g1, m=1, k=2)
        passed = max(errors.values()) <= 1e-9 and report.winner_lb_constant is not None
        return CheckResult("bounds", passed, {'max_error': max(errors.values()), 'checked': len(errors)})

    def check_determinism(self) -> CheckResult:
        config = ExperimentConfig(environment="g1", algorithm="maxmin", k=4, m=2,
                                  horizon=self._size(5000, 1000), runs=self._size(4, 2),
                                  seed=self.settings.DEFAULT_SEED, checkpoints=100)
        reports = ReportService(self.settings)
        outputs = []
        for _ in range(2):
            result = self.experiments.run_experiment(config)
            outputs.append((reports.result_csv(result),
                            reports.metadata_text(result)))
        csv_equal = outputs[0][0] == outputs[1][0]
        meta_equal = outputs[0][1] == outputs[1][1]

        inst = config.resolve_instance()
        checkpoints = checkpoint_schedule(config.horizon, config.checkpoints)
        alone = run_single(config, inst, 1, checkpoints).trajectory.cumulative
        run_single(config, inst, 0, checkpoints)
        again = run_single(config, inst, 1, checkpoints).trajectory.cumulative
        isolated = bool(np.array_equal(alone, again))

        parsed_back = ExperimentConfig.from_text(outputs[0][1], self.settings) == config
        passed = csv_equal and meta_equal and isolated and parsed_back
        return CheckResult("determinism", passed, {
            'csv_identical': csv_equal, 'echo_identical': meta_equal,
            'seed_isolation': isolated, 'echo_round_trip': parsed_back,
        })

    # ------------------------------------------------------------------
    # statistical regret checks, run with --full

    def _run(self, **values) -> Any:
        values.setdefault('runs', self._size(self.settings.DEFAULT_RUNS, 5))
        values.setdefault('seed', self.settings.DEFAULT_SEED)
        values.setdefault('workers', self.settings.CONCURRENT_PROCESSING_LIMIT)
        values.setdefault('objective', DEFAULT_OBJECTIVE[values['algorithm']])
        return self.experiments.run_experiment(ExperimentConfig(**values))

    def check_sublinear_regret(self) -> CheckResult:
        horizon = self._size(100000, 10000)
        result = self._run(environment="g1", algorithm="maxmin", k=10, m=5, horizon=horizon)
        first = float(np.mean(result.first_decile_rates))
        last = float(np.mean(result.last_decile_rates))
        final, tenth = result.regret_at(horizon), result.regret_at(horizon // 10)
        passed = last <= 0.1 * first and final <= 2 * tenth
        return CheckResult("sublinear-winner-regret", passed, {
            'first_decile_rate': first, 'last_decile_rate': last,
            'regret_T': final, 'regret_T_over_10': tenth,
        })

    def check_m_scaling(self) -> CheckResult:
        horizon = self._size(50000, 5000)
        finals = {}
        for m in (1, 5, 20):
            result = self._run(environment="arithb", algorithm="maxmin", k=40, m=m, horizon=horizon)
            finals[m] = result.mean_final_regret()
        passed = finals[1] > finals[5] > finals[20] and finals[20] <= 0.8 * finals[1]
        return CheckResult("m-scaling", passed, {f"regret_m{m}": r for m, r in finals.items()})

    def check_baseline_ordering(self) -> CheckResult:
        horizon = self._size(100000, 10000)
        details: Dict[str, Any] = {}
        passed = True
        for name in ("g1", "geo"):
            ours = self._run(environment=name, algorithm="maxmin", k=10, m=5, horizon=horizon)
            base = self._run(environment=name, algorithm="sp-ts", objective="winner", k=10, m=5, horizon=horizon)
            pooled = math.hypot(ours.standard_error(), base.standard_error())
            gap = base.mean_final_regret() - ours.mean_final_regret()
            details[f"{name}_maxmin"] = ours.mean_final_regret()
            details[f"{name}_sp_ts"] = base.mean_final_regret()
            passed = passed and gap > pooled
        return CheckResult("baseline-ordering", passed, details)

    def check_topk_identification(self) -> CheckResult:
        horizon = self._size(100000, 10000)
        result = self._run(environment="g4", algorithm="rec-maxmin", k=5, horizon=horizon)
        inst = make_environment("g4")
        delta_prime_max = BoundsService().lower_bound_constants(inst, k=5).delta_prime_max
        identified = sum(1 for x in result.identified if x)
        last_rate = float(np.mean(result.last_decile_rates))
        needed = math.ceil(0.9 * result.runs)
        passed = identified >= needed and last_rate <= 0.01 * delta_prime_max
        return CheckResult("topk-identification", passed, {
            'identified': f"{identified}/{result.runs}", 'last_decile_rate': last_rate,
            'limit': 0.01 * delta_prime_max,
        })

    def check_environment_hardness(self) -> CheckResult:
        horizon = self._size(100000, 10000)
        easy = self._run(environment="g4", algorithm="rec-maxmin", k=10, horizon=horizon)
        hard = self._run(environment="har", algorithm="rec-maxmin", k=10, horizon=horizon)
        passed = easy.mean_final_regret() < hard.mean_final_regret()
        return CheckResult("environment-hardness", passed, {
            'regret_g4': easy.mean_final_regret(), 'regret_har': hard.mean_final_regret(),
        })
