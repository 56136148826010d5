import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from config.settings import Settings
from models.aggregate_result import AggregateResult, RunResult
from models.errors import InvalidParameterError
from models.experiment_config import ExperimentConfig
from models.mnl_instance import MnlInstance
from models.regret import (
    RegretTrajectory,
    checkpoint_schedule,
    holds_top_set,
    instant_regret_topk,
    instant_regret_winner,
)
from services.maxmin_ucb import MaxMinUCB
from services.rec_maxmin_ucb import RecMaxMinUCB
from services.self_sparring import SelfSparringTS

logger = logging.getLogger(__name__)


def make_policy(config: ExperimentConfig, n: int):
    if config.algorithm == "maxmin":
        return MaxMinUCB(n=n, k=config.k, m=config.m, alpha=config.alpha)
    if config.algorithm == "rec-maxmin":
        return RecMaxMinUCB(n=n, k=config.k, alpha=config.alpha)
    if config.algorithm == "sp-ts":
        return SelfSparringTS(n=n, k=config.k, m=config.m, objective=config.objective)
    raise InvalidParameterError(f"Unknown algorithm {config.algorithm!r}")


def regret_function(config: ExperimentConfig, inst: MnlInstance) -> Callable[[Tuple[int, ...]], float]:
    if config.objective == "winner":
        return lambda played: instant_regret_winner(inst, played)
    return lambda played: instant_regret_topk(inst, played, config.k)


def run_single(config: ExperimentConfig, inst: MnlInstance, run_index: int,
               checkpoints: np.ndarray, keep_stats: bool = False) -> RunResult:
    """One seeded trajectory; depends only on (config, run_index)"""
    seed = config.seed + run_index
    rng = np.random.default_rng(seed)
    policy = make_policy(config, inst.n)
    regret = regret_function(config, inst)
    trajectory = RegretTrajectory(config.objective, config.horizon, checkpoints)

    # identified: the held set matches the optimal set, up to theta ties, through the final decile
    watch_from = config.horizon - max(config.horizon // 10, 1)
    target_size = 1 if config.objective == "winner" else config.k
    identified: Optional[bool] = None if policy.holding_items() is None else True

    for t in range(1, config.horizon + 1):
        played, _ = policy.step(inst, rng)
        trajectory.add(regret(played))
        if identified and t > watch_from and not holds_top_set(inst, policy.holding_items(), target_size):
            identified = False

    stats = policy.stats.copy() if keep_stats and policy.stats is not None else None
    return RunResult(run_index=run_index, seed=seed, trajectory=trajectory,
                     identified=identified, stats=stats)


class ExperimentService:
    """Run seeded multi-run experiments and sweeps"""

    def __init__(self, settings: Optional[Settings] = None, show_progress: Optional[bool] = None):
        self.settings = settings or Settings()
        self.show_progress = self.settings.SHOW_PROGRESS if show_progress is None else show_progress

    def run_experiment(self, config: ExperimentConfig, keep_stats: bool = False) -> AggregateResult:
        inst = config.resolve_instance()
        checkpoints = checkpoint_schedule(config.horizon, config.checkpoints)
        logger.info(
            "Running %s on %s (k=%d, m=%d, T=%d, runs=%d, workers=%d)",
            config.algorithm, inst.name, config.k, config.m, config.horizon, config.runs, config.workers,
        )

        results: Dict[int, RunResult] = {}
        progress = tqdm(total=config.runs, desc=f"{config.algorithm}/{inst.name}",
                        disable=not self.show_progress, leave=False)
        try:
            if config.workers == 1:
                for r in range(config.runs):
                    results[r] = run_single(config, inst, r, checkpoints, keep_stats)
                    progress.update(1)
            else:
                with ProcessPoolExecutor(max_workers=config.workers) as pool:
                    futures = {
                        pool.submit(run_single, config, inst, r, checkpoints, keep_stats): r
                        for r in range(config.runs)
                    }
                    for future in as_completed(futures):
                        results[futures[future]] = future.result()
                        progress.update(1)
        finally:
            progress.close()

        # merged in run order regardless of completion order
        aggregate = AggregateResult.from_runs(config, [results[r] for r in sorted(results)])
        logger.info("Finished %s on %s: mean final regret %.4f (std %.4f)",
                    config.algorithm, inst.name, aggregate.mean_final_regret(), aggregate.std_final_regret())
        return aggregate

    def run_sweep(self, config: ExperimentConfig, key: str,
                  values: Sequence[str], keep_stats: bool = False) -> List[Tuple[str, AggregateResult]]:
        """Cartesian sweep over one config key, in the order given"""
        if not values:
            raise InvalidParameterError("Sweep needs at least one value")
        variants = [(str(v).strip(), config.with_value(key, str(v).strip())) for v in values]
        logger.info("Sweeping %s over %s", key, ", ".join(v for v, _ in variants))
        return [(value, self.run_experiment(variant, keep_stats)) for value, variant in variants]
