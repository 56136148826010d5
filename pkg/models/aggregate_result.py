from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from models.errors import InvalidParameterError
from models.experiment_config import ExperimentConfig
from models.pairwise_stats import PairwiseStats
from models.regret import RegretTrajectory
from utils.file_handler import RESULT_CSV_COLUMNS


@dataclass
class RunResult:
    """Outcome of one seeded run"""
    run_index: int
    seed: int
    trajectory: RegretTrajectory
    identified: Optional[bool] = None
    stats: Optional[PairwiseStats] = field(default=None, repr=False)

    @property
    def final_regret(self) -> float:
        return self.trajectory.final_regret


@dataclass
class AggregateResult:
    """Mean and spread of cumulative regret across the runs of one experiment"""
    config: ExperimentConfig
    checkpoints: np.ndarray
    mean: np.ndarray
    std: np.ndarray
    final_regrets: List[float]
    identified: List[Optional[bool]]
    first_decile_rates: List[float]
    last_decile_rates: List[float]
    run_stats: Dict[int, PairwiseStats] = field(default_factory=dict, repr=False)

    @classmethod
    def from_runs(cls, config: ExperimentConfig, runs: List[RunResult]) -> 'AggregateResult':
        if not runs:
            raise InvalidParameterError("Cannot aggregate an empty list of runs")
        runs = sorted(runs, key=lambda r: r.run_index)
        checkpoints = runs[0].trajectory.checkpoints
        table = pd.DataFrame(
            {r.run_index: r.trajectory.cumulative for r in runs},
            index=pd.Index(checkpoints, name='checkpoint_t'),
        )
        return cls(
            config=config,
            checkpoints=np.asarray(checkpoints, dtype=np.int64),
            mean=table.mean(axis=1).to_numpy(),
            # population std over runs
            std=table.std(axis=1, ddof=0).to_numpy(),
            final_regrets=[r.final_regret for r in runs],
            identified=[r.identified for r in runs],
            first_decile_rates=[r.trajectory.first_decile_rate() for r in runs],
            last_decile_rates=[r.trajectory.last_decile_rate() for r in runs],
            run_stats={r.run_index: r.stats for r in runs if r.stats is not None},
        )

    @property
    def runs(self) -> int:
        return len(self.final_regrets)

    def mean_final_regret(self) -> float:
        return float(np.mean(self.final_regrets))

    def std_final_regret(self) -> float:
        return float(np.std(self.final_regrets))

    def standard_error(self) -> float:
        return self.std_final_regret() / np.sqrt(self.runs)

    def regret_at(self, t: int) -> float:
        """Mean cumulative regret at the last checkpoint not after ``t``"""
        idx = int(np.searchsorted(self.checkpoints, t, side='right')) - 1
        if idx < 0:
            return 0.0
        return float(self.mean[idx])

    def identification_rate(self) -> Optional[float]:
        flags = [x for x in self.identified if x is not None]
        if not flags:
            return None
        return sum(flags) / len(flags)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            RESULT_CSV_COLUMNS[0]: self.checkpoints,
            RESULT_CSV_COLUMNS[1]: self.mean,
            RESULT_CSV_COLUMNS[2]: self.std,
        })

    def get_summary(self) -> Dict[str, Any]:
        return {
            'environment': self.config.environment,
            'algorithm': self.config.algorithm,
            'objective': self.config.objective,
            'k': self.config.k,
            'm': self.config.m,
            'horizon': self.config.horizon,
            'runs': self.runs,
            'mean_final_regret': self.mean_final_regret(),
            'std_final_regret': self.std_final_regret(),
            'first_decile_rate': float(np.mean(self.first_decile_rates)),
            'last_decile_rate': float(np.mean(self.last_decile_rates)),
            'identification_rate': self.identification_rate(),
        }
