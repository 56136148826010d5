import dataclasses
import hashlib
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

from config.settings import Settings
from models.environments import environment_names, make_environment
from models.errors import ConfigError, MnlBanditError
from models.mnl_instance import MnlInstance
from utils.file_handler import FileHandler, parse_float_list, parse_key_values

ALGORITHMS = ("maxmin", "rec-maxmin", "sp-ts")
DEFAULT_OBJECTIVE = {"maxmin": "winner", "rec-maxmin": "top-k", "sp-ts": "winner"}

CONFIG_KEYS = (
    "environment", "theta", "algorithm", "objective", "k", "m", "horizon",
    "runs", "seed", "alpha", "checkpoints", "output", "workers",
)
_INT_KEYS = ("k", "m", "horizon", "runs", "seed", "checkpoints", "workers")


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: an environment, a policy and its run protocol.

    ``theta`` overrides ``environment``; when both are given the
    environment is kept only as a label. For the top-k objective the
    feedback is a full ranking, so ``m`` is forced to ``k - 1``.
    """
    environment: str = "g1"
    algorithm: str = "maxmin"
    objective: str = "winner"
    k: int = 2
    m: int = 1
    horizon: int = 100000
    runs: int = 50
    seed: int = 0
    alpha: float = 0.51
    checkpoints: int = 500
    output: str = "results"
    workers: int = 1
    theta: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if self.theta is not None:
            object.__setattr__(self, 'theta', tuple(float(x) for x in self.theta))
        if self.objective == "top-k":
            object.__setattr__(self, 'm', self.k - 1)
        self.validate()

    def resolve_instance(self) -> MnlInstance:
        if self.theta is not None:
            return MnlInstance(self.theta, name=self.environment or "custom")
        return make_environment(self.environment)

    def validate(self):
        """Raise ConfigError on any inconsistent combination"""
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"Unknown algorithm {self.algorithm!r}; expected one of {', '.join(ALGORITHMS)}")
        if self.objective not in ("winner", "top-k"):
            raise ConfigError(f"Unknown objective {self.objective!r}; expected 'winner' or 'top-k'")
        if self.algorithm == "maxmin" and self.objective != "winner":
            raise ConfigError("maxmin minimises winner regret; use rec-maxmin or sp-ts for top-k")
        if self.algorithm == "rec-maxmin" and self.objective != "top-k":
            raise ConfigError("rec-maxmin minimises top-k regret; use maxmin or sp-ts for winner")
        if self.theta is None and self.environment not in environment_names():
            raise ConfigError(
                f"Unknown environment {self.environment!r}; valid names are: {', '.join(environment_names())}"
            )

        try:
            n = self.resolve_instance().n
        except MnlBanditError as e:
            raise ConfigError(str(e))

        if self.algorithm == "rec-maxmin":
            if not 2 <= self.k < n:
                raise ConfigError(f"rec-maxmin needs 2 <= k < n = {n}, got k = {self.k}")
        elif not 1 <= self.k <= n:
            raise ConfigError(f"k must be within 1..{n}, got {self.k}")
        if self.objective == "top-k" and self.k < 2:
            raise ConfigError("The top-k objective needs k >= 2")
        if self.algorithm == "maxmin" and not 1 <= self.m <= self.k - 1:
            raise ConfigError(f"maxmin needs 1 <= m <= k - 1, got m = {self.m}, k = {self.k}")
        if self.algorithm == "sp-ts" and self.objective == "winner" and not 1 <= self.m <= self.k:
            raise ConfigError(f"sp-ts needs 1 <= m <= k, got m = {self.m}, k = {self.k}")

        for key in ("horizon", "runs", "checkpoints", "workers"):
            if getattr(self, key) < 1:
                raise ConfigError(f"{key!r} must be at least 1, got {getattr(self, key)}")
        if self.seed < 0:
            raise ConfigError(f"'seed' must be non-negative, got {self.seed}")
        if not self.alpha > 0.5:
            raise ConfigError(f"'alpha' must exceed 0.5, got {self.alpha}")
        if not self.output:
            raise ConfigError("'output' must not be empty")

    # ------------------------------------------------------------------

    @classmethod
    def from_dict(cls, values: Dict[str, Any], settings: Optional[Settings] = None) -> 'ExperimentConfig':
        settings = settings or Settings()
        merged: Dict[str, Any] = dict(settings.get_experiment_defaults())
        merged.update({k: v for k, v in values.items() if v is not None})
        if 'objective' not in values and 'algorithm' in merged:
            merged['objective'] = DEFAULT_OBJECTIVE.get(merged['algorithm'], "winner")
        unknown = set(merged) - set(CONFIG_KEYS)
        if unknown:
            raise ConfigError(f"Unknown config keys: {', '.join(sorted(unknown))}")
        return cls(**merged)

    @classmethod
    def from_text(cls, text: str, settings: Optional[Settings] = None) -> 'ExperimentConfig':
        pairs = parse_key_values(text, allowed=CONFIG_KEYS)
        values: Dict[str, Any] = {}
        for key, raw in pairs.items():
            values[key] = _parse_value(key, raw)
        if 'theta' in values and 'environment' not in values:
            values['environment'] = "custom"
        return cls.from_dict(values, settings)

    @classmethod
    def from_file(cls, path: str, settings: Optional[Settings] = None) -> 'ExperimentConfig':
        return cls.from_text(FileHandler().read_text(path), settings)

    def with_value(self, key: str, raw: str) -> 'ExperimentConfig':
        """Copy with one key replaced, parsing ``raw`` like a config line"""
        if key not in CONFIG_KEYS:
            raise ConfigError(f"Cannot vary unknown key {key!r}")
        value = _parse_value(key, raw)
        if key == 'theta':
            return dataclasses.replace(self, theta=value)
        if key == 'algorithm':
            # maxmin and rec-maxmin serve one objective each; sp-ts keeps the current one
            objective = self.objective if value == "sp-ts" else DEFAULT_OBJECTIVE.get(value, self.objective)
            return dataclasses.replace(self, algorithm=value, objective=objective)
        return dataclasses.replace(self, **{key: value})

    def to_dict(self) -> Dict[str, Any]:
        data = dataclasses.asdict(self)
        data['theta'] = list(self.theta) if self.theta is not None else None
        return data

    def to_text(self) -> str:
        """Canonical key-value document; from_text(to_text()) == self"""
        lines = []
        for key in CONFIG_KEYS:
            value = getattr(self, key)
            if key == 'theta':
                if value is None:
                    continue
                value = ", ".join(repr(x) for x in value)
            elif key == 'alpha':
                value = repr(float(value))
            lines.append(f"{key} = {value}")
        return "\n".join(lines) + "\n"

    def fingerprint(self) -> str:
        return hashlib.sha1(self.to_text().encode('utf-8')).hexdigest()[:12]


def _parse_value(key: str, raw: str) -> Any:
    if key == 'theta':
        return tuple(parse_float_list(raw, key='theta'))
    if key in _INT_KEYS:
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"Invalid integer for {key!r}: {raw!r}")
    if key == 'alpha':
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"Invalid number for 'alpha': {raw!r}")
    if not raw:
        raise ConfigError(f"Empty value for {key!r}")
    return raw
