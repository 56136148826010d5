import math
from dataclasses import dataclass, field, asdict
from typing import Any, Dict, List, Optional


@dataclass
class BoundsReport:
    """Instance-dependent constants of the regret lower and upper bounds.

    Lower-bound entries are the multipliers of ln T. A constant whose gap
    is zero on this instance is left as None and explained in ``flags``.
    Per-item vectors are indexed by 0-based item and reported 1-indexed.
    """
    instance: str
    n: int
    m: int
    k: int
    alpha: float
    delta: float
    horizon: int

    winner_lb_constant: Optional[float] = None
    winner_lb_topm_constant: Optional[float] = None
    winner_lb_pairwise_constant: Optional[float] = None
    topk_lb_constant: Optional[float] = None

    f_delta: float = math.nan
    delta_i: Dict[int, float] = field(default_factory=dict)
    dhat_i: Dict[int, float] = field(default_factory=dict)
    d_1i: Dict[int, float] = field(default_factory=dict)
    d_total: Optional[float] = None
    d_max: Optional[float] = None
    delta_hat_max: float = math.nan
    t0_winner: Optional[float] = None
    winner_ub_whp: Optional[float] = None
    winner_ub_expected: Optional[float] = None

    delta_prime_max: float = math.nan
    d_slot: Dict[int, float] = field(default_factory=dict)
    dbar_k: Optional[float] = None
    dhat_b: Dict[int, float] = field(default_factory=dict)
    topk_ub_whp: Optional[float] = None
    topk_ub_expected: Optional[float] = None

    flags: List[str] = field(default_factory=list)

    def flag(self, message: str):
        if message not in self.flags:
            self.flags.append(message)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        for key in ('delta_i', 'dhat_i', 'd_1i', 'd_slot', 'dhat_b'):
            data[key] = {i + 1: v for i, v in sorted(getattr(self, key).items())}
        return data

    def to_text(self) -> str:
        """Key-value report, one constant per line"""
        lines = [f"# regret bound constants for {self.instance}"]
        for key, value in self.to_dict().items():
            if key == 'instance':
                continue
            if isinstance(value, dict):
                value = ", ".join(f"{i}:{_fmt(v)}" for i, v in value.items())
            elif isinstance(value, list):
                value = "; ".join(value) if value else "none"
            else:
                value = _fmt(value)
            lines.append(f"{key} = {value}")
        return "\n".join(lines) + "\n"


def _fmt(value: Any) -> str:
    if value is None:
        return "undefined"
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)
