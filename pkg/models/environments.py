from typing import Any, Dict, List, Tuple

from models.errors import UnknownEnvironmentError
from models.mnl_instance import MnlInstance


def _arithmetic(n: int, start: float, step: float) -> Tuple[float, ...]:
    return tuple(round(start - i * step, 12) for i in range(n))


def _geometric(n: int, start: float, ratio: float) -> Tuple[float, ...]:
    return tuple(start * ratio ** i for i in range(n))


def _harmonic(n: int) -> Tuple[float, ...]:
    # item 1 would get 1 - 1/1 = 0, so it is pinned at 1
    return (1.0,) + tuple(1.0 - 1.0 / i for i in range(2, n + 1))


class EnvironmentCatalog:
    """Named synthetic MNL environments used in the experiment suite"""

    def __init__(self):
        self.environments = {
            'g1': {
                'name': 'One strong item',
                'description': 'theta_1 = 0.8, every other item 0.2',
                'n': 16,
                'theta': lambda: (0.8,) + (0.2,) * 15,
            },
            'g4': {
                'name': 'Four utility groups',
                'description': 'theta_1 = 1, items 2-6 at 0.7, items 7-11 at 0.5, the rest 0.01',
                'n': 16,
                'theta': lambda: (1.0,) + (0.7,) * 5 + (0.5,) * 5 + (0.01,) * 5,
            },
            'arith': {
                'name': 'Arithmetic progression',
                'description': 'theta_1 = 1, consecutive gap 0.06',
                'n': 16,
                'theta': lambda: _arithmetic(16, 1.0, 0.06),
            },
            'geo': {
                'name': 'Geometric progression',
                'description': 'theta_1 = 1, consecutive ratio 0.8',
                'n': 16,
                'theta': lambda: _geometric(16, 1.0, 0.8),
            },
            'har': {
                'name': 'Harmonic',
                'description': 'theta_1 = 1, theta_i = 1 - 1/i otherwise',
                'n': 16,
                'theta': lambda: _harmonic(16),
            },
            'arithb': {
                'name': 'Arithmetic progression (large)',
                'description': 'theta_1 = 1, consecutive gap 0.02',
                'n': 50,
                'theta': lambda: _arithmetic(50, 1.0, 0.02),
            },
            'geob': {
                'name': 'Geometric progression (large)',
                'description': 'theta_1 = 1, consecutive ratio 0.9',
                'n': 50,
                'theta': lambda: _geometric(50, 1.0, 0.9),
            },
        }

    def get_all_environments(self) -> List[str]:
        return list(self.environments.keys())

    def get_environment_info(self, name: str) -> Dict[str, Any]:
        info = self.environments.get(name)
        if info is None:
            return {}
        return {key: value for key, value in info.items() if key != 'theta'}

    def make(self, name: str) -> MnlInstance:
        info = self.environments.get(name)
        if info is None:
            valid = ", ".join(self.get_all_environments())
            raise UnknownEnvironmentError(f"Unknown environment {name!r}; valid names are: {valid}")
        return MnlInstance(info['theta'](), name=name)


_catalog = EnvironmentCatalog()


def make_environment(name: str) -> MnlInstance:
    return _catalog.make(name)


def environment_names() -> List[str]:
    return _catalog.get_all_environments()


def environment_info(name: str) -> Dict[str, Any]:
    """Name, size and description of one environment; empty for unknown names"""
    return _catalog.get_environment_info(name)
