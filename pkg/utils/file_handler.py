import os
import re
from typing import Dict, Iterable, List, Optional

import pandas as pd

from models.errors import ConfigError, OutputError

RESULT_CSV_COLUMNS = ['checkpoint_t', 'mean_cum_regret', 'std_cum_regret']


def parse_key_values(text: str, allowed: Optional[Iterable[str]] = None) -> Dict[str, str]:
    """Parse a flat ``key = value`` document.

    One pair per line; ``#`` starts a comment anywhere on a line; blank
    lines are skipped. Duplicate keys, keys outside ``allowed`` and lines
    without ``=`` are configuration errors.
    """
    allowed_keys = set(allowed) if allowed is not None else None
    pairs: Dict[str, str] = {}

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigError(f"Line {line_no}: expected 'key = value', got {raw.strip()!r}")

        key, value = (part.strip() for part in line.split('=', 1))
        if not key:
            raise ConfigError(f"Line {line_no}: missing key")
        if allowed_keys is not None and key not in allowed_keys:
            raise ConfigError(
                f"Line {line_no}: unknown key {key!r}; valid keys are {', '.join(sorted(allowed_keys))}"
            )
        if key in pairs:
            raise ConfigError(f"Line {line_no}: duplicate key {key!r}")
        pairs[key] = value

    return pairs


def parse_float_list(value: str, key: str = 'value') -> List[float]:
    parts = [p.strip() for p in value.strip().strip('[]').split(',') if p.strip()]
    if not parts:
        raise ConfigError(f"{key!r} must be a non-empty comma-separated list")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise ConfigError(f"{key!r} contains a non-numeric entry: {value!r}")


def sanitize_filename(filename: str) -> str:
    """Make a label safe to use as a file or directory name"""
    sanitized = re.sub(r'[<>:"/\\|?*\s=,]+', '_', filename).strip('_')
    sanitized = sanitized[:100]
    return sanitized or 'unnamed'


class FileHandler:
    """Read and write the plain-text and CSV files used by the harness"""

    def read_text(self, path: str) -> str:
        try:
            with open(path, 'r', encoding='utf-8') as f:
                return f.read()
        except OSError as e:
            raise ConfigError(f"Cannot read {path}: {str(e)}")

    def write_text(self, path: str, content: str):
        try:
            directory = os.path.dirname(path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            # newline='' keeps bytes identical across platforms
            with open(path, 'w', encoding='utf-8', newline='') as f:
                f.write(content)
        except OSError as e:
            raise OutputError(f"Failed to write {path}: {str(e)}")

    def read_result_csv(self, path: str) -> pd.DataFrame:
        """Load a result curve written by ReportService"""
        try:
            frame = pd.read_csv(path)
        except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            raise OutputError(f"Failed to read {path}: {str(e)}")

        missing = [c for c in RESULT_CSV_COLUMNS if c not in frame.columns]
        if missing:
            raise OutputError(f"{path} is not a result file; missing columns {missing}")
        return frame[RESULT_CSV_COLUMNS]
