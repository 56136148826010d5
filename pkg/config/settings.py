import logging
import os
import sys
from typing import Dict, Any

import numpy as np
import pandas as pd

from models.errors import ConfigError

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def _env_flag(name: str, default: str) -> bool:
    return os.getenv(name, default).lower() == "true"


def _env_number(name: str, default: str, kind=int):
    raw = os.getenv(name, default)
    try:
        return kind(raw)
    except ValueError:
        raise ConfigError(f"Invalid value for {name}: {raw!r}")


class Settings:
    """Application settings and configuration"""

    def __init__(self):
        self.load_settings()

    def load_settings(self):
        """Load application settings from environment and defaults"""

        # Application Configuration
        self.APP_NAME = os.getenv("MNL_APP_NAME", "MNL Subset Bandits")
        self.APP_VERSION = os.getenv("MNL_APP_VERSION", "0.1.0")
        self.DEBUG_MODE = _env_flag("MNL_DEBUG_MODE", "False")
        self.LOG_LEVEL = os.getenv("MNL_LOG_LEVEL", "INFO")

        # Experiment Defaults
        self.DEFAULT_RUNS = _env_number("MNL_DEFAULT_RUNS", "50")
        self.DEFAULT_HORIZON = _env_number("MNL_DEFAULT_HORIZON", "100000")
        self.DEFAULT_ALPHA = _env_number("MNL_DEFAULT_ALPHA", "0.51", float)
        self.DEFAULT_SEED = _env_number("MNL_DEFAULT_SEED", "0")
        self.CHECKPOINT_COUNT = _env_number("MNL_CHECKPOINT_COUNT", "500")

        # Performance Configuration
        self.CONCURRENT_PROCESSING_LIMIT = _env_number("MNL_CONCURRENT_PROCESSING_LIMIT", "1")
        self.SHOW_PROGRESS = _env_flag("MNL_SHOW_PROGRESS", "True")

        # Output Configuration
        self.OUTPUT_DIR = os.getenv("MNL_OUTPUT_DIR", "results")

        # Validation Configuration
        self.VALIDATION_DRAWS = _env_number("MNL_VALIDATION_DRAWS", "200000")
        self.VALIDATION_REPLICATIONS = _env_number("MNL_VALIDATION_REPLICATIONS", "10000")

    def get_experiment_defaults(self) -> Dict[str, Any]:
        """Defaults applied to keys a config file leaves out"""
        return {
            "runs": self.DEFAULT_RUNS,
            "horizon": self.DEFAULT_HORIZON,
            "alpha": self.DEFAULT_ALPHA,
            "seed": self.DEFAULT_SEED,
            "checkpoints": self.CHECKPOINT_COUNT,
            "workers": self.CONCURRENT_PROCESSING_LIMIT,
            "output": self.OUTPUT_DIR,
        }

    def get_validation_config(self) -> Dict[str, Any]:
        return {
            "draws": self.VALIDATION_DRAWS,
            "replications": self.VALIDATION_REPLICATIONS,
        }

    def get_output_config(self) -> Dict[str, Any]:
        return {
            "output_dir": self.OUTPUT_DIR,
            "show_progress": self.SHOW_PROGRESS,
        }

    def validate_configuration(self) -> Dict[str, Any]:
        """Validate configuration and return any issues"""
        issues = []

        if self.DEFAULT_RUNS < 1:
            issues.append("Default run count must be at least 1")

        if self.DEFAULT_HORIZON < 1:
            issues.append("Default horizon must be at least 1")

        if self.DEFAULT_ALPHA <= 0.5:
            issues.append("Exploration parameter alpha must exceed 0.5")

        if self.CHECKPOINT_COUNT < 1:
            issues.append("Checkpoint count must be at least 1")

        if self.CONCURRENT_PROCESSING_LIMIT < 1:
            issues.append("Concurrent processing limit must be at least 1")

        if self.LOG_LEVEL.upper() not in ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]:
            issues.append(f"Unknown log level {self.LOG_LEVEL!r}")

        if self.VALIDATION_DRAWS < 1000:
            issues.append("Validation draws must be at least 1000")

        return {
            "valid": len(issues) == 0,
            "issues": issues
        }

    def configure_logging(self):
        """Install the single stream handler used by the CLI"""
        level = logging.DEBUG if self.DEBUG_MODE else getattr(logging, self.LOG_LEVEL.upper(), logging.INFO)
        root = logging.getLogger()
        for handler in list(root.handlers):
            root.removeHandler(handler)
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(handler)
        root.setLevel(level)

    def get_environment_info(self) -> Dict[str, Any]:
        """Get environment information for debugging"""
        return {
            "app_name": self.APP_NAME,
            "app_version": self.APP_VERSION,
            "debug_mode": self.DEBUG_MODE,
            "python_version": sys.version.split()[0],
            "numpy_version": np.__version__,
            "pandas_version": pd.__version__,
            "configuration_valid": self.validate_configuration()["valid"]
        }

    def export_config(self) -> Dict[str, Any]:
        """Export configuration for the metadata echo"""
        return {
            "app_settings": {
                "name": self.APP_NAME,
                "version": self.APP_VERSION,
                "debug_mode": self.DEBUG_MODE
            },
            "experiment": self.get_experiment_defaults(),
            "validation": self.get_validation_config(),
            "output": self.get_output_config(),
        }

    def update_setting(self, key: str, value: Any):
        """Update a configuration setting"""
        if hasattr(self, key):
            setattr(self, key, value)
            return True
        return False
