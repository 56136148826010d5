import json
import logging
import os
from datetime import datetime
from typing import Any, Dict, List, Optional

import pandas as pd

from config.settings import Settings
from models.aggregate_result import AggregateResult
from models.errors import OutputError
from services.report_service import CSV_NAME, ReportService
from utils.file_handler import FileHandler, sanitize_filename

logger = logging.getLogger(__name__)

INDEX_NAME = "index.json"


class ResultManager:
    """Stores experiment results under one output directory and keeps an index of them"""

    def __init__(self, results_dir: Optional[str] = None, settings: Optional[Settings] = None,
                 report_service: Optional[ReportService] = None):
        self.settings = settings or Settings()
        self.results_dir = results_dir or self.settings.OUTPUT_DIR
        self.report_service = report_service or ReportService(self.settings)
        self.file_handler = self.report_service.file_handler

    def save_result(self, result: AggregateResult, name: Optional[str] = None,
                    log_x: bool = False, dump_stats: bool = False) -> Dict[str, Any]:
        """Write a result to ``<results_dir>/<name>/`` and register it in the index"""
        name = sanitize_filename(name or self.default_name(result))
        out_dir = os.path.join(self.results_dir, name)
        paths = self.report_service.emit_outputs(result, out_dir, log_x=log_x)
        if dump_stats:
            paths['stats'] = self.report_service.write_stats(result, out_dir)

        entry = {
            'fingerprint': result.config.fingerprint(),
            'files': {key: os.path.relpath(p, self.results_dir) if isinstance(p, str)
                      else [os.path.relpath(x, self.results_dir) for x in p]
                      for key, p in paths.items()},
            'summary': result.get_summary(),
            'created': datetime.now().isoformat(),
        }
        self._update_result_index(name, entry)
        logger.info("Result saved: %s", name)
        return {'name': name, 'dir': out_dir, **paths}

    def default_name(self, result: AggregateResult) -> str:
        cfg = result.config
        return f"{cfg.algorithm}_{cfg.environment}_k{cfg.k}_m{cfg.m}"

    def list_results(self) -> List[str]:
        return sorted(self._load_result_index().keys())

    def get_result_info(self, name: str) -> Dict[str, Any]:
        return self._load_result_index().get(name, {})

    def result_csv_path(self, name: str) -> str:
        return os.path.join(self.results_dir, name, CSV_NAME)

    def load_curve(self, name: str) -> pd.DataFrame:
        path = self.result_csv_path(name)
        if not os.path.exists(path):
            raise OutputError(f"Result not found: {name}")
        return self.file_handler.read_result_csv(path)

    def delete_result(self, name: str) -> bool:
        """Remove a result's files and its index entry"""
        out_dir = os.path.join(self.results_dir, name)
        try:
            if os.path.isdir(out_dir):
                for filename in os.listdir(out_dir):
                    filepath = os.path.join(out_dir, filename)
                    if os.path.isfile(filepath):
                        os.remove(filepath)
                os.rmdir(out_dir)
        except OSError as e:
            raise OutputError(f"Failed to delete result {name}: {str(e)}")

        index = self._load_result_index()
        if name not in index:
            return False
        del index[name]
        self._save_result_index(index)
        logger.info("Result deleted: %s", name)
        return True

    def _update_result_index(self, name: str, entry: Dict[str, Any]):
        index = self._load_result_index()
        index[name] = entry
        self._save_result_index(index)

    def _load_result_index(self) -> Dict[str, Any]:
        index_file = os.path.join(self.results_dir, INDEX_NAME)
        if not os.path.exists(index_file):
            return {}
        try:
            with open(index_file, 'r', encoding='utf-8') as f:
                return json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.warning("Ignoring unreadable result index %s: %s", index_file, str(e))
            return {}

    def _save_result_index(self, index: Dict[str, Any]):
        index_file = os.path.join(self.results_dir, INDEX_NAME)
        self.file_handler.write_text(index_file, json.dumps(index, indent=2, sort_keys=True) + "\n")
