import logging
import os
from typing import Dict, List, Optional, Sequence

from config.settings import Settings
from models.aggregate_result import AggregateResult
from models.bounds import BoundsReport
from models.errors import InvalidParameterError
from utils.file_handler import FileHandler, sanitize_filename
from utils.svg_chart import ChartSeries, render_line_chart

logger = logging.getLogger(__name__)

CSV_NAME = "regret.csv"
SVG_NAME = "regret.svg"
METADATA_NAME = "config.txt"


class ReportService:
    """Emit result CSVs, config echoes and SVG charts"""

    def __init__(self, settings: Optional[Settings] = None, file_handler: Optional[FileHandler] = None):
        self.settings = settings or Settings()
        self.file_handler = file_handler or FileHandler()

    def result_csv(self, result: AggregateResult) -> str:
        return result.to_frame().to_csv(index=False, float_format="%.10g", lineterminator="\n")

    def metadata_text(self, result: AggregateResult) -> str:
        """Config echo; the comment header carries the summary, the body parses back to the config"""
        summary = result.get_summary()
        lines = [f"# {self.settings.APP_NAME} {self.settings.APP_VERSION} result"]
        for key, value in summary.items():
            if isinstance(value, float):
                value = f"{value:.10g}"
            lines.append(f"# {key}: {value}")
        return "\n".join(lines) + "\n" + result.config.to_text()

    def chart_series(self, result: AggregateResult, label: Optional[str] = None) -> ChartSeries:
        cfg = result.config
        return ChartSeries(
            label=label or f"{cfg.algorithm} {cfg.environment} k={cfg.k} m={cfg.m}",
            x=result.checkpoints.tolist(),
            y=result.mean.tolist(),
        )

    def emit_outputs(self, result: AggregateResult, out_dir: str, log_x: bool = False) -> Dict[str, str]:
        """Write CSV, config echo and SVG for one result; returns the written paths"""
        paths = {
            'csv': os.path.join(out_dir, CSV_NAME),
            'metadata': os.path.join(out_dir, METADATA_NAME),
            'svg': os.path.join(out_dir, SVG_NAME),
        }
        self.file_handler.write_text(paths['csv'], self.result_csv(result))
        self.file_handler.write_text(paths['metadata'], self.metadata_text(result))
        self.file_handler.write_text(paths['svg'], render_line_chart([self.chart_series(result)], log_x=log_x))
        logger.info("Results written to %s", out_dir)
        return paths

    def write_stats(self, result: AggregateResult, out_dir: str) -> List[str]:
        """One ``stats_run<r>.csv`` (i,j,wins) per kept run"""
        paths = []
        for run_index, stats in sorted(result.run_stats.items()):
            path = os.path.join(out_dir, f"stats_run{run_index}.csv")
            self.file_handler.write_text(path, stats.to_frame().to_csv(index=False, lineterminator="\n"))
            paths.append(path)
        return paths

    def write_overlay(self, series: List[ChartSeries], path: str, log_x: bool = False,
                      title: str = "Cumulative regret") -> str:
        self.file_handler.write_text(path, render_line_chart(series, title=title, log_x=log_x))
        logger.info("Chart written to %s", path)
        return path

    def plot_files(self, csv_paths: Sequence[str], out_path: str, log_x: bool = False,
                   labels: Optional[Sequence[str]] = None) -> str:
        """Overlay the curves of several result CSVs in one SVG"""
        if not csv_paths:
            raise InvalidParameterError("plot needs at least one result CSV")
        if labels is not None and len(labels) != len(csv_paths):
            raise InvalidParameterError("One label per CSV is required")

        series = []
        for i, path in enumerate(csv_paths):
            frame = self.file_handler.read_result_csv(path)
            label = labels[i] if labels is not None else _label_for(path)
            series.append(ChartSeries(label=label,
                                      x=frame['checkpoint_t'].tolist(),
                                      y=frame['mean_cum_regret'].tolist()))
        return self.write_overlay(series, out_path, log_x=log_x)

    def write_bounds(self, report: BoundsReport, path: str) -> str:
        self.file_handler.write_text(path, report.to_text())
        return path


def _label_for(path: str) -> str:
    # results/<label>/regret.csv is labelled by its directory
    base = os.path.basename(path)
    parent = os.path.basename(os.path.dirname(os.path.abspath(path)))
    if base == CSV_NAME and parent:
        return parent
    return sanitize_filename(os.path.splitext(base)[0])
