import argparse
import json
import logging
import os
import sys
from typing import Dict, List, Optional

from config.settings import Settings
from models.environments import environment_info, environment_names, make_environment
from models.errors import (
    ConfigError,
    InvalidParameterError,
    MnlBanditError,
    OutputError,
    UnknownEnvironmentError,
)
from models.experiment_config import ExperimentConfig
from models.mnl_instance import MnlInstance
from services.bounds_service import BoundsService
from services.experiment_service import ExperimentService
from services.report_service import ReportService
from services.result_manager import ResultManager
from services.validation_service import ValidationService
from utils.file_handler import parse_float_list

logger = logging.getLogger("mnl_bandits")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


def init_services(settings: Settings, show_progress: Optional[bool] = None) -> Dict[str, object]:
    report_service = ReportService(settings)
    return {
        'settings': settings,
        'experiments': ExperimentService(settings, show_progress=show_progress),
        'reports': report_service,
        'bounds': BoundsService(),
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mnl-bandits",
        description="Regret minimisation over subsets with multinomial-logit relative feedback",
    )
    parser.add_argument("--debug", action="store_true", help="verbose logs and tracebacks")
    parser.add_argument("--no-progress", action="store_true", help="hide progress bars")
    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser("simulate", help="run a seeded multi-run experiment")
    simulate.add_argument("--config", required=True, help="key = value experiment file")
    simulate.add_argument("--out", help="output directory (default: config 'output')")
    simulate.add_argument("--name", help="result name inside the output directory")
    simulate.add_argument("--logx", action="store_true", help="log-scaled x axis in the chart")
    simulate.add_argument("--dump-stats", action="store_true", help="write each run's final win matrix")

    sweep = sub.add_parser("sweep", help="repeat an experiment over the values of one key")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--vary", required=True, help="key=v1,v2,... e.g. m=1,5,10,20")
    sweep.add_argument("--out")
    sweep.add_argument("--logx", action="store_true")
    sweep.add_argument("--dump-stats", action="store_true")

    bounds = sub.add_parser("bounds", help="instance-dependent regret bound constants")
    source = bounds.add_mutually_exclusive_group(required=True)
    source.add_argument("--env", help=f"one of {', '.join(environment_names())}")
    source.add_argument("--theta", help="comma-separated utilities")
    bounds.add_argument("--k", type=int, default=2)
    bounds.add_argument("--m", type=int, default=1)
    bounds.add_argument("--alpha", type=float)
    bounds.add_argument("--delta", type=float, default=0.1)
    bounds.add_argument("--horizon", type=int)
    bounds.add_argument("--out", help="also write the report to this file")

    validate = sub.add_parser("validate", help="run the acceptance checks")
    validate.add_argument("--quick", action="store_true", help="reduced sizes for a smoke run")
    validate.add_argument("--full", action="store_true", help="add the statistical regret checks")

    plot = sub.add_parser("plot", help="overlay result CSVs in one SVG")
    plot.add_argument("csv", nargs="+")
    plot.add_argument("--out", required=True)
    plot.add_argument("--logx", action="store_true")
    plot.add_argument("--labels", help="comma-separated legend labels, one per CSV")

    sub.add_parser("environments", help="list the named environments")

    results = sub.add_parser("results", help="list, show or delete saved results")
    results.add_argument("action", choices=["list", "show", "delete"])
    results.add_argument("name", nargs="?", help="result name for show and delete")
    results.add_argument("--out", help="results directory (default: MNL_OUTPUT_DIR)")

    sub.add_parser("info", help="print the effective settings and library versions")

    return parser


def run_simulate(services, args) -> int:
    settings = services['settings']
    config = ExperimentConfig.from_file(args.config, settings)
    result = services['experiments'].run_experiment(config, keep_stats=args.dump_stats)
    manager = ResultManager(args.out or config.output, settings, services['reports'])
    saved = manager.save_result(result, name=args.name, log_x=args.logx, dump_stats=args.dump_stats)
    print_summary(result.get_summary())
    print(f"written: {saved['csv']}, {saved['svg']}, {saved['metadata']}")
    return EXIT_OK


def run_sweep(services, args) -> int:
    settings = services['settings']
    if '=' not in args.vary:
        raise ConfigError(f"--vary expects key=v1,v2,..., got {args.vary!r}")
    key, raw_values = (part.strip() for part in args.vary.split('=', 1))
    values = [v.strip() for v in raw_values.split(',') if v.strip()]
    # theta lists contain commas themselves
    if key == 'theta':
        raise ConfigError("theta cannot be swept; sweep 'environment' instead")

    config = ExperimentConfig.from_file(args.config, settings)
    results = services['experiments'].run_sweep(config, key, values, keep_stats=args.dump_stats)

    sweep_dir = os.path.join(args.out or config.output, f"sweep_{key}")
    manager = ResultManager(sweep_dir, settings, services['reports'])
    series = []
    for value, result in results:
        manager.save_result(result, name=f"{key}_{value}", log_x=args.logx, dump_stats=args.dump_stats)
        series.append(services['reports'].chart_series(result, label=f"{key}={value}"))
        print(f"{key}={value}: mean final regret {result.mean_final_regret():.6g} "
              f"(std {result.std_final_regret():.6g})")
    overlay = services['reports'].write_overlay(
        series, os.path.join(sweep_dir, "overlay.svg"), log_x=args.logx,
        title=f"Cumulative regret by {key}",
    )
    print(f"written: {overlay}")
    return EXIT_OK


def run_bounds(services, args) -> int:
    settings = services['settings']
    if args.env:
        inst = make_environment(args.env)
    else:
        inst = MnlInstance(tuple(parse_float_list(args.theta, key='theta')), name="custom")
    report = services['bounds'].lower_bound_constants(
        inst, m=args.m, k=args.k,
        alpha=args.alpha if args.alpha is not None else settings.DEFAULT_ALPHA,
        delta=args.delta,
        horizon=args.horizon if args.horizon is not None else settings.DEFAULT_HORIZON,
    )
    sys.stdout.write(report.to_text())
    if args.out:
        services['reports'].write_bounds(report, args.out)
    return EXIT_OK


def run_validate(services, args) -> int:
    validator = ValidationService(services['settings'], quick=args.quick)
    results = validator.run_all(full=args.full)
    for result in results:
        print(result.to_line())
    failed = [r.name for r in results if not r.passed]
    if failed:
        logger.error("Validation failed: %s", ", ".join(failed))
        return EXIT_FAILURE
    return EXIT_OK


def run_plot(services, args) -> int:
    labels = [x.strip() for x in args.labels.split(',')] if args.labels else None
    path = services['reports'].plot_files(args.csv, args.out, log_x=args.logx, labels=labels)
    print(f"written: {path}")
    return EXIT_OK


def run_environments(services, args) -> int:
    for name in environment_names():
        info = environment_info(name)
        print(f"{name}: n={info['n']}, {info['name']} ({info['description']})")
    return EXIT_OK


def run_results(services, args) -> int:
    manager = ResultManager(args.out, services['settings'], services['reports'])
    if args.action == 'list':
        for name in manager.list_results():
            summary = manager.get_result_info(name).get('summary', {})
            print(f"{name}: {summary.get('algorithm')} on {summary.get('environment')}, "
                  f"mean final regret {summary.get('mean_final_regret', float('nan')):.6g}")
        return EXIT_OK

    if not args.name:
        raise ConfigError(f"results {args.action} needs a result name")
    if args.action == 'show':
        info = manager.get_result_info(args.name)
        if not info:
            raise OutputError(f"Result not found: {args.name}")
        curve = manager.load_curve(args.name)
        print_summary(info['summary'])
        print(f"fingerprint: {info['fingerprint']}")
        print(f"checkpoints: {len(curve)}")
        return EXIT_OK

    if not manager.delete_result(args.name):
        raise OutputError(f"Result not found: {args.name}")
    print(f"deleted: {args.name}")
    return EXIT_OK


def run_info(services, args) -> int:
    settings = services['settings']
    report = {'environment': settings.get_environment_info(), 'settings': settings.export_config()}
    print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_OK


def print_summary(summary: Dict[str, object]):
    for key, value in summary.items():
        if isinstance(value, float):
            value = f"{value:.6g}"
        print(f"{key}: {value}")


COMMANDS = {
    'simulate': run_simulate,
    'sweep': run_sweep,
    'bounds': run_bounds,
    'validate': run_validate,
    'plot': run_plot,
    'environments': run_environments,
    'results': run_results,
    'info': run_info,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    try:
        settings = Settings()
    except ConfigError as e:
        logger.error("%s", str(e))
        return EXIT_CONFIG
    if args.debug:
        settings.update_setting('DEBUG_MODE', True)
    settings.configure_logging()

    status = settings.validate_configuration()
    if not status["valid"]:
        for issue in status["issues"]:
            logger.error("Configuration issue: %s", issue)
        return EXIT_CONFIG

    services = init_services(settings, show_progress=False if args.no_progress else None)
    try:
        return COMMANDS[args.command](services, args)
    except (ConfigError, UnknownEnvironmentError, InvalidParameterError) as e:
        logger.error("%s", str(e))
        if settings.DEBUG_MODE:
            logger.exception("Configuration error")
        return EXIT_CONFIG
    except MnlBanditError as e:
        logger.error("%s", str(e))
        if settings.DEBUG_MODE:
            logger.exception("Command failed")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
