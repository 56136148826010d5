import json
import logging
import os

import pytest

from app import EXIT_CONFIG, EXIT_FAILURE, EXIT_OK, build_parser, main

CONFIG = """\
environment = g1
algorithm = maxmin
k = 3
m = 2
horizon = 150
runs = 2
checkpoints = 20
"""


@pytest.fixture(autouse=True)
def restore_logging(settings):
    root = logging.getLogger()
    saved_handlers, saved_level = list(root.handlers), root.level
    yield
    root.handlers[:] = saved_handlers
    root.setLevel(saved_level)


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "exp.txt"
    path.write_text(CONFIG)
    return str(path)


def test_parser_requires_a_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_bounds_g1(capsys):
    assert main(["bounds", "--env", "g1", "--k", "1"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "winner_lb_constant = 4\n" in out
    assert "f_delta = inf" in out


def test_bounds_custom_theta_to_file(tmp_path, capsys):
    out_file = tmp_path / "bounds.txt"
    code = main(["bounds", "--theta", "1, 0.5, 0.25", "--k", "1", "--alpha", "1", "--out", str(out_file)])
    assert code == EXIT_OK
    assert out_file.read_text() == capsys.readouterr().out


def test_bounds_unknown_environment():
    assert main(["bounds", "--env", "g9"]) == EXIT_CONFIG


def test_bounds_bad_k():
    assert main(["bounds", "--env", "g1", "--k", "16"]) == EXIT_CONFIG


def test_simulate_writes_outputs(config_file, tmp_path, capsys):
    out = tmp_path / "results"
    assert main(["--no-progress", "simulate", "--config", config_file, "--out", str(out), "--name", "demo"]) == EXIT_OK
    for name in ("regret.csv", "regret.svg", "config.txt"):
        assert (out / "demo" / name).exists()
    assert (out / "index.json").exists()
    assert "mean_final_regret" in capsys.readouterr().out


def test_simulate_missing_config(tmp_path):
    assert main(["simulate", "--config", str(tmp_path / "absent.txt")]) == EXIT_CONFIG


def test_simulate_invalid_config(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("algorithm = maxmin\nk = 2\nm = 2\n")
    assert main(["simulate", "--config", str(path)]) == EXIT_CONFIG


def test_sweep(config_file, tmp_path):
    out = tmp_path / "sweeps"
    assert main(["--no-progress", "sweep", "--config", config_file, "--vary", "m=1,2", "--out", str(out)]) == EXIT_OK
    sweep_dir = out / "sweep_m"
    assert (sweep_dir / "m_1" / "regret.csv").exists()
    assert (sweep_dir / "m_2" / "regret.csv").exists()
    assert (sweep_dir / "overlay.svg").read_text().count("<polyline") == 2


@pytest.mark.parametrize("vary", ["m", "theta=1,2"])
def test_sweep_rejects_bad_vary(config_file, tmp_path, vary):
    assert main(["sweep", "--config", config_file, "--vary", vary, "--out", str(tmp_path)]) == EXIT_CONFIG


def test_plot_round_trip(config_file, tmp_path):
    out = tmp_path / "results"
    main(["--no-progress", "simulate", "--config", config_file, "--out", str(out), "--name", "a"])
    svg = tmp_path / "overlay.svg"
    code = main(["plot", str(out / "a" / "regret.csv"), "--out", str(svg), "--labels", "maxmin"])
    assert code == EXIT_OK
    assert ">maxmin</text>" in svg.read_text()


def test_plot_missing_csv(tmp_path):
    assert main(["plot", str(tmp_path / "none.csv"), "--out", str(tmp_path / "o.svg")]) == EXIT_FAILURE


def test_invalid_settings_exit(monkeypatch):
    monkeypatch.setenv("MNL_DEFAULT_ALPHA", "0.4")
    assert main(["bounds", "--env", "g1"]) == EXIT_CONFIG


def test_outputs_are_reproducible(config_file, tmp_path):
    for name in ("one", "two"):
        main(["--no-progress", "simulate", "--config", config_file, "--out", str(tmp_path), "--name", name])
    for filename in ("regret.csv", "regret.svg", "config.txt"):
        with open(os.path.join(tmp_path, "one", filename), 'rb') as a, \
                open(os.path.join(tmp_path, "two", filename), 'rb') as b:
            assert a.read() == b.read()


def test_malformed_environment_variable_is_a_config_error(monkeypatch):
    monkeypatch.setenv("MNL_DEFAULT_RUNS", "many")
    assert main(["bounds", "--env", "g1"]) == EXIT_CONFIG


def test_environments_listing(capsys):
    assert main(["environments"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 7
    assert lines[0].startswith("g1: n=16, One strong item")


def test_results_list_show_delete(config_file, tmp_path, capsys):
    out = str(tmp_path / "results")
    main(["--no-progress", "simulate", "--config", config_file, "--out", out, "--name", "demo"])
    capsys.readouterr()

    assert main(["results", "list", "--out", out]) == EXIT_OK
    assert capsys.readouterr().out.startswith("demo: maxmin on g1, mean final regret ")

    assert main(["results", "show", "demo", "--out", out]) == EXIT_OK
    shown = capsys.readouterr().out
    assert "checkpoints: 20" in shown
    assert "fingerprint: " in shown

    assert main(["results", "delete", "demo", "--out", out]) == EXIT_OK
    assert not (tmp_path / "results" / "demo").exists()
    assert main(["results", "show", "demo", "--out", out]) == EXIT_FAILURE
    assert main(["results", "delete", "demo", "--out", out]) == EXIT_FAILURE


def test_results_show_needs_a_name(tmp_path):
    assert main(["results", "show", "--out", str(tmp_path)]) == EXIT_CONFIG


def test_info_prints_settings(capsys):
    assert main(["info"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report['environment']['configuration_valid'] is True
    assert report['settings']['experiment']['runs'] == 50
