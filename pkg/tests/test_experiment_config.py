import pytest

from config.settings import Settings
from models.errors import ConfigError
from models.experiment_config import ExperimentConfig


def test_defaults_are_valid():
    config = ExperimentConfig()
    assert (config.environment, config.algorithm, config.objective) == ("g1", "maxmin", "winner")
    assert config.horizon == 100000
    assert config.resolve_instance().n == 16


def test_text_round_trip(settings):
    config = ExperimentConfig(environment="geo", algorithm="sp-ts", objective="top-k", k=3,
                              horizon=200, runs=2, alpha=0.75)
    assert ExperimentConfig.from_text(config.to_text(), settings) == config


def test_inline_theta(settings):
    config = ExperimentConfig.from_text("theta = 3, 2, 1\nk = 3\nm = 2\n", settings)
    assert config.environment == "custom"
    assert config.theta == (3.0, 2.0, 1.0)
    assert config.resolve_instance().n == 3
    assert "theta = 3.0, 2.0, 1.0" in config.to_text()


def test_objective_follows_algorithm(settings):
    config = ExperimentConfig.from_text("algorithm = rec-maxmin\nk = 4\n# comment\n", settings)
    assert config.objective == "top-k"
    assert config.m == 3


def test_settings_supply_missing_keys(monkeypatch, settings):
    monkeypatch.setenv("MNL_DEFAULT_RUNS", "7")
    monkeypatch.setenv("MNL_DEFAULT_HORIZON", "1234")
    config = ExperimentConfig.from_text("environment = geo\n", Settings())
    assert config.runs == 7
    assert config.horizon == 1234


@pytest.mark.parametrize("text", [
    "colour = blue\n",
    "algorithm = maxmin\nobjective = top-k\nk = 3\n",
    "algorithm = rec-maxmin\nk = 16\n",
    "algorithm = maxmin\nk = 3\nm = 3\n",
    "algorithm = sp-ts\nk = 3\nm = 4\n",
    "alpha = 0.5\n",
    "horizon = 0\n",
    "seed = -1\n",
    "environment = nowhere\n",
    "runs = many\n",
    "k = 2\nk = 3\n",
    "theta = 1, x\n",
    "algorithm = bd\n",
])
def test_invalid_documents(settings, text):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_text(text, settings)


def test_config_error_is_a_value_error(settings):
    with pytest.raises(ValueError):
        ExperimentConfig.from_text("k = 99\n", settings)


def test_with_value():
    config = ExperimentConfig(k=5, m=1)
    assert config.with_value("m", "3").m == 3
    assert config.with_value("environment", "geo").resolve_instance().name == "geo"
    with pytest.raises(ConfigError):
        config.with_value("m", "9")
    with pytest.raises(ConfigError):
        config.with_value("colour", "blue")


def test_with_value_algorithm_follows_its_objective():
    config = ExperimentConfig(k=5, m=2)
    rec = config.with_value("algorithm", "rec-maxmin")
    assert (rec.objective, rec.m) == ("top-k", 4)
    back = rec.with_value("algorithm", "maxmin")
    assert (back.objective, back.m) == ("winner", 4)
    assert rec.with_value("algorithm", "sp-ts").objective == "top-k"
    assert config.with_value("algorithm", "sp-ts").objective == "winner"
    with pytest.raises(ConfigError):
        config.with_value("algorithm", "ucb")


def test_fingerprint():
    a = ExperimentConfig(k=5, m=2)
    assert a.fingerprint() == ExperimentConfig(k=5, m=2).fingerprint()
    assert a.fingerprint() != ExperimentConfig(k=5, m=3).fingerprint()
    assert len(a.fingerprint()) == 12


def test_to_dict():
    data = ExperimentConfig(theta=(2, 1), environment="pair", k=2, m=1).to_dict()
    assert data['theta'] == [2.0, 1.0]
    assert data['environment'] == "pair"
