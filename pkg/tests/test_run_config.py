import json
import math

import pytest

from cpi_superspace.errors import ConfigError
from cpi_superspace.models.run_config import RunConfig, merge_overrides
from cpi_superspace.utils.hashing import config_hash
from cpi_superspace.utils.settings_path import SETTINGS_ENV, get_settings_path


def test_defaults_are_valid():
    config = RunConfig()
    assert config.command == "evolve"
    assert config.model.name == "harmonic"
    assert config.initial.phi == (0.1, 0.0)
    assert config.ghost_kernel.times == [0.5, 1.0, 1.5]


def test_dict_round_trip():
    config = RunConfig.from_dict({"command": "verify", "seed": 3, "verify": {"suite": "grassmann"}})
    assert RunConfig.from_dict(json.loads(json.dumps(config.to_dict()))) == config


def test_model_alias_is_canonicalized():
    config = RunConfig.from_dict({"model": {"name": "ho"}})
    assert config.model.name == "harmonic"


def test_integers_accepted_for_floats():
    config = RunConfig.from_dict({"initial": {"q": 1, "p": 0}, "quantum": {"hbars": [1, 0.5]}})
    assert config.initial.q == 1.0
    assert isinstance(config.initial.q, float)
    assert config.quantum.hbars == [1.0, 0.5]


@pytest.mark.parametrize(
    "data",
    [
        {"colour": "red"},
        {"span": {"T": 1.0, "dt": 0.1}},
        {"initial": {"q": math.nan}},
        {"initial": {"q": math.inf}},
        {"initial": {"q": "0.1"}},
        {"verify": {"slices": []}},
        {"verify": {"slices": [1, 2.5]}},
        {"integrator": {"integrator": "euler"}},
        {"integrator": {"strict_invariants": 1}},
        {"model": {"name": "duffing"}},
        {"span": {"T": -1.0}},
        {"quantum": {"sweep": "time"}},
        {"lyapunov": {"T": 1.0, "renorm_interval": 2.0}},
        {"ghost_kernel": {"epsilon": 0.0}},
        {"command": "plot"},
        {"tolerance_scale": 0.0},
        {"version": 2},
        {"span": [1.0]},
        [],
    ],
)
def test_invalid_configs(data):
    with pytest.raises(ConfigError):
        RunConfig.from_dict(data)


@pytest.mark.parametrize("command", ["verify", "liouville"])
def test_seed_required_for_random_commands(command):
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"command": command})
    assert RunConfig.from_dict({"command": command, "seed": 1}).seed == 1


def test_liouville_without_ensemble_needs_no_seed():
    config = RunConfig.from_dict({"command": "liouville", "liouville": {"compare_ensemble": False}})
    assert config.seed is None


def test_merge_overrides():
    data = {"command": "evolve", "model": {"name": "free"}}
    merged = merge_overrides(data, {"model.name": "pendulum", "span.T": 2.0, "seed": None, "command": "lyapunov"})
    assert merged == {"command": "lyapunov", "model": {"name": "pendulum"}, "span": {"T": 2.0}}
    assert data["model"]["name"] == "free"
    with pytest.raises(ConfigError):
        merge_overrides({"span": 1.0}, {"span.T": 2.0})


def test_tolerance_scale():
    config = RunConfig.from_dict({"tolerance_scale": 10})
    assert config.tolerance(1e-8) == pytest.approx(1e-7)


def test_hash_ignores_output_dir():
    first = RunConfig.from_dict({"output_dir": "a"})
    second = RunConfig.from_dict({"output_dir": "b"})
    third = RunConfig.from_dict({"output_dir": "a", "span": {"T": 2.0}})
    assert config_hash(first.fingerprint()) == config_hash(second.fingerprint())
    assert config_hash(first.fingerprint()) != config_hash(third.fingerprint())
    assert len(config_hash(first)) == 64


def test_settings_path_from_environment(monkeypatch, tmp_path):
    target = tmp_path / "custom.json"
    monkeypatch.setenv(SETTINGS_ENV, str(target))
    assert get_settings_path() == target
