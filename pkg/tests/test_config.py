import json

import pytest

from irtime import (
    CacheConfig, PipelineConfig, PredictorState, RunLimits,
    config_from_dict, config_from_file,
)
from irtime.errors import InvalidConfigError


def test_defaults_validate():
    cfg = PipelineConfig()
    cfg.validate()
    assert cfg.cache == CacheConfig()
    assert cfg.predictor_initial_state is PredictorState.WNT
    assert cfg.limits == RunLimits()
    assert cfg.master_seed == 0
    assert cfg.workers == 1


def test_file_round_trip(tmp_path):
    cfg = PipelineConfig(
        cache=CacheConfig(cache_size=8192, line_size=64, associativity=4),
        predictor_initial_state=PredictorState.ST,
        limits=RunLimits(max_steps=5000),
        label_unit="us",
        master_seed=11,
        workers=3,
    )
    p = tmp_path / "cfg.json"
    cfg.to_file(p)
    assert config_from_file(p) == cfg
    # stable bytes
    p2 = tmp_path / "cfg2.json"
    config_from_file(p).to_file(p2)
    assert p.read_bytes() == p2.read_bytes()


def test_empty_dict_gives_defaults():
    assert config_from_dict({}) == PipelineConfig()


def test_unknown_keys_rejected_everywhere():
    with pytest.raises(InvalidConfigError):
        config_from_dict({"caches": {}})
    with pytest.raises(InvalidConfigError):
        config_from_dict({"cache": {"cache_size": 1024, "linesize": 32}})
    with pytest.raises(InvalidConfigError):
        config_from_dict({"limits": {"max_step": 5}})
    with pytest.raises(InvalidConfigError):
        config_from_dict({"hyperparameters": {"svm": {}}})
    with pytest.raises(InvalidConfigError):
        config_from_dict({"hyperparameters": {"huber": {"delta": 2.0}}})


def test_bad_values_rejected():
    with pytest.raises(InvalidConfigError):
        config_from_dict({"workers": 0})
    with pytest.raises(InvalidConfigError):
        config_from_dict({"master_seed": -1})
    with pytest.raises(InvalidConfigError):
        config_from_dict({"label_unit": ""})
    with pytest.raises(InvalidConfigError):
        config_from_dict({"cache": {"cache_size": 100, "line_size": 32,
                                    "associativity": 2}})
    with pytest.raises(InvalidConfigError):
        config_from_dict({"hyperparameters": {"huber": {"epsilon": 0.0}}})


def test_predictor_state_parsed_by_name():
    cfg = config_from_dict({"predictor_initial_state": "SNT"})
    assert cfg.predictor_initial_state is PredictorState.SNT
    with pytest.raises(InvalidConfigError):
        config_from_dict({"predictor_initial_state": "MAYBE"})


def test_hyperparameter_overrides_apply():
    cfg = config_from_dict({
        "hyperparameters": {
            "forest": {"n_trees": 10},
            "mlp": {"epochs": 3},
        }
    })
    assert cfg.hyper.forest.n_trees == 10
    assert cfg.hyper.mlp.epochs == 3
    # untouched groups keep their defaults
    assert cfg.hyper.huber.epsilon == 1.35


def test_non_json_file(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{nope")
    with pytest.raises(InvalidConfigError):
        config_from_file(p)
    p.write_text(json.dumps([1, 2, 3]))
    with pytest.raises(InvalidConfigError):
        config_from_file(p)
