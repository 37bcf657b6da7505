"""Pipeline configuration: one JSON file drives simulation and training.

Unknown keys are rejected rather than ignored so a typo in a config file
fails loudly instead of silently running with defaults.
"""

import dataclasses
import json
from dataclasses import dataclass

from .branch import PredictorState
from .cache import CacheConfig
from .errors import InvalidConfigError
from .interp import RunLimits
from .models import Hyperparameters, HuberParams, MlpParams, ForestParams


@dataclass(frozen=True)
class PipelineConfig:
    cache: CacheConfig = CacheConfig()
    predictor_initial_state: PredictorState = PredictorState.WNT
    limits: RunLimits = RunLimits()
    label_unit: str = "ns"
    hyper: Hyperparameters = Hyperparameters()
    master_seed: int = 0
    workers: int = 1

    def validate(self) -> None:
        self.cache.validate()
        self.limits.validate()
        self.hyper.validate()
        if not isinstance(self.predictor_initial_state, PredictorState):
            raise InvalidConfigError("predictor_initial_state must be a PredictorState")
        if not self.label_unit:
            raise InvalidConfigError("label_unit must be a non-empty string")
        if self.master_seed < 0:
            raise InvalidConfigError("master_seed must be >= 0")
        if self.workers < 1:
            raise InvalidConfigError("workers must be >= 1")

    def to_dict(self) -> dict:
        return {
            "cache": dataclasses.asdict(self.cache),
            "predictor_initial_state": self.predictor_initial_state.name,
            "limits": dataclasses.asdict(self.limits),
            "label_unit": self.label_unit,
            "hyperparameters": dataclasses.asdict(self.hyper),
            "master_seed": self.master_seed,
            "workers": self.workers,
        }

    def to_file(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")


def _build(cls, data, where):
    allowed = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - allowed
    if unknown:
        raise InvalidConfigError(f"unknown {where} keys: {sorted(unknown)}")
    return cls(**data)


def config_from_dict(data: dict) -> PipelineConfig:
    if not isinstance(data, dict):
        raise InvalidConfigError("config must be a JSON object")
    allowed = {"cache", "predictor_initial_state", "limits", "label_unit",
               "hyperparameters", "master_seed", "workers"}
    unknown = set(data) - allowed
    if unknown:
        raise InvalidConfigError(f"unknown config keys: {sorted(unknown)}")

    kwargs = {}
    if "cache" in data:
        kwargs["cache"] = _build(CacheConfig, data["cache"], "cache")
    if "predictor_initial_state" in data:
        name = data["predictor_initial_state"]
        try:
            kwargs["predictor_initial_state"] = PredictorState[name]
        except KeyError:
            raise InvalidConfigError(
                f"predictor_initial_state must be one of "
                f"{[s.name for s in PredictorState]}, got {name!r}"
            ) from None
    if "limits" in data:
        kwargs["limits"] = _build(RunLimits, data["limits"], "limits")
    if "label_unit" in data:
        kwargs["label_unit"] = data["label_unit"]
    if "hyperparameters" in data:
        hp = data["hyperparameters"]
        unknown = set(hp) - {"huber", "mlp", "forest"}
        if unknown:
            raise InvalidConfigError(f"unknown hyperparameter groups: {sorted(unknown)}")
        kwargs["hyper"] = Hyperparameters(
            huber=_build(HuberParams, hp.get("huber", {}), "huber"),
            mlp=_build(MlpParams, hp.get("mlp", {}), "mlp"),
            forest=_build(ForestParams, hp.get("forest", {}), "forest"),
        )
    if "master_seed" in data:
        kwargs["master_seed"] = data["master_seed"]
    if "workers" in data:
        kwargs["workers"] = data["workers"]

    try:
        cfg = PipelineConfig(**kwargs)
    except TypeError as exc:
        raise InvalidConfigError(f"bad config value: {exc}") from exc
    cfg.validate()
    return cfg


def config_from_file(path) -> PipelineConfig:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidConfigError(f"config file is not valid JSON: {exc}") from exc
    return config_from_dict(data)
