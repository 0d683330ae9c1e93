"""Experiment configuration: file format, flag overrides, validation.

A workbench config is a flat JSON object mirroring `WorkbenchConfig`; the
``train`` block mirrors `TrainConfig`.  Command-line flags override file
values, which override defaults.  The received energy may be given directly
(``energy``) or as a channel transmissivity and input energy (``eta``,
``e0``); when both are present they must agree.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .errors import ConfigError
from .training import AdamConfig, TrainConfig

SCHEMA_VERSION = 1


@dataclass
class WorkbenchConfig:
    name: str = "experiment"
    n: int = 2
    energy: float | None = None
    eta: float | None = None
    e0: float | None = None
    code_type: str = "linear"
    squeezing: bool = False
    n_ancilla: int = 0
    k_codebooks: int = 20
    train: TrainConfig = field(default_factory=TrainConfig)
    out_dir: str = "out"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ConfigError("n must be positive")
        if self.code_type not in ("random", "linear", "polar"):
            raise ConfigError(f"unknown code type {self.code_type!r}")
        if self.n_ancilla < 0:
            raise ConfigError("n_ancilla must be nonnegative")
        if self.k_codebooks < 1:
            raise ConfigError("k_codebooks must be positive")
        self.resolved_energy()

    def resolved_energy(self) -> float:
        """Received mean photon number per mode, folding eta * e0 if given."""
        folded = None
        if self.eta is not None or self.e0 is not None:
            if self.eta is None or self.e0 is None:
                raise ConfigError("eta and e0 must be given together")
            if not 0.0 < self.eta <= 1.0:
                raise ConfigError("eta must lie in (0, 1]")
            folded = self.eta * self.e0
        if self.energy is not None:
            if folded is not None and abs(folded - self.energy) > 1e-9 * max(
                    1.0, abs(self.energy)):
                raise ConfigError(
                    f"energy={self.energy} inconsistent with eta*e0={folded}")
            value = self.energy
        elif folded is not None:
            value = folded
        else:
            raise ConfigError("set energy, or eta and e0")
        if value <= 0:
            raise ConfigError("received energy must be positive")
        return value

    def experiment_dir(self) -> Path:
        return Path(self.out_dir) / self.name

    def to_json_dict(self) -> dict:
        data = asdict(self)
        data["schema_version"] = SCHEMA_VERSION
        return data


def config_from_dict(data: dict) -> WorkbenchConfig:
    data = dict(data)
    data.pop("schema_version", None)
    train_data = data.pop("train", {})
    if not isinstance(train_data, dict):
        raise ConfigError("'train' must be an object")
    adam_data = train_data.pop("adam", {})
    try:
        train = TrainConfig(adam=AdamConfig(**adam_data), **train_data)
        return WorkbenchConfig(train=train, **data)
    except TypeError as exc:
        raise ConfigError(f"bad config key: {exc}") from exc


def load_config(path: str | Path) -> WorkbenchConfig:
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    return config_from_dict(data)
