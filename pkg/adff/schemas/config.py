"""
Run configuration models.

A run is described by a TOML document with one table per concern::

    [run]
    dataset_root = "data/pmemo"
    seed = 0

    [dataset]
    mode = "simple"
    seg_len = 20
    seg_num = 6

Every key has a default taken from the published training protocol except
``run.dataset_root``. Unknown tables or keys are rejected with the closest
known name so typos never fall back to a silent default.
"""

import difflib
import math
import tomllib
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

import tomli_w
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from adff.core.enums import DatasetMode, Task, Variant
from adff.core.exceptions import ConfigError

BASE_CHANNELS: Tuple[int, ...] = (64, 128, 256, 512, 512)
CONVS_PER_LEVEL: Tuple[int, ...] = (2, 2, 3, 3, 3)
N_MELS = 128
SEG_LEN_GRID: Tuple[int, ...] = (5, 10, 15, 20, 25, 30)
SEG_NUM_GRID: Tuple[int, ...] = (1, 2, 4, 6, 8, 10, 12, 14, 16)
DEFAULT_MILESTONES: Tuple[int, ...] = (20, 45, 80, 110, 140, 170)


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", use_enum_values=False)


# =============================== Dataset ===============================

class DatasetSpec(_Section):
    mode: DatasetMode = Field(default=DatasetMode.SIMPLE, description="simple or full cutting")
    seg_len: float = Field(default=20, gt=0, description="Window length in seconds")
    seg_num: int = Field(default=6, ge=1, description="Time slices stacked as channels")
    seed: int = Field(default=0, description="Seed for random crops and fold plans")
    id_column: str = Field(default="musicId")
    valence_column: str = Field(default="Valence(mean)")
    arousal_column: str = Field(default="Arousal(mean)")


# =============================== Model ===============================

class ModelConfig(_Section):
    seg_num: int = Field(default=6, ge=1, description="Input channels")
    width: float = Field(default=1.0, gt=0, le=1, description="Channel multiplier")
    se_reduction: int = Field(default=16, ge=1)
    lstm_hidden: int = Field(default=128, ge=1, description="Units per direction")
    lstm_layers: int = Field(default=2, ge=1)
    head_dims: List[int] = Field(default_factory=lambda: [256, 64])
    task: Task = Task.VALENCE
    variant: Variant = Variant.FULL

    @field_validator("head_dims")
    @classmethod
    def _positive_dims(cls, value: List[int]) -> List[int]:
        if any(d < 1 for d in value):
            raise ValueError("head_dims must be positive")
        return value

    @property
    def level_channels(self) -> Tuple[int, ...]:
        """VGG-16 channel plan scaled by width, never below the SE reduction."""
        return tuple(max(math.ceil(c * self.width), self.se_reduction) for c in BASE_CHANNELS)

    @property
    def se_hidden(self) -> Tuple[int, ...]:
        return tuple(max(c // self.se_reduction, 4) for c in self.level_channels)

    @property
    def estf_dim(self) -> int:
        return 2 * self.lstm_hidden

    @property
    def fused_dim(self) -> int:
        return len(BASE_CHANNELS) * self.estf_dim

    @property
    def arity(self) -> int:
        return self.task.arity


# =============================== Training ===============================

class TrainConfig(_Section):
    lr0: float = Field(default=1e-5, gt=0)
    weight_decay: float = Field(default=1e-5, ge=0)
    epochs: int = Field(default=200, ge=1)
    batch_size: int = Field(default=32, ge=1)
    milestones: List[int] = Field(default_factory=lambda: list(DEFAULT_MILESTONES))
    decay_factor: float = Field(default=0.5, gt=0, lt=1)
    seed: int = 0
    folds: int = Field(default=5, ge=2)

    @model_validator(mode="after")
    def _check_milestones(self) -> "TrainConfig":
        ms = self.milestones
        if any(b <= a for a, b in zip(ms, ms[1:])):
            raise ValueError("milestones must be strictly increasing")
        if ms and ms[-1] >= self.epochs:
            raise ValueError(f"milestones must be < epochs ({self.epochs})")
        return self


# =============================== Sweep / Report ===============================

class SweepConfig(_Section):
    seg_nums: List[int] = Field(default_factory=lambda: list(SEG_NUM_GRID))
    seg_lens: List[float] = Field(default_factory=lambda: list(SEG_LEN_GRID))
    modes: List[DatasetMode] = Field(default_factory=list)
    parallel: bool = False

    @field_validator("seg_nums", "seg_lens")
    @classmethod
    def _non_empty(cls, value: List[Any]) -> List[Any]:
        if not value:
            raise ValueError("grid must not be empty")
        if any(v <= 0 for v in value):
            raise ValueError("grid values must be positive")
        return value


class ReportConfig(_Section):
    record_timing: bool = True
    published_reference: bool = False


class RunSection(_Section):
    dataset_root: Path
    output_dir: Path = Path("runs")
    cache_dir: Optional[Path] = None
    seed: Optional[int] = None

    @property
    def feature_dir(self) -> Path:
        return self.cache_dir or self.dataset_root / ".features"


class RunConfig(_Section):
    run: RunSection
    dataset: DatasetSpec = Field(default_factory=DatasetSpec)
    model: ModelConfig = Field(default_factory=ModelConfig)
    train: TrainConfig = Field(default_factory=TrainConfig)
    sweep: SweepConfig = Field(default_factory=SweepConfig)
    report: ReportConfig = Field(default_factory=ReportConfig)

    @model_validator(mode="after")
    def _sync(self) -> "RunConfig":
        self.model.seg_num = self.dataset.seg_num
        if self.run.seed is not None:
            self.dataset.seed = self.run.seed
            self.train.seed = self.run.seed
        return self

    def with_overrides(
        self,
        seed: Optional[int] = None,
        output_dir: Optional[Union[str, Path]] = None,
        width: Optional[float] = None,
    ) -> "RunConfig":
        """Apply CLI overrides and re-validate."""
        data = self.model_dump(mode="python")
        if seed is not None:
            data["run"]["seed"] = seed
        if output_dir is not None:
            data["run"]["output_dir"] = Path(output_dir)
        if width is not None:
            data["model"]["width"] = width
        return _validate(data)


_SECTIONS: Dict[str, type] = {
    "run": RunSection,
    "dataset": DatasetSpec,
    "model": ModelConfig,
    "train": TrainConfig,
    "sweep": SweepConfig,
    "report": ReportConfig,
}


def _closest(name: str, candidates) -> Optional[str]:
    matches = difflib.get_close_matches(name, list(candidates), n=1, cutoff=0.5)
    return matches[0] if matches else None


def _check_keys(document: Mapping[str, Any]) -> None:
    for section, body in document.items():
        if section not in _SECTIONS:
            raise ConfigError(f"unknown section [{section}]", key=section,
                              suggestion=_closest(section, _SECTIONS))
        if not isinstance(body, Mapping):
            raise ConfigError(f"[{section}] must be a table", key=section)
        known = _SECTIONS[section].model_fields
        for key in body:
            if key not in known:
                raise ConfigError(f"unknown key '{section}.{key}'", key=f"{section}.{key}",
                                  suggestion=_closest(key, known))


def _validate(document: Mapping[str, Any]) -> RunConfig:
    try:
        return RunConfig.model_validate(document)
    except ValidationError as e:
        first = e.errors()[0]
        loc = ".".join(str(part) for part in first["loc"])
        if first["type"] == "missing" and loc == "run.dataset_root":
            raise ConfigError("missing dataset root: set run.dataset_root", key=loc) from e
        raise ConfigError(f"invalid value for '{loc}': {first['msg']}", key=loc) from e


def config_from_mapping(document: Mapping[str, Any]) -> RunConfig:
    """Validate an already-parsed TOML mapping."""
    _check_keys(document)
    if "run" not in document or "dataset_root" not in document["run"]:
        raise ConfigError("missing dataset root: set run.dataset_root", key="run.dataset_root")
    return _validate(document)


def parse_config(path: Union[str, Path]) -> RunConfig:
    """Read a TOML run configuration, applying defaults for absent keys."""
    try:
        with open(path, "rb") as fh:
            document = tomllib.load(fh)
    except FileNotFoundError as e:
        raise ConfigError(f"config file not found: {path}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"config is not valid TOML: {e}") from e
    return config_from_mapping(document)


def dump_config(config: RunConfig) -> str:
    """Serialise a config to TOML text that parses back to an equal config."""
    data = config.model_dump(mode="json", exclude_none=True)
    data["model"].pop("seg_num", None)  # always follows dataset.seg_num
    return tomli_w.dumps(data)
