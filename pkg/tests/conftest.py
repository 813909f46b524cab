import os

# Must be set before adff.core.settings is imported
os.environ.setdefault("ADFF_ENVIRONMENT", "testing")
os.environ.setdefault("ADFF_SHOW_PROGRESS", "false")
os.environ.setdefault("ADFF_EXTRACT_WORKERS", "2")

import logging
from pathlib import Path
from typing import Callable, List

import numpy as np
import pytest
import soundfile as sf
import structlog
import tomli_w

from adff.core.enums import Task
from adff.data.segments import LabeledSegment
from adff.data.synth import synth_generate
from adff.schemas.config import ModelConfig, TrainConfig

SAMPLE_RATE = 44100


@pytest.fixture(autouse=True)
def _restore_logging():
    """Undo the CLI callback's logging setup after each test."""
    root = logging.getLogger()
    handlers = root.handlers[:]
    yield
    structlog.reset_defaults()
    root.handlers[:] = handlers


@pytest.fixture
def desk_model_config() -> ModelConfig:
    """Smallest network that still has five valid pooling levels."""
    return ModelConfig(
        seg_num=2,
        width=0.0625,
        se_reduction=4,
        lstm_hidden=4,
        head_dims=[8],
        task=Task.VALENCE,
    )


@pytest.fixture
def tiny_train_config() -> TrainConfig:
    return TrainConfig(lr0=1e-3, epochs=2, batch_size=4, milestones=[1], seed=7)


@pytest.fixture
def make_segments() -> Callable[..., List[LabeledSegment]]:
    """Random stacked inputs with labels, ``per_song`` segments for each of ``n_songs``."""

    def _make(n_songs: int = 10, seg_num: int = 2, frames: int = 32, per_song: int = 1, seed: int = 0):
        rng = np.random.default_rng(seed)
        segments = []
        for index in range(n_songs):
            valence, arousal = rng.uniform(-1, 1, size=2)
            for k in range(per_song):
                segments.append(LabeledSegment(
                    input=rng.standard_normal((seg_num, frames, 128)).astype(np.float32),
                    valence=float(valence),
                    arousal=float(arousal),
                    song_id=f"s{index:02d}",
                    start_s=float(k),
                ))
        return segments

    return _make


@pytest.fixture
def write_wav() -> Callable[..., Path]:
    def _write(path: Path, samples: np.ndarray, sample_rate: int = SAMPLE_RATE, subtype: str = "FLOAT") -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        sf.write(str(path), samples, sample_rate, subtype=subtype)
        return path

    return _write


@pytest.fixture
def synth_corpus(tmp_path):
    """Ten one-second synthetic clips in the PMEmo layout."""
    root = tmp_path / "corpus"
    records = synth_generate(10, seed=3, duration_s=1.0, root=root)
    return root, records


@pytest.fixture
def write_run_config(tmp_path) -> Callable[..., Path]:
    """Write a desk-scale TOML config; keyword sections are merged over the defaults."""

    def _write(dataset_root: Path, name: str = "run.toml", **sections) -> Path:
        document = {
            "run": {"dataset_root": str(dataset_root), "output_dir": str(tmp_path / "out"), "seed": 1},
            "dataset": {"mode": "simple", "seg_len": 1, "seg_num": 2},
            "model": {"width": 0.0625, "se_reduction": 4, "lstm_hidden": 4, "head_dims": [8]},
            "train": {"lr0": 1e-3, "epochs": 2, "batch_size": 4, "milestones": [1]},
            "report": {"record_timing": False},
        }
        for section, values in sections.items():
            document.setdefault(section, {}).update(values)
        path = tmp_path / name
        path.write_text(tomli_w.dumps(document), encoding="utf-8")
        return path

    return _write
