"""
Window cutting rules.

``simple`` datasets take one random window per chorus; ``full`` datasets
walk the chorus in consecutive windows and keep the tail only when it is at
least half a window long, in which case the last window is pulled back so it
ends exactly at the chorus end. Choruses shorter than a window always yield
one window that is zero-padded to full length.
"""

import math
import zlib
from dataclasses import dataclass
from typing import List

import numpy as np

from adff.audio.frontend import HOP_SECONDS
from adff.core.enums import DatasetMode
from adff.core.exceptions import DatasetError
from adff.data.corpus import ChorusRecord
from adff.schemas.config import DatasetSpec

# Float slack when comparing second offsets
_EPS = 1e-9


@dataclass(frozen=True)
class Window:
    """Clip window [start, start + length) in seconds."""
    start: float
    length: float
    content: float  # seconds of real audio inside the window

    @property
    def end(self) -> float:
        return self.start + self.length

    @property
    def padded(self) -> bool:
        return self.content + _EPS < self.length


def _duration(record: ChorusRecord) -> float:
    if record.duration_s is None:
        raise DatasetError(f"duration unknown for song '{record.song_id}'", song_id=record.song_id)
    return record.duration_s


def chorus_rng(song_id: str, seed: int) -> np.random.Generator:
    """Generator fixed per (chorus, seed), independent of corpus order."""
    return np.random.default_rng([seed % (2**32), zlib.crc32(song_id.encode("utf-8"))])


def cut_simple(record: ChorusRecord, spec: DatasetSpec, rng: np.random.Generator) -> Window:
    """One window per chorus, start uniform on the hop grid over [0, duration - seg_len]."""
    duration = _duration(record)
    seg_len = spec.seg_len
    if duration + _EPS < seg_len:
        return Window(start=0.0, length=seg_len, content=duration)
    steps = int(math.floor((duration - seg_len) / HOP_SECONDS + _EPS))
    start = int(rng.integers(0, steps + 1)) * HOP_SECONDS
    return Window(start=round(start, 6), length=seg_len, content=seg_len)


def cut_full(record: ChorusRecord, spec: DatasetSpec) -> List[Window]:
    """Consecutive windows; tail kept (pulled back to the chorus end) iff >= seg_len / 2."""
    duration = _duration(record)
    seg_len = spec.seg_len
    n_full = int(math.floor(duration / seg_len + _EPS))
    if n_full == 0:
        return [Window(start=0.0, length=seg_len, content=duration)]

    windows = [Window(start=k * seg_len, length=seg_len, content=seg_len) for k in range(n_full)]
    remainder = duration - n_full * seg_len
    if remainder + _EPS >= seg_len / 2 and remainder > _EPS:
        windows.append(Window(start=round(duration - seg_len, 6), length=seg_len, content=seg_len))
    return windows


def cut_record(record: ChorusRecord, spec: DatasetSpec) -> List[Window]:
    if spec.mode == DatasetMode.SIMPLE:
        return [cut_simple(record, spec, chorus_rng(record.song_id, spec.seed))]
    return cut_full(record, spec)
