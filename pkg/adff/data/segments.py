import dataclasses
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
import structlog
import torch
from torch.utils.data import Dataset

from adff.audio.cache import FeatureCache
from adff.audio.frontend import (
    HOP_SAMPLES,
    LOG_FLOOR,
    MelSpectrogram,
    extract,
    frame_count,
    load_audio,
    pad_to_length,
)
from adff.core.enums import ClassScheme, Task
from adff.core.exceptions import DatasetError
from adff.data.corpus import ChorusRecord
from adff.data.cutting import Window, cut_record
from adff.data.labels import scale_annotation, to_class_labels
from adff.schemas.config import DatasetSpec

logger = structlog.get_logger(__name__)


@dataclass
class LabeledSegment:
    """Stacked network input with its scaled labels."""
    input: np.ndarray  # (seg_num, T', 128)
    valence: float
    arousal: float
    song_id: str
    start_s: float = 0.0


def segment_stack(mel: np.ndarray, seg_num: int) -> np.ndarray:
    """Cut (T, D) into ``seg_num`` consecutive slices stacked as channels.

    Channel c holds rows [c*T', (c+1)*T') with T' = T // seg_num; the
    trailing T - seg_num*T' rows are dropped.
    """
    n_frames = mel.shape[0]
    if seg_num < 1 or seg_num > n_frames:
        raise DatasetError(f"seg_num {seg_num} exceeds frame count {n_frames}", seg_num=seg_num)
    slice_len = n_frames // seg_num
    return mel[: seg_num * slice_len].reshape(seg_num, slice_len, mel.shape[1])


def destack(stacked: np.ndarray) -> np.ndarray:
    """Inverse of ``segment_stack`` on the frames it kept."""
    seg_num, slice_len, dim = stacked.shape
    return stacked.reshape(seg_num * slice_len, dim)


def window_frames(mel: MelSpectrogram, window: Window) -> np.ndarray:
    """Frames of ``window`` sliced from a whole-chorus spectrogram.

    Frames beyond the chorus end take the log floor. Windows longer than the
    chorus go through ``padded_window_frames`` instead.
    """
    n_frames = frame_count(int(round(window.length * mel.sample_rate)))
    offset = int(round(window.start / mel.hop_seconds))
    chunk = mel.data[offset: offset + n_frames]
    if chunk.shape[0] < n_frames:
        fill = np.full((n_frames - chunk.shape[0], mel.n_mels), LOG_FLOOR, dtype=mel.data.dtype)
        chunk = np.concatenate([chunk, fill], axis=0)
    return chunk


def padded_window_frames(record: ChorusRecord, window: Window) -> np.ndarray:
    """Frames of a window longer than its chorus, from the zero-padded audio."""
    clip = pad_to_length(load_audio(record.audio_path), window.length)
    return extract(clip, source=record.song_id).data


def chorus_duration(mel: MelSpectrogram) -> float:
    if mel.n_samples:
        return mel.n_samples / mel.sample_rate
    return (mel.n_frames - 1) * HOP_SAMPLES / mel.sample_rate


def build_segments(
    records: Sequence[ChorusRecord],
    spec: DatasetSpec,
    cache: FeatureCache,
) -> List[LabeledSegment]:
    """Cut, pad and stack every chorus according to ``spec``."""
    segments: List[LabeledSegment] = []
    for record in records:
        mel = cache.load(record.song_id)
        if record.duration_s is None:
            record = dataclasses.replace(record, duration_s=chorus_duration(mel))
        valence = scale_annotation(record.valence_raw)
        arousal = scale_annotation(record.arousal_raw)
        for window in cut_record(record, spec):
            if window.padded:
                frames = padded_window_frames(record, window)
            else:
                frames = window_frames(mel, window)
            stacked = segment_stack(frames, spec.seg_num)
            segments.append(LabeledSegment(
                input=np.ascontiguousarray(stacked, dtype=np.float32),
                valence=valence,
                arousal=arousal,
                song_id=record.song_id,
                start_s=window.start,
            ))
    logger.info("Segments built", mode=spec.mode.value, seg_len=spec.seg_len,
                seg_num=spec.seg_num, choruses=len(records), segments=len(segments))
    return segments


def segment_target(segment: LabeledSegment, task: Task):
    """Regression vector or class index for ``task``."""
    if task == Task.VALENCE:
        return [segment.valence]
    if task == Task.AROUSAL:
        return [segment.arousal]
    if task == Task.MULTI:
        return [segment.valence, segment.arousal]
    return to_class_labels(segment.valence, segment.arousal, ClassScheme(task.value))


class SegmentDataset(Dataset):
    """Torch view over labelled segments for one task."""

    def __init__(self, segments: Sequence[LabeledSegment], task: Task):
        if not segments:
            raise DatasetError("empty segment set")
        self.segments = list(segments)
        self.task = Task(task)
        inputs = np.stack([s.input for s in self.segments])
        self.inputs = torch.from_numpy(inputs)
        targets = [segment_target(s, self.task) for s in self.segments]
        dtype = torch.float32 if self.task.is_regression else torch.long
        self.targets = torch.tensor(targets, dtype=dtype)

    def __len__(self) -> int:
        return len(self.segments)

    def __getitem__(self, index: int) -> Tuple[torch.Tensor, torch.Tensor]:
        return self.inputs[index], self.targets[index]

    @property
    def song_ids(self) -> List[str]:
        return [s.song_id for s in self.segments]
