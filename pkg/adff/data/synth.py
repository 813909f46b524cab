"""
Synthetic desk-scale corpus.

Each clip mixes a tone (with one harmonic) and noise band-limited around the
tone frequency, at a random gain. Labels are analytic in the written
signal: arousal grows with RMS energy and valence with the log spectral
centroid, both clipped to [0, 1]. Output uses the PMEmo layout so the rest
of the pipeline cannot tell the difference.
"""

from pathlib import Path
from typing import List, Optional, Tuple, Union

import librosa
import numpy as np
import soundfile as sf
import structlog
from scipy import signal

from adff.audio.frontend import HOP_SAMPLES, N_FFT, SAMPLE_RATE
from adff.data.corpus import AUDIO_DIR, ChorusRecord, audio_path_for, write_annotations

logger = structlog.get_logger(__name__)

# Constants
RMS_CEILING = 0.5
CENTROID_LOW_HZ = 100.0
CENTROID_HIGH_HZ = 10000.0
TONE_RANGE_HZ = (110.0, 5000.0)
GAIN_RANGE = (0.02, 0.45)
PEAK_LIMIT = 0.99


def analytic_labels(samples: np.ndarray, sample_rate: int = SAMPLE_RATE) -> Tuple[float, float]:
    """(valence_raw, arousal_raw) of a waveform."""
    rms = float(np.sqrt(np.mean(np.square(samples, dtype=np.float64))))
    arousal = float(np.clip(rms / RMS_CEILING, 0.0, 1.0))

    centroid = librosa.feature.spectral_centroid(
        y=np.asarray(samples, dtype=np.float64), sr=sample_rate, n_fft=N_FFT, hop_length=HOP_SAMPLES
    )
    mean_centroid = max(float(np.mean(centroid)), CENTROID_LOW_HZ)
    span = np.log(CENTROID_HIGH_HZ) - np.log(CENTROID_LOW_HZ)
    valence = float(np.clip((np.log(mean_centroid) - np.log(CENTROID_LOW_HZ)) / span, 0.0, 1.0))
    return round(valence, 6), round(arousal, 6)


def synth_clip(rng: np.random.Generator, duration_s: float, sample_rate: int = SAMPLE_RATE) -> np.ndarray:
    n_samples = int(round(duration_s * sample_rate))
    t = np.arange(n_samples) / sample_rate
    f0 = float(np.exp(rng.uniform(np.log(TONE_RANGE_HZ[0]), np.log(TONE_RANGE_HZ[1]))))
    phase = rng.uniform(0, 2 * np.pi)
    tone = np.sin(2 * np.pi * f0 * t + phase) + 0.5 * np.sin(2 * np.pi * 2 * f0 * t + phase)

    low, high = f0 / np.sqrt(2), min(f0 * np.sqrt(2), 0.45 * sample_rate)
    sos = signal.butter(4, [low, high], btype="bandpass", fs=sample_rate, output="sos")
    noise = signal.sosfilt(sos, rng.standard_normal(n_samples))

    mix = tone + rng.uniform(0.2, 1.0) * noise / (np.std(noise) + 1e-12)
    mix /= np.sqrt(np.mean(mix**2))
    clip = rng.uniform(*GAIN_RANGE) * mix
    peak = np.max(np.abs(clip))
    if peak > PEAK_LIMIT:
        clip *= PEAK_LIMIT / peak
    return clip.astype(np.float32)


def synth_generate(
    n: int,
    seed: int,
    duration_s: float,
    root: Union[str, Path],
    max_duration_s: Optional[float] = None,
) -> List[ChorusRecord]:
    """Write ``n`` deterministic clips plus annotations under ``root``.

    With ``max_duration_s`` clip lengths are drawn uniformly (on the hop
    grid) between ``duration_s`` and ``max_duration_s``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    root = Path(root)
    (root / AUDIO_DIR).mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)

    records: List[ChorusRecord] = []
    for index in range(n):
        length = duration_s
        if max_duration_s is not None and max_duration_s > duration_s:
            length = round(float(rng.uniform(duration_s, max_duration_s)), 2)
        samples = synth_clip(rng, length)
        song_id = f"{index + 1:04d}"
        path = audio_path_for(root, song_id)
        sf.write(str(path), samples, SAMPLE_RATE, subtype="FLOAT")
        valence, arousal = analytic_labels(samples)
        records.append(ChorusRecord(
            song_id=song_id,
            audio_path=path,
            valence_raw=valence,
            arousal_raw=arousal,
            duration_s=len(samples) / SAMPLE_RATE,
        ))

    write_annotations(root, records)
    logger.info("Synthetic corpus written", root=str(root), clips=n, seed=seed)
    return records
