"""
Log Mel-spectrogram frontend.

Fixed extraction parameters: 44.1 kHz mono input, 60 ms Hann window
(2646 samples, also the transform size), 10 ms hop (441 samples), reflect
centre padding, power spectrum, 128 Slaney-style area-normalised Mel filters
spanning 0 Hz to Nyquist, natural log with a 1e-6 floor.

All functions are pure; nothing here holds state besides the memoised
filterbank, which is read-only.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Optional, Union

import librosa
import numpy as np
import soundfile as sf
import structlog

from adff.core.exceptions import AudioDecodeError, FrontendError
from adff.core.settings import settings

logger = structlog.get_logger(__name__)

# Constants
SAMPLE_RATE = 44100
HOP_SECONDS = 0.010
WINDOW_SECONDS = 0.060
HOP_SAMPLES = 441
WINDOW_SAMPLES = 2646
N_FFT = WINDOW_SAMPLES
N_BINS = N_FFT // 2 + 1
N_MELS = 128
FMIN = 0.0
FMAX = SAMPLE_RATE / 2
LOG_EPS = 1e-6
LOG_FLOOR = float(np.log(LOG_EPS))


@dataclass
class AudioClip:
    """Mono waveform with its sample rate."""
    samples: np.ndarray
    sample_rate: int = SAMPLE_RATE

    @property
    def n_samples(self) -> int:
        return int(self.samples.shape[0])

    @property
    def duration(self) -> float:
        return self.n_samples / self.sample_rate


@dataclass
class MelSpectrogram:
    """T x 128 log-power matrix plus the parameters that produced it."""
    data: np.ndarray
    sample_rate: int = SAMPLE_RATE
    hop_seconds: float = HOP_SECONDS
    window_seconds: float = WINDOW_SECONDS
    n_samples: int = 0
    source: Optional[str] = None
    frontend_version: str = field(default_factory=lambda: settings.FRONTEND_VERSION)

    @property
    def n_frames(self) -> int:
        return int(self.data.shape[0])

    @property
    def n_mels(self) -> int:
        return int(self.data.shape[1])

    def to_dict(self) -> Dict[str, Any]:
        """Metadata only; the matrix itself is stored separately."""
        return {
            "T": self.n_frames,
            "n_mels": self.n_mels,
            "sample_rate": self.sample_rate,
            "hop_seconds": self.hop_seconds,
            "window_seconds": self.window_seconds,
            "n_samples": self.n_samples,
            "source": self.source,
            "frontend_version": self.frontend_version,
        }

    @classmethod
    def from_dict(cls, meta: Dict[str, Any], data: np.ndarray) -> "MelSpectrogram":
        return cls(
            data=data,
            sample_rate=meta["sample_rate"],
            hop_seconds=meta["hop_seconds"],
            window_seconds=meta["window_seconds"],
            n_samples=meta.get("n_samples", 0),
            source=meta.get("source"),
            frontend_version=meta["frontend_version"],
        )


def frame_count(n_samples: int) -> int:
    """Frames produced for a centred STFT of ``n_samples`` samples."""
    return 1 + n_samples // HOP_SAMPLES


def load_audio(path: Union[str, Path]) -> AudioClip:
    """Decode a PCM file to a mono clip at 44.1 kHz."""
    path = Path(path)
    if not path.exists():
        raise AudioDecodeError(f"unreadable file: {path}", path=str(path))
    try:
        data, source_rate = sf.read(str(path), dtype="float64", always_2d=True)
    except sf.LibsndfileError as e:
        raise AudioDecodeError(f"unsupported codec or corrupt audio: {path} ({e})", path=str(path)) from e
    except RuntimeError as e:
        raise AudioDecodeError(f"unreadable file: {path} ({e})", path=str(path)) from e

    if data.shape[0] == 0:
        raise AudioDecodeError(f"zero-length audio: {path}", path=str(path))

    samples = data.mean(axis=1)
    if source_rate != SAMPLE_RATE:
        logger.debug("Resampling audio", path=str(path), source_rate=source_rate)
        samples = librosa.resample(samples, orig_sr=source_rate, target_sr=SAMPLE_RATE)

    if not np.all(np.isfinite(samples)):
        raise AudioDecodeError(f"non-finite samples in {path}", path=str(path))
    return AudioClip(samples=samples, sample_rate=SAMPLE_RATE)


def pad_to_length(clip: AudioClip, target_seconds: float) -> AudioClip:
    """Append zeros up to ``target_seconds``; never truncates."""
    target = int(round(target_seconds * clip.sample_rate))
    if clip.n_samples >= target:
        return clip
    padded = np.pad(clip.samples, (0, target - clip.n_samples))
    return AudioClip(samples=padded, sample_rate=clip.sample_rate)


def stft_power(clip: AudioClip) -> np.ndarray:
    """Magnitude-squared centred STFT, shape (T, 1324)."""
    if clip.sample_rate != SAMPLE_RATE:
        raise FrontendError(f"expected {SAMPLE_RATE} Hz audio, got {clip.sample_rate}")
    if clip.n_samples < HOP_SAMPLES:
        raise FrontendError(
            f"clip shorter than one hop ({clip.n_samples} < {HOP_SAMPLES} samples)"
        )
    spectrum = librosa.stft(
        clip.samples,
        n_fft=N_FFT,
        hop_length=HOP_SAMPLES,
        win_length=WINDOW_SAMPLES,
        window="hann",
        center=True,
        pad_mode="reflect",
    )
    return (np.abs(spectrum) ** 2).T


@lru_cache(maxsize=1)
def mel_filterbank() -> np.ndarray:
    """(1324, 128) projection matrix M so that mel = power @ M."""
    basis = librosa.filters.mel(
        sr=SAMPLE_RATE,
        n_fft=N_FFT,
        n_mels=N_MELS,
        fmin=FMIN,
        fmax=FMAX,
        htk=False,
        norm="slaney",
        dtype=np.float64,
    )
    matrix = np.ascontiguousarray(basis.T)
    matrix.setflags(write=False)
    return matrix


def mel_project(power: np.ndarray) -> np.ndarray:
    if power.ndim != 2 or power.shape[1] != N_BINS:
        raise FrontendError(
            f"dimension mismatch: expected (T, {N_BINS}) power spectrum, got {power.shape}"
        )
    return power @ mel_filterbank()


def log_compress(mel: np.ndarray) -> np.ndarray:
    if np.any(mel < 0):
        raise FrontendError("negative input entry to log compression")
    return np.log(mel + LOG_EPS)


def extract(clip: AudioClip, source: Optional[str] = None) -> MelSpectrogram:
    """Log Mel-spectrogram of a clip, shape (1 + n_samples // 441, 128)."""
    data = log_compress(mel_project(stft_power(clip))).astype(np.float32)
    return MelSpectrogram(
        data=data,
        sample_rate=clip.sample_rate,
        n_samples=clip.n_samples,
        source=source,
    )
