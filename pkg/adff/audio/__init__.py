from adff.audio.cache import FeatureCache
from adff.audio.frontend import (
    AudioClip,
    MelSpectrogram,
    extract,
    load_audio,
    log_compress,
    mel_filterbank,
    mel_project,
    pad_to_length,
    stft_power,
)

__all__ = [
    "AudioClip",
    "MelSpectrogram",
    "FeatureCache",
    "load_audio",
    "pad_to_length",
    "stft_power",
    "mel_filterbank",
    "mel_project",
    "log_compress",
    "extract",
]
