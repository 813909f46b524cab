import json
from pathlib import Path
from typing import Iterator, Optional, Union

import numpy as np
import structlog

from adff.audio.frontend import MelSpectrogram, N_MELS
from adff.core.exceptions import FrontendError
from adff.core.settings import settings

logger = structlog.get_logger(__name__)

_DTYPE = np.dtype("<f4")


class FeatureCache:
    """On-disk spectrogram cache.

    Each entry is ``<song_id>.f32`` (raw little-endian float32, time-major)
    with a ``<song_id>.json`` sidecar holding the extraction metadata, the
    source audio's content hash and the frontend version. An entry is fresh
    only when both of those still match.
    """

    def __init__(self, root: Union[str, Path]):
        self.root = Path(root)
        self.data_suffix = ".f32"
        self.sidecar_suffix = ".json"

    def _data_path(self, song_id: str) -> Path:
        return self.root / f"{song_id}{self.data_suffix}"

    def _sidecar_path(self, song_id: str) -> Path:
        return self.root / f"{song_id}{self.sidecar_suffix}"

    def read_sidecar(self, song_id: str) -> Optional[dict]:
        path = self._sidecar_path(song_id)
        if not path.exists():
            return None
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            logger.warning("Corrupt cache sidecar", song_id=song_id, error=str(e))
            return None

    def is_fresh(self, song_id: str, audio_hash: str) -> bool:
        meta = self.read_sidecar(song_id)
        return (
            meta is not None
            and self._data_path(song_id).exists()
            and meta.get("content_hash") == audio_hash
            and meta.get("frontend_version") == settings.FRONTEND_VERSION
        )

    def save(self, song_id: str, mel: MelSpectrogram, audio_hash: str) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        mel.data.astype(_DTYPE).tofile(self._data_path(song_id))
        meta = {**mel.to_dict(), "song_id": song_id, "content_hash": audio_hash}
        self._sidecar_path(song_id).write_text(json.dumps(meta, indent=2, sort_keys=True), encoding="utf-8")
        logger.debug("Spectrogram cached", song_id=song_id, frames=mel.n_frames)

    def load(self, song_id: str) -> MelSpectrogram:
        meta = self.read_sidecar(song_id)
        if meta is None or not self._data_path(song_id).exists():
            raise FrontendError(f"no cached spectrogram for '{song_id}'", song_id=song_id)
        data = np.fromfile(self._data_path(song_id), dtype=_DTYPE)
        expected = meta["T"] * meta["n_mels"]
        if data.size != expected or meta["n_mels"] != N_MELS:
            raise FrontendError(
                f"cache entry '{song_id}' has {data.size} values, sidecar says {expected}",
                song_id=song_id,
            )
        return MelSpectrogram.from_dict(meta, data.reshape(meta["T"], meta["n_mels"]))

    def song_ids(self) -> Iterator[str]:
        for path in sorted(self.root.glob(f"*{self.sidecar_suffix}")):
            yield path.stem
