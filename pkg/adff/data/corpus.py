"""
Corpus ingestion.

Expected layout (the synthetic generator writes the same one)::

    <root>/annotations.csv      musicId, Valence(mean), Arousal(mean), ...
    <root>/audio/<musicId>.wav
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import pandas as pd
import structlog

from adff.core.exceptions import DatasetError
from adff.schemas.config import DatasetSpec

logger = structlog.get_logger(__name__)

ANNOTATIONS_FILE = "annotations.csv"
AUDIO_DIR = "audio"
AUDIO_SUFFIX = ".wav"


@dataclass(frozen=True)
class ChorusRecord:
    """One annotated chorus clip."""
    song_id: str
    audio_path: Path
    valence_raw: float
    arousal_raw: float
    duration_s: Optional[float] = None

    def __post_init__(self):
        for name in ("valence_raw", "arousal_raw"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise DatasetError(
                    f"raw annotation out of range: {name}={value} for song {self.song_id}",
                    song_id=self.song_id,
                )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "song_id": self.song_id,
            "audio_path": str(self.audio_path),
            "valence_raw": self.valence_raw,
            "arousal_raw": self.arousal_raw,
            "duration_s": self.duration_s,
        }


def audio_path_for(root: Union[str, Path], song_id: str) -> Path:
    return Path(root) / AUDIO_DIR / f"{song_id}{AUDIO_SUFFIX}"


def load_pmemo(root: Union[str, Path], spec: Optional[DatasetSpec] = None) -> List[ChorusRecord]:
    """Read ``annotations.csv`` and pair each row with its audio file.

    Rows lacking either annotation or whose audio file is missing are logged
    and skipped; an out-of-range annotation is an error.
    """
    spec = spec or DatasetSpec()
    root = Path(root)
    csv_path = root / ANNOTATIONS_FILE
    if not csv_path.exists():
        raise DatasetError(f"missing annotations CSV: {csv_path}", path=str(csv_path))

    frame = pd.read_csv(csv_path, dtype={spec.id_column: str})
    columns = [spec.id_column, spec.valence_column, spec.arousal_column]
    missing_columns = [c for c in columns if c not in frame.columns]
    if missing_columns:
        raise DatasetError(f"annotations CSV lacks columns {missing_columns}", path=str(csv_path))

    complete = frame.dropna(subset=columns)
    if len(complete) < len(frame):
        logger.warning("Skipping rows with missing annotations", skipped=len(frame) - len(complete))

    records: List[ChorusRecord] = []
    seen = set()
    for row_dict in complete.to_dict("records"):
        song_id = str(row_dict[spec.id_column]).strip()
        if song_id in seen:
            raise DatasetError(f"duplicate song id '{song_id}'", song_id=song_id)
        seen.add(song_id)

        audio_path = audio_path_for(root, song_id)
        if not audio_path.exists():
            logger.warning("Audio missing, row skipped", song_id=song_id, path=str(audio_path))
            continue

        records.append(ChorusRecord(
            song_id=song_id,
            audio_path=audio_path,
            valence_raw=float(row_dict[spec.valence_column]),
            arousal_raw=float(row_dict[spec.arousal_column]),
        ))

    if not records:
        raise DatasetError(f"no parsable rows in {csv_path}", path=str(csv_path))
    logger.info("Corpus loaded", root=str(root), records=len(records))
    return records


def write_annotations(root: Union[str, Path], records: List[ChorusRecord], spec: Optional[DatasetSpec] = None) -> Path:
    spec = spec or DatasetSpec()
    path = Path(root) / ANNOTATIONS_FILE
    frame = pd.DataFrame({
        spec.id_column: [r.song_id for r in records],
        spec.valence_column: [r.valence_raw for r in records],
        spec.arousal_column: [r.arousal_raw for r in records],
    })
    frame.to_csv(path, index=False, float_format="%.6f")
    return path
