from dataclasses import dataclass
from typing import Dict, List, Sequence

from sklearn.model_selection import KFold

from adff.core.exceptions import DatasetError


@dataclass(frozen=True)
class FoldPlan:
    """Partition of song ids into disjoint test folds."""
    folds: List[List[str]]

    def __post_init__(self):
        seen: Dict[str, int] = {}
        for index, fold in enumerate(self.folds):
            for song_id in fold:
                if song_id in seen:
                    raise DatasetError(
                        f"song '{song_id}' in folds {seen[song_id]} and {index}", song_id=song_id
                    )
                seen[song_id] = index

    @property
    def k(self) -> int:
        return len(self.folds)

    def test_ids(self, fold: int) -> List[str]:
        return list(self.folds[fold])

    def train_ids(self, fold: int) -> List[str]:
        return [sid for index, f in enumerate(self.folds) if index != fold for sid in f]

    def fold_of(self, song_id: str) -> int:
        for index, fold in enumerate(self.folds):
            if song_id in fold:
                return index
        raise KeyError(song_id)


def kfold_split(song_ids: Sequence[str], k: int = 5, seed: int = 0) -> FoldPlan:
    """Shuffle ids with ``seed`` and deal them into ``k`` near-equal folds.

    Splitting is by song, so every segment of a chorus lands in one fold.
    """
    ids = sorted(set(song_ids))
    if len(ids) < k:
        raise DatasetError(f"fewer ids ({len(ids)}) than folds ({k})", n_ids=len(ids), k=k)
    splitter = KFold(n_splits=k, shuffle=True, random_state=seed % (2**32))
    folds = [[ids[i] for i in sorted(test)] for _, test in splitter.split(ids)]
    return FoldPlan(folds=folds)
