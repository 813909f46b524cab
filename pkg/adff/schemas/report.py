from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field

from adff.core.enums import DatasetMode, Task, Variant
from adff.utils.common import format_pm

METRIC_FIELDS: List[str] = ["rmse_v", "r2_v", "rmse_a", "r2_a", "acc_v", "acc_a", "acc_four"]
REFERENCE_FIELDS: List[str] = [f"ref_{name}" for name in METRIC_FIELDS]


# =============================== Result rows ===============================

class ResultRow(BaseModel):
    """One line of a result table; metrics a task does not produce stay empty."""

    task: str
    variant: str = Variant.FULL.label
    mode: str
    seg_len: float
    seg_num: int
    fold: str = Field(..., description="fold index, 'mean' or 'std'")
    rmse_v: Optional[float] = None
    r2_v: Optional[float] = None
    rmse_a: Optional[float] = None
    r2_a: Optional[float] = None
    acc_v: Optional[float] = None
    acc_a: Optional[float] = None
    acc_four: Optional[float] = None
    wall_seconds: Optional[float] = None
    ref_rmse_v: Optional[float] = None
    ref_r2_v: Optional[float] = None
    ref_rmse_a: Optional[float] = None
    ref_r2_a: Optional[float] = None
    ref_acc_v: Optional[float] = None
    ref_acc_a: Optional[float] = None
    ref_acc_four: Optional[float] = None

    @classmethod
    def columns(cls, include_reference: bool = False) -> List[str]:
        names = [n for n in cls.model_fields if not n.startswith("ref_")]
        return names + (REFERENCE_FIELDS if include_reference else [])


# =============================== Cross-validation ===============================

class FoldResult(BaseModel):
    fold: int
    metrics: Dict[str, float]
    wall_seconds: float
    n_train: int
    n_test: int
    test_song_ids: List[str]
    final_train_loss: Optional[float] = None


class CVReport(BaseModel):
    """Per-fold metrics plus their mean and sample standard deviation."""

    task: Task
    variant: Variant = Variant.FULL
    mode: DatasetMode = DatasetMode.SIMPLE
    seg_len: float
    seg_num: int
    n_segments: int = 0
    folds: List[FoldResult] = Field(default_factory=list)
    total_seconds: float = 0.0

    @property
    def metric_names(self) -> List[str]:
        return [name for name in METRIC_FIELDS if self.folds and name in self.folds[0].metrics]

    def mean(self) -> Dict[str, float]:
        return {
            name: float(np.mean([f.metrics[name] for f in self.folds]))
            for name in self.metric_names
        }

    def std(self) -> Dict[str, float]:
        ddof = 1 if len(self.folds) > 1 else 0
        return {
            name: float(np.std([f.metrics[name] for f in self.folds], ddof=ddof))
            for name in self.metric_names
        }

    def summary(self) -> Dict[str, str]:
        """``mean±std`` strings per metric."""
        means, stds = self.mean(), self.std()
        return {name: format_pm(means[name], stds[name]) for name in self.metric_names}

    def to_rows(self, record_timing: bool = True) -> List[ResultRow]:
        common = {
            "task": self.task.value,
            "variant": self.variant.label,
            "mode": self.mode.value,
            "seg_len": self.seg_len,
            "seg_num": self.seg_num,
        }
        rows = [
            ResultRow(
                **common,
                fold=str(f.fold),
                wall_seconds=f.wall_seconds if record_timing else None,
                **f.metrics,
            )
            for f in self.folds
        ]
        rows.append(ResultRow(
            **common, fold="mean",
            wall_seconds=self.total_seconds if record_timing else None,
            **self.mean(),
        ))
        rows.append(ResultRow(**common, fold="std", **self.std()))
        return rows
