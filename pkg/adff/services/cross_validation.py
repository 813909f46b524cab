import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence

import structlog

from adff.core.settings import settings
from adff.data.folds import FoldPlan, kfold_split
from adff.data.segments import LabeledSegment
from adff.models.checkpoint import save_checkpoint
from adff.schemas.config import DatasetSpec, ModelConfig, TrainConfig
from adff.schemas.report import CVReport, FoldResult
from adff.services.trainer import train_fold

logger = structlog.get_logger(__name__)


def plan_folds(segments: Sequence[LabeledSegment], dataset_spec: DatasetSpec, train_config: TrainConfig) -> FoldPlan:
    return kfold_split([s.song_id for s in segments], k=train_config.folds, seed=dataset_spec.seed)


def cross_validate(
    segments: Sequence[LabeledSegment],
    dataset_spec: DatasetSpec,
    model_config: ModelConfig,
    train_config: TrainConfig,
    plan: Optional[FoldPlan] = None,
    checkpoint_dir: Optional[Path] = None,
    workers: Optional[int] = None,
) -> CVReport:
    """k-fold CV by song id; fold ``k`` trains with seed ``seed + k``."""
    plan = plan or plan_folds(segments, dataset_spec, train_config)
    workers = workers or settings.FOLD_WORKERS

    def run_fold(fold: int) -> FoldResult:
        test_ids = set(plan.test_ids(fold))
        train = [s for s in segments if s.song_id not in test_ids]
        test = [s for s in segments if s.song_id in test_ids]
        fold_config = train_config.model_copy(update={"seed": train_config.seed + fold})
        outcome = train_fold(train, test, model_config, fold_config, fold=fold)
        if checkpoint_dir is not None:
            save_checkpoint(Path(checkpoint_dir) / f"fold_{fold}.npz", outcome.model)
        return FoldResult(
            fold=fold,
            metrics=outcome.metrics,
            wall_seconds=outcome.wall_seconds,
            n_train=outcome.n_train,
            n_test=outcome.n_test,
            test_song_ids=sorted(test_ids),
            final_train_loss=outcome.final_train_loss,
        )

    started = time.perf_counter()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results: List[FoldResult] = list(pool.map(run_fold, range(plan.k)))
    else:
        results = [run_fold(fold) for fold in range(plan.k)]

    report = CVReport(
        task=model_config.task,
        variant=model_config.variant,
        mode=dataset_spec.mode,
        seg_len=dataset_spec.seg_len,
        seg_num=dataset_spec.seg_num,
        n_segments=len(segments),
        folds=results,
        total_seconds=time.perf_counter() - started,
    )
    logger.info("Cross-validation finished", folds=plan.k, **report.summary())
    return report
