import time
from dataclasses import dataclass, field
from typing import Dict, List, Sequence

import numpy as np
import structlog
import torch
from torch.utils.data import DataLoader

from adff.core.exceptions import DivergenceError, TrainingError
from adff.core.settings import settings
from adff.data.segments import LabeledSegment, SegmentDataset
from adff.models.network import ADFFNet
from adff.schemas.config import ModelConfig, TrainConfig
from adff.services.metrics import task_loss, task_metrics
from adff.services.optim import adam_step, build_optimizer, lr_at_epoch

logger = structlog.get_logger(__name__)

# Constants
LOG_EVERY_EPOCHS = 10
EVAL_BATCH_SIZE = 64


@dataclass
class FoldOutcome:
    """Trained model with its test metrics and training trace."""
    model: ADFFNet
    metrics: Dict[str, float]
    wall_seconds: float
    epoch_losses: List[float] = field(default_factory=list)
    n_train: int = 0
    n_test: int = 0

    @property
    def final_train_loss(self) -> float:
        return self.epoch_losses[-1] if self.epoch_losses else float("nan")


def make_generator(seed: int) -> torch.Generator:
    generator = torch.Generator()
    generator.manual_seed(seed)
    return generator


def predict_segments(model: ADFFNet, dataset: SegmentDataset, batch_size: int = EVAL_BATCH_SIZE) -> np.ndarray:
    """Eval-mode outputs for every segment, in dataset order."""
    model.eval()
    device = next(model.parameters()).device
    outputs = []
    with torch.no_grad():
        for start in range(0, len(dataset), batch_size):
            outputs.append(model(dataset.inputs[start:start + batch_size].to(device)).cpu())
    return torch.cat(outputs).numpy()


def train_fold(
    train_segments: Sequence[LabeledSegment],
    test_segments: Sequence[LabeledSegment],
    model_config: ModelConfig,
    train_config: TrainConfig,
    fold: int = 0,
) -> FoldOutcome:
    """Train one model on ``train_segments`` and score it on ``test_segments``."""
    if not train_segments:
        raise TrainingError("empty train set", fold=fold)
    leaked = {s.song_id for s in train_segments} & {s.song_id for s in test_segments}
    if leaked:
        raise TrainingError(f"train and test share songs: {sorted(leaked)[:5]}", fold=fold)

    started = time.perf_counter()
    torch.set_num_threads(settings.NUM_THREADS)
    task = model_config.task
    model = ADFFNet(model_config, generator=make_generator(train_config.seed)).to(settings.DEVICE)
    train_set = SegmentDataset(train_segments, task)
    loader = DataLoader(
        train_set,
        batch_size=train_config.batch_size,
        shuffle=True,
        generator=make_generator(train_config.seed + 1),
    )
    optimizer = build_optimizer(model.parameters(), train_config)
    loss_fn = task_loss(task)

    log = logger.bind(fold=fold, task=task.value, variant=model_config.variant.value)
    log.info("Fold training started", train_segments=len(train_set), test_segments=len(test_segments))

    epoch_losses: List[float] = []
    step = 0
    for epoch in range(train_config.epochs):
        lr = lr_at_epoch(epoch, train_config)
        model.train()
        batch_losses = []
        for batch_index, (inputs, targets) in enumerate(loader):
            inputs, targets = inputs.to(settings.DEVICE), targets.to(settings.DEVICE)
            optimizer.zero_grad()
            loss = loss_fn(model(inputs), targets)
            if not torch.isfinite(loss):
                raise DivergenceError(epoch, batch_index, loss.item())
            loss.backward()
            adam_step(model.named_parameters(), optimizer, lr, step)
            step += 1
            batch_losses.append(loss.item() * len(inputs))
        epoch_losses.append(sum(batch_losses) / len(train_set))
        if (epoch + 1) % LOG_EVERY_EPOCHS == 0 or epoch + 1 == train_config.epochs:
            log.info("Epoch finished", epoch=epoch + 1, lr=lr, loss=round(epoch_losses[-1], 6))

    metrics: Dict[str, float] = {}
    if test_segments:
        test_set = SegmentDataset(test_segments, task)
        outputs = predict_segments(model, test_set)
        metrics = task_metrics(task, outputs, test_set.targets.numpy())
    wall_seconds = time.perf_counter() - started
    log.info("Fold training finished", wall_seconds=round(wall_seconds, 2), **metrics)

    return FoldOutcome(
        model=model,
        metrics=metrics,
        wall_seconds=wall_seconds,
        epoch_losses=epoch_losses,
        n_train=len(train_set),
        n_test=len(test_segments),
    )
