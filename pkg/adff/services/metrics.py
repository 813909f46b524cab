from typing import Dict, Sequence

import numpy as np
import torch
import torch.nn.functional as F
from sklearn import metrics as skm

from adff.core.enums import Task
from adff.core.exceptions import MetricError


# =============================== Losses ===============================

def mse_loss(pred: torch.Tensor, target: torch.Tensor) -> torch.Tensor:
    """Mean squared error over every element of the batch."""
    if pred.shape != target.shape:
        raise MetricError(f"shape mismatch: pred {tuple(pred.shape)} vs target {tuple(target.shape)}")
    return F.mse_loss(pred, target)


def ce_loss(logits: torch.Tensor, target: torch.Tensor) -> torch.Tensor:
    """Softmax cross-entropy averaged over the batch."""
    arity = logits.shape[-1]
    if target.numel() and (int(target.min()) < 0 or int(target.max()) >= arity):
        raise MetricError(f"class index out of range for {arity} classes")
    return F.cross_entropy(logits, target)


def task_loss(task: Task):
    return mse_loss if Task(task).is_regression else ce_loss


# =============================== Metrics ===============================

def _as_vectors(pred: Sequence[float], target: Sequence[float]):
    p = np.asarray(pred, dtype=np.float64).ravel()
    t = np.asarray(target, dtype=np.float64).ravel()
    if p.shape != t.shape:
        raise MetricError(f"length mismatch: {p.size} predictions vs {t.size} targets")
    if p.size == 0:
        raise MetricError("metrics need at least one sample")
    return p, t


def rmse(pred: Sequence[float], target: Sequence[float]) -> float:
    p, t = _as_vectors(pred, target)
    return float(np.sqrt(skm.mean_squared_error(t, p)))


def r2_score(pred: Sequence[float], target: Sequence[float]) -> float:
    """Coefficient of determination; undefined for fewer than two or constant targets."""
    p, t = _as_vectors(pred, target)
    if t.size < 2 or np.all(t == t[0]):
        raise MetricError("R² undefined: target is constant or has fewer than 2 samples")
    return float(skm.r2_score(t, p))


def accuracy(pred_classes: Sequence[int], target_classes: Sequence[int]) -> float:
    p, t = _as_vectors(pred_classes, target_classes)
    return float(skm.accuracy_score(t.astype(np.int64), p.astype(np.int64)))


def task_metrics(task: Task, outputs: np.ndarray, targets: np.ndarray) -> Dict[str, float]:
    """Metrics of one pooled test fold on the [-1, 1] scale (or class indices)."""
    task = Task(task)
    if task == Task.VALENCE:
        return {"rmse_v": rmse(outputs[:, 0], targets[:, 0]), "r2_v": r2_score(outputs[:, 0], targets[:, 0])}
    if task == Task.AROUSAL:
        return {"rmse_a": rmse(outputs[:, 0], targets[:, 0]), "r2_a": r2_score(outputs[:, 0], targets[:, 0])}
    if task == Task.MULTI:
        return {
            "rmse_v": rmse(outputs[:, 0], targets[:, 0]),
            "r2_v": r2_score(outputs[:, 0], targets[:, 0]),
            "rmse_a": rmse(outputs[:, 1], targets[:, 1]),
            "r2_a": r2_score(outputs[:, 1], targets[:, 1]),
        }
    key = {Task.TWO_V: "acc_v", Task.TWO_A: "acc_a", Task.FOUR: "acc_four"}[task]
    return {key: accuracy(outputs.argmax(axis=1), targets)}
