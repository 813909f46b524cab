from typing import Iterable, Tuple

import torch
from torch import nn

from adff.core.exceptions import NonFiniteGradientError
from adff.schemas.config import TrainConfig

ADAM_BETAS = (0.9, 0.999)
ADAM_EPS = 1e-8


def lr_at_epoch(epoch: int, config: TrainConfig) -> float:
    """lr0 * decay_factor ** (milestones already reached)."""
    passed = sum(1 for milestone in config.milestones if milestone <= epoch)
    return config.lr0 * config.decay_factor**passed


def build_optimizer(params: Iterable[nn.Parameter], config: TrainConfig) -> torch.optim.Adam:
    """Adam with L2-style decay folded into the gradient (not decoupled)."""
    return torch.optim.Adam(
        params,
        lr=config.lr0,
        betas=ADAM_BETAS,
        eps=ADAM_EPS,
        weight_decay=config.weight_decay,
    )


def adam_step(
    named_params: Iterable[Tuple[str, nn.Parameter]],
    optimizer: torch.optim.Optimizer,
    lr: float,
    step: int,
) -> None:
    """Validate gradients, set the learning rate and apply one Adam update."""
    for name, param in named_params:
        if param.grad is not None and not torch.isfinite(param.grad).all():
            raise NonFiniteGradientError(name, step)
    for group in optimizer.param_groups:
        group["lr"] = lr
    optimizer.step()
