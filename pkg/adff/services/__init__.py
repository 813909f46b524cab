from adff.services.cross_validation import cross_validate
from adff.services.experiments import cmd_ablate, cmd_cv, cmd_extract, cmd_sweep, cmd_synth
from adff.services.metrics import accuracy, ce_loss, mse_loss, r2_score, rmse
from adff.services.optim import adam_step, lr_at_epoch
from adff.services.report import emit_report
from adff.services.trainer import train_fold

__all__ = [
    "mse_loss",
    "ce_loss",
    "rmse",
    "r2_score",
    "accuracy",
    "lr_at_epoch",
    "adam_step",
    "train_fold",
    "cross_validate",
    "emit_report",
    "cmd_extract",
    "cmd_cv",
    "cmd_sweep",
    "cmd_ablate",
    "cmd_synth",
]
