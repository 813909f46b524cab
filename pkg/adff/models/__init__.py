from adff.models.checkpoint import load_checkpoint, save_checkpoint
from adff.models.network import (
    ADFFNet,
    SEBlock,
    TFLM,
    forward,
    frequency_mean,
    fuse,
    se_excite,
    se_scale,
    se_squeeze,
)

__all__ = [
    "ADFFNet",
    "SEBlock",
    "TFLM",
    "forward",
    "fuse",
    "frequency_mean",
    "se_squeeze",
    "se_excite",
    "se_scale",
    "save_checkpoint",
    "load_checkpoint",
]
