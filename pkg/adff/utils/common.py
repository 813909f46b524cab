import hashlib
import random
from pathlib import Path
from typing import Union

import numpy as np
import torch

from adff.core.settings import settings

_HASH_CHUNK = 1 << 20


def seed_everything(seed: int) -> torch.Generator:
    """Seed python, numpy and torch; return a torch generator for data order."""
    random.seed(seed)
    np.random.seed(seed % (2**32))
    torch.manual_seed(seed)
    torch.set_num_threads(settings.NUM_THREADS)
    torch.use_deterministic_algorithms(True, warn_only=True)
    generator = torch.Generator()
    generator.manual_seed(seed)
    return generator


def content_hash(path: Union[str, Path]) -> str:
    """SHA-256 of a file's bytes, hex encoded."""
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(_HASH_CHUNK), b""):
            digest.update(chunk)
    return digest.hexdigest()


def format_pm(mean: float, std: float) -> str:
    """Render ``mean±std`` the way result tables print it, e.g. 0.6394±0.02."""
    return f"{mean:.4f}±{std:.2f}"
