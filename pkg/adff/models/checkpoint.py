import json
from pathlib import Path
from typing import Tuple, Union

import numpy as np
import structlog
import torch

from adff.models.network import ADFFNet
from adff.schemas.config import ModelConfig

logger = structlog.get_logger(__name__)

CONFIG_KEY = "__model_config__"
_DTYPE = np.dtype("<f4")


def save_checkpoint(path: Union[str, Path], model: ADFFNet) -> Path:
    """Write every state tensor as little-endian float32 plus the ModelConfig.

    The container is a numpy ``.npz`` archive keyed by state-dict name.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    arrays = {
        name: tensor.detach().cpu().numpy().astype(_DTYPE)
        for name, tensor in model.state_dict().items()
    }
    arrays[CONFIG_KEY] = np.array(model.config.model_dump_json())
    with open(path, "wb") as fh:
        np.savez(fh, **arrays)
    logger.debug("Checkpoint written", path=str(path), tensors=len(arrays) - 1)
    return path


def load_checkpoint(path: Union[str, Path]) -> Tuple[ADFFNet, ModelConfig]:
    with np.load(path, allow_pickle=False) as archive:
        config = ModelConfig.model_validate(json.loads(str(archive[CONFIG_KEY])))
        model = ADFFNet(config)
        reference = model.state_dict()
        state = {
            name: torch.from_numpy(archive[name].astype(_DTYPE)).to(reference[name].dtype)
            for name in reference
        }
    model.load_state_dict(state)
    model.eval()
    return model, config
