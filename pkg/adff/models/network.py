"""
ADFF network.

    input (B, seg_num, T', 128)
      -> SFLM levels 1..5 (VGG-16 conv stacks)           S_1 .. S_5
      -> per level: SE attention, frequency mean, Bi-LSTM  E_1 .. E_5
      -> concatenation E
      -> feed-forward head -> 1 / 2 / 4 outputs

The two ablations swap pieces out without touching the fused width: ``no_se``
skips channel reweighting, ``no_tflm`` replaces each SE+Bi-LSTM branch with a
linear map of the level's spatial mean.
"""

from typing import List, Optional, Sequence

import torch
import torch.nn as nn
import torch.nn.functional as F

from adff.core.enums import RunMode, Variant
from adff.core.exceptions import ModelError
from adff.schemas.config import CONVS_PER_LEVEL, N_MELS, ModelConfig

N_LEVELS = len(CONVS_PER_LEVEL)
MIN_INPUT_SIDE = 2**N_LEVELS


# =============================== SE attention ===============================

def se_squeeze(s: torch.Tensor) -> torch.Tensor:
    """Channel descriptor: spatial mean of every channel, (..., C, H, W) -> (..., C)."""
    return s.mean(dim=(-2, -1))


def se_excite(z: torch.Tensor, w1: torch.Tensor, w2: torch.Tensor) -> torch.Tensor:
    """Attention weights logistic(W2 relu(W1 z)), each strictly inside (0, 1)."""
    return torch.sigmoid(F.linear(F.relu(F.linear(z, w1)), w2))


def se_scale(s: torch.Tensor, a: torch.Tensor) -> torch.Tensor:
    if a.shape[-1] != s.shape[-3]:
        raise ModelError(f"attention length {a.shape[-1]} != channels {s.shape[-3]}")
    return s * a[..., None, None]


class SEBlock(nn.Module):
    """Squeeze-and-excitation with a bias-free bottleneck."""

    def __init__(self, channels: int, hidden: int):
        super().__init__()
        self.fc1 = nn.Linear(channels, hidden, bias=False)
        self.fc2 = nn.Linear(hidden, channels, bias=False)

    def attention(self, s: torch.Tensor) -> torch.Tensor:
        return se_excite(se_squeeze(s), self.fc1.weight, self.fc2.weight)

    def forward(self, s: torch.Tensor) -> torch.Tensor:
        return se_scale(s, self.attention(s))


# =============================== SFLM ===============================

def _conv_bn_relu(in_channels: int, out_channels: int) -> List[nn.Module]:
    return [
        nn.Conv2d(in_channels, out_channels, kernel_size=3, stride=1, padding=1),
        nn.BatchNorm2d(out_channels),
        nn.ReLU(inplace=True),
    ]


class SFLMLevel(nn.Sequential):
    """VGG-16 conv stack + 2x2 max-pool + the extra batch-norm/ReLU closing a level."""

    def __init__(self, in_channels: int, out_channels: int, n_convs: int):
        layers: List[nn.Module] = []
        for index in range(n_convs):
            layers += _conv_bn_relu(in_channels if index == 0 else out_channels, out_channels)
        layers += [
            nn.MaxPool2d(kernel_size=2, stride=2),
            nn.BatchNorm2d(out_channels),
            nn.ReLU(inplace=True),
        ]
        super().__init__(*layers)


# =============================== TFLM ===============================

def frequency_mean(s: torch.Tensor) -> torch.Tensor:
    """(B, C, H, W) -> (B, H, C): one C-vector per time step."""
    return s.mean(dim=-1).transpose(1, 2)


class TFLM(nn.Module):
    """SE attention followed by a bidirectional LSTM over the time axis."""

    def __init__(self, channels: int, se_hidden: int, lstm_hidden: int, lstm_layers: int, use_se: bool = True):
        super().__init__()
        self.use_se = use_se
        self.se = SEBlock(channels, se_hidden)
        self.lstm = nn.LSTM(
            input_size=channels,
            hidden_size=lstm_hidden,
            num_layers=lstm_layers,
            batch_first=True,
            bidirectional=True,
        )

    def forward(self, s: torch.Tensor) -> torch.Tensor:
        if self.use_se:
            s = self.se(s)
        _, (h_n, _) = self.lstm(frequency_mean(s))
        # top layer: h_n[-2] forward (after the last step), h_n[-1] backward (after step 0)
        return torch.cat([h_n[-2], h_n[-1]], dim=-1)


class SpatialProjection(nn.Module):
    """Stand-in for a TFLM: spatial mean of S_N mapped to the ESTF width."""

    def __init__(self, channels: int, out_dim: int):
        super().__init__()
        self.proj = nn.Linear(channels, out_dim)

    def forward(self, s: torch.Tensor) -> torch.Tensor:
        return self.proj(se_squeeze(s))


# =============================== Fusion + head ===============================

def fuse(estfs: Sequence[torch.Tensor]) -> torch.Tensor:
    """Concatenate the five level features in level order."""
    if len(estfs) != N_LEVELS or any(e is None for e in estfs):
        raise ModelError(f"fusion needs {N_LEVELS} ESTFs, got {len(estfs)}")
    return torch.cat(list(estfs), dim=-1)


class PredictionHead(nn.Sequential):
    """FC(+ReLU) stack then a linear output layer; raw values or logits."""

    def __init__(self, in_dim: int, hidden_dims: Sequence[int], out_dim: int):
        layers: List[nn.Module] = []
        for dim in hidden_dims:
            layers += [nn.Linear(in_dim, dim), nn.ReLU(inplace=True)]
            in_dim = dim
        layers.append(nn.Linear(in_dim, out_dim))
        super().__init__(*layers)


class ADFFNet(nn.Module):
    def __init__(self, config: ModelConfig, generator: Optional[torch.Generator] = None):
        super().__init__()
        self.config = config
        channels = config.level_channels

        levels = []
        in_channels = config.seg_num
        for out_channels, n_convs in zip(channels, CONVS_PER_LEVEL):
            levels.append(SFLMLevel(in_channels, out_channels, n_convs))
            in_channels = out_channels
        self.sflm = nn.ModuleList(levels)

        if config.variant == Variant.NO_TFLM:
            branches = [SpatialProjection(c, config.estf_dim) for c in channels]
        else:
            branches = [
                TFLM(c, h, config.lstm_hidden, config.lstm_layers, use_se=config.variant == Variant.FULL)
                for c, h in zip(channels, config.se_hidden)
            ]
        self.tflm = nn.ModuleList(branches)
        self.head = PredictionHead(config.fused_dim, config.head_dims, config.arity)

        self.reset_parameters(generator)

    def reset_parameters(self, generator: Optional[torch.Generator] = None) -> None:
        """Fan-in scaled uniform for conv/linear/LSTM, unit/zero batch-norm."""
        for module in self.modules():
            if isinstance(module, (nn.Conv2d, nn.Linear)):
                fan_in = module.weight[0].numel()
                bound = 1.0 / fan_in**0.5
                nn.init.uniform_(module.weight, -bound, bound, generator=generator)
                if module.bias is not None:
                    nn.init.uniform_(module.bias, -bound, bound, generator=generator)
            elif isinstance(module, nn.BatchNorm2d):
                nn.init.ones_(module.weight)
                nn.init.zeros_(module.bias)
                module.reset_running_stats()
            elif isinstance(module, nn.LSTM):
                bound = 1.0 / module.hidden_size**0.5
                for param in module.parameters():
                    nn.init.uniform_(param, -bound, bound, generator=generator)

    def _check_input(self, x: torch.Tensor) -> None:
        if x.dim() != 4 or x.shape[1] != self.config.seg_num or x.shape[3] != N_MELS:
            raise ModelError(
                f"expected input (B, {self.config.seg_num}, T', {N_MELS}), got {tuple(x.shape)}"
            )
        if x.shape[2] < MIN_INPUT_SIDE:
            raise ModelError(
                f"input too small for {N_LEVELS} poolings: T'={x.shape[2]} < {MIN_INPUT_SIDE}"
            )

    def sflm_forward(self, x: torch.Tensor) -> List[torch.Tensor]:
        """Spatial features S_1..S_5."""
        self._check_input(x)
        features = []
        for level in self.sflm:
            x = level(x)
            features.append(x)
        return features

    def tflm_forward(self, features: Sequence[torch.Tensor]) -> List[torch.Tensor]:
        return [branch(s) for branch, s in zip(self.tflm, features)]

    def predict(self, fused: torch.Tensor) -> torch.Tensor:
        return self.head(fused)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.predict(fuse(self.tflm_forward(self.sflm_forward(x))))


def forward(model: ADFFNet, inputs: torch.Tensor, mode: RunMode = RunMode.EVAL) -> torch.Tensor:
    """Run ``model`` with batch-norm in train or eval behaviour.

    A single unbatched (seg_num, T', 128) input is accepted and returns an
    unbatched output.
    """
    model.train(RunMode(mode) == RunMode.TRAIN)
    single = inputs.dim() == 3
    if single:
        inputs = inputs.unsqueeze(0)
    if RunMode(mode) == RunMode.EVAL:
        with torch.no_grad():
            output = model(inputs)
    else:
        output = model(inputs)
    return output[0] if single else output
