"""Analytic gradients of every differentiable stage against central differences."""

import pytest
import torch
import torch.nn.functional as F
from torch.autograd import gradcheck
from torch.func import functional_call

from adff.models.network import (
    TFLM,
    PredictionHead,
    SpatialProjection,
    frequency_mean,
    se_excite,
    se_scale,
    se_squeeze,
)
from adff.services.metrics import ce_loss, mse_loss

GRADCHECK = {"eps": 1e-6, "atol": 1e-6, "rtol": 1e-4}


def _rand(*shape, seed: int = 0) -> torch.Tensor:
    generator = torch.Generator().manual_seed(seed)
    return torch.randn(*shape, generator=generator, dtype=torch.float64).requires_grad_()


def _check_module(module: torch.nn.Module, *inputs: torch.Tensor) -> bool:
    """Gradcheck a module w.r.t. its inputs and every learnable tensor."""
    module = module.double()
    names = [name for name, _ in module.named_parameters()]
    params = [p.detach().clone().requires_grad_() for _, p in module.named_parameters()]

    def fn(*args):
        weights = dict(zip(names, args[len(inputs):]))
        out = functional_call(module, weights, args[: len(inputs)])
        return out[0] if isinstance(out, tuple) else out

    return gradcheck(fn, (*inputs, *params), **GRADCHECK)


class TestLayerGradients:
    """Test gradients of the building blocks in double precision."""

    def test_convolution(self):
        x, w, b = _rand(2, 3, 5, 6), _rand(4, 3, 3, 3, seed=1), _rand(4, seed=2)
        assert gradcheck(lambda x, w, b: F.conv2d(x, w, b, padding=1), (x, w, b), **GRADCHECK)

    def test_batch_norm_train(self):
        x, gamma, beta = _rand(4, 3, 3, 3), _rand(3, seed=1), _rand(3, seed=2)
        def fn(x, g, b):
            return F.batch_norm(x, None, None, g, b, training=True)

        assert gradcheck(fn, (x, gamma, beta), **GRADCHECK)

    def test_batch_norm_eval(self):
        x, gamma, beta = _rand(4, 3, 3, 3), _rand(3, seed=1), _rand(3, seed=2)
        mean = torch.tensor([0.1, -0.2, 0.3], dtype=torch.float64)
        var = torch.tensor([1.5, 0.5, 2.0], dtype=torch.float64)
        def fn(x, g, b):
            return F.batch_norm(x, mean, var, g, b, training=False)

        assert gradcheck(fn, (x, gamma, beta), **GRADCHECK)

    def test_relu_away_from_kink(self):
        x = _rand(20).detach()
        x = (x + 0.1 * torch.sign(x)).requires_grad_()
        assert gradcheck(F.relu, (x,), **GRADCHECK)

    def test_max_pool(self):
        x = _rand(1, 2, 4, 6)
        assert gradcheck(lambda x: F.max_pool2d(x, 2, 2), (x,), **GRADCHECK)

    def test_sigmoid_and_affine(self):
        x, w, b = _rand(3, 5), _rand(4, 5, seed=1), _rand(4, seed=2)
        assert gradcheck(lambda x, w, b: torch.sigmoid(F.linear(x, w, b)), (x, w, b), **GRADCHECK)

    def test_frequency_mean(self):
        assert gradcheck(frequency_mean, (_rand(2, 3, 4, 5),), **GRADCHECK)

    def test_lstm_all_layers_and_directions(self):
        lstm = torch.nn.LSTM(3, 4, num_layers=2, batch_first=True, bidirectional=True)
        assert len(list(lstm.parameters())) == 16
        assert _check_module(lstm, _rand(2, 5, 3))


class TestAttentionGradients:
    """Test gradients through the SE and TFLM stages."""

    def test_squeeze(self):
        assert gradcheck(se_squeeze, (_rand(2, 4, 3, 3),), **GRADCHECK)

    def test_excite(self):
        z, w1, w2 = _rand(3, 8), _rand(4, 8, seed=1), _rand(8, 4, seed=2)
        assert gradcheck(se_excite, (z, w1, w2), **GRADCHECK)

    def test_scale(self):
        s, a = _rand(2, 4, 3, 3), _rand(2, 4, seed=1)
        assert gradcheck(se_scale, (s, a), **GRADCHECK)

    def test_tflm_branch(self):
        branch = TFLM(channels=4, se_hidden=4, lstm_hidden=3, lstm_layers=2)
        names = {name for name, _ in branch.named_parameters()}
        assert {"se.fc1.weight", "se.fc2.weight", "lstm.weight_hh_l1_reverse"} <= names
        assert _check_module(branch, _rand(2, 4, 5, 3))

    def test_spatial_projection(self):
        assert _check_module(SpatialProjection(channels=4, out_dim=6), _rand(2, 4, 3, 3))

    def test_prediction_head(self):
        assert _check_module(PredictionHead(10, [6], 2), _rand(3, 10))


class TestLossGradients:
    """Test gradients of the training losses."""

    def test_mse(self):
        target = torch.randn(6, 2, dtype=torch.float64)
        assert gradcheck(lambda p: mse_loss(p, target), (_rand(6, 2),), **GRADCHECK)

    @pytest.mark.parametrize("arity", [2, 4])
    def test_cross_entropy(self, arity):
        target = torch.arange(6) % arity
        assert gradcheck(lambda logits: ce_loss(logits, target), (_rand(6, arity),), **GRADCHECK)
