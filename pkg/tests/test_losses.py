import math

import pytest
import torch

from psgan.config import LossKind, LossWeights
from psgan.errors import DomainError, ShapeMismatch
from psgan.services.losses import (
    discriminator_loss,
    generator_adversarial_loss,
    l1_loss,
    lsgan_d_loss,
    lsgan_g_loss,
    nll_dp_loss,
    nll_g_dp_loss,
    total_g_loss,
)


def t(values):
    return torch.tensor(values, dtype=torch.float64)


def test_lsgan_d_loss_examples():
    assert lsgan_d_loss(torch.ones(4, 4), torch.zeros(4, 4)).item() == pytest.approx(0.0, abs=1e-6)
    assert lsgan_d_loss(torch.zeros(4, 4), torch.ones(4, 4)).item() == pytest.approx(2.0, abs=1e-6)
    assert lsgan_d_loss(t([[0.5]]), t([[0.5]])).item() == pytest.approx(0.5, abs=1e-6)


def test_lsgan_d_loss_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        lsgan_d_loss(torch.ones(2, 2), torch.ones(3, 3))


def test_lsgan_d_loss_minimum_on_grid():
    grid = [i / 4 for i in range(-4, 9)]
    values = {(r, f): lsgan_d_loss(t([r]), t([f])).item() for r in grid for f in grid}
    best = min(values, key=values.get)
    assert best == (1.0, 0.0)
    assert values[best] == 0.0


def test_lsgan_g_loss_examples():
    assert lsgan_g_loss(torch.ones(3)).item() == pytest.approx(0.0, abs=1e-6)
    assert lsgan_g_loss(torch.zeros(3)).item() == pytest.approx(1.0, abs=1e-6)
    assert lsgan_g_loss(t([[0.25, 0.75]])).item() == pytest.approx(0.3125, abs=1e-6)


def test_nll_dp_loss_examples():
    assert nll_dp_loss(1.0, 0.0).item() == pytest.approx(0.0, abs=1e-6)
    assert nll_dp_loss(0.5, 0.5).item() == pytest.approx(2 * math.log(2), abs=1e-6)
    assert nll_dp_loss(0.5, 0.5).item() == pytest.approx(1.386294, abs=1e-6)


def test_nll_dp_loss_clamps_zero():
    value = nll_dp_loss(0.0, 0.0).item()
    assert math.isfinite(value)
    assert value == pytest.approx(-math.log(1e-7), rel=1e-6)


def test_nll_rejects_values_outside_unit_interval():
    with pytest.raises(DomainError):
        nll_dp_loss(1.5, 0.2)
    with pytest.raises(DomainError):
        nll_g_dp_loss(-0.1)


def test_nll_g_dp_loss_examples():
    assert nll_g_dp_loss(1.0).item() == pytest.approx(0.0, abs=1e-6)
    assert nll_g_dp_loss(0.5).item() == pytest.approx(math.log(2), abs=1e-6)
    assert nll_g_dp_loss(math.exp(-3)).item() == pytest.approx(3.0, abs=1e-6)


def test_l1_loss_examples():
    x = torch.rand(3, 4, 4)
    assert l1_loss(x, x.clone()).item() == 0.0
    assert l1_loss(torch.ones(2, 3), torch.zeros(2, 3)).item() == pytest.approx(1.0, abs=1e-6)
    assert l1_loss(t([1.0, -1.0]), t([0.0, 0.0])).item() == pytest.approx(1.0, abs=1e-6)
    with pytest.raises(ShapeMismatch):
        l1_loss(torch.ones(2), torch.ones(3))


def test_total_g_loss_examples():
    weights = LossWeights(lambda_l1=100.0).validate()
    assert total_g_loss(0.0, 0.0, 0.0, weights) == 0.0
    assert total_g_loss(0.5, 0.7, 0.01, weights) == pytest.approx(2.2, abs=1e-6)
    no_l1 = LossWeights(lambda_l1=0).validate()
    assert total_g_loss(0.5, 0.7, 0.3, no_l1) == pytest.approx(1.2, abs=1e-6)


def test_losses_are_non_negative():
    gen = torch.Generator().manual_seed(0)
    for _ in range(20):
        real, fake = torch.randn(5, generator=gen), torch.randn(5, generator=gen)
        probs = torch.rand(2, generator=gen)
        assert lsgan_d_loss(real, fake) >= 0
        assert lsgan_g_loss(fake) >= 0
        assert nll_dp_loss(probs[0], probs[1]) >= 0
        assert nll_g_dp_loss(probs[0]) >= 0
        assert l1_loss(real, fake) >= 0


def test_loss_kind_switches_on_raw_scores():
    real, fake = t([2.0, -1.0]), t([0.5, 0.0])
    assert torch.equal(discriminator_loss(LossKind.LEAST_SQUARES, real, fake), lsgan_d_loss(real, fake))
    assert torch.allclose(
        discriminator_loss('nll', real, fake),
        nll_dp_loss(torch.sigmoid(real), torch.sigmoid(fake)),
    )
    assert torch.allclose(generator_adversarial_loss('nll', t([0.0])), t(math.log(2)))
    assert torch.equal(generator_adversarial_loss('ls', fake), lsgan_g_loss(fake))
