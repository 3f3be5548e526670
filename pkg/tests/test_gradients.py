import torch

from psgan.config import DbConfig, DpConfig, GeneratorConfig, LossKind
from psgan.models.disc_background import build_db
from psgan.models.disc_pedestrian import build_dp
from psgan.models.generator import build_generator
from psgan.services.losses import discriminator_loss, l1_loss, lsgan_d_loss
from psgan.utils.gradcheck import check_parameter_gradients
from psgan.utils.seeding import make_generator


def uniform(shape, seed):
    return (torch.rand(shape, generator=make_generator(seed), dtype=torch.float64) * 2 - 1)


def assert_gradients_match(module, loss_fn):
    result = check_parameter_gradients(module, loss_fn, samples=100)
    assert result.checked == 100
    assert result.passed, result.failures[:5]
    assert result.max_relative_error <= 1e-3


def test_generator_gradients():
    generator = build_generator(GeneratorConfig(patch_size=8, levels=3, base_channels=4), make_generator(0)).double()
    generator.train()
    x = uniform((1, 3, 8, 8), 1)
    # target outside tanh range keeps |G(x) - target| away from the L1 kink
    target = torch.full((1, 3, 8, 8), 2.0, dtype=torch.float64)
    assert_gradients_match(generator, lambda: l1_loss(generator(x), target))


def test_background_discriminator_gradients():
    db = build_db(DbConfig(layer_channels=(4, 8)), make_generator(0)).double()
    db.train()
    real, fake = uniform((1, 6, 8, 8), 2), uniform((1, 6, 8, 8), 3)
    assert_gradients_match(db, lambda: lsgan_d_loss(db(real), db(fake)))


def test_pedestrian_discriminator_gradients():
    dp = build_dp(DpConfig(layer_channels=(4, 8, 8, 8, 8)), make_generator(0)).double()
    dp.eval()
    real, fake = uniform((1, 3, 16, 16), 4), uniform((1, 3, 16, 16), 5)
    assert_gradients_match(dp, lambda: discriminator_loss(LossKind.LOG_LIKELIHOOD, dp.logits(real), dp.logits(fake)))
