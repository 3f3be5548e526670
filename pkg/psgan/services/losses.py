"""Adversarial, reconstruction and total objectives for the generator and both discriminators"""

import torch

from psgan.config import LossKind
from psgan.errors import DomainError, ShapeMismatch

PROB_EPS = 1e-7


def _same_shape(a, b, what):
    if a.shape != b.shape:
        raise ShapeMismatch(f'{what}: shapes {tuple(a.shape)} and {tuple(b.shape)} differ')


def _as_tensor(value):
    return value if torch.is_tensor(value) else torch.tensor(float(value), dtype=torch.float64)


def _clamped(prob):
    prob = _as_tensor(prob)
    if torch.any(prob < 0) or torch.any(prob > 1) or torch.any(torch.isnan(prob)):
        raise DomainError('probabilities must lie in [0, 1]')
    return prob.clamp(PROB_EPS, 1 - PROB_EPS)


def lsgan_d_loss(real_map, fake_map):
    """mean((real - 1)^2) + mean(fake^2)"""
    _same_shape(real_map, fake_map, 'lsgan_d_loss')
    return torch.mean((real_map - 1) ** 2) + torch.mean(fake_map ** 2)


def lsgan_g_loss(fake_map):
    """mean((fake - 1)^2)"""
    return torch.mean((fake_map - 1) ** 2)


def nll_dp_loss(real_p, fake_p):
    """-log(real_p) - log(1 - fake_p), averaged over elements"""
    real_p, fake_p = _clamped(real_p), _clamped(fake_p)
    _same_shape(real_p, fake_p, 'nll_dp_loss')
    return torch.mean(-torch.log(real_p) - torch.log(1 - fake_p))


def nll_g_dp_loss(fake_p):
    """Non-saturating generator side: -log(fake_p)"""
    return torch.mean(-torch.log(_clamped(fake_p)))


def l1_loss(generated, truth):
    """Mean absolute difference over all elements"""
    _same_shape(generated, truth, 'l1_loss')
    return torch.mean(torch.abs(generated - truth))


def total_g_loss(adv_db, adv_dp, l1, weights):
    """adv_db + adv_dp + lambda * l1"""
    return adv_db + adv_dp + weights.lambda_l1 * l1


def discriminator_loss(kind, real_scores, fake_scores):
    """Discriminator objective on raw scores for the configured loss kind"""
    if LossKind(kind) is LossKind.LEAST_SQUARES:
        return lsgan_d_loss(real_scores, fake_scores)
    return nll_dp_loss(torch.sigmoid(real_scores), torch.sigmoid(fake_scores))


def generator_adversarial_loss(kind, fake_scores):
    """Generator objective on raw scores for the configured loss kind"""
    if LossKind(kind) is LossKind.LEAST_SQUARES:
        return lsgan_g_loss(fake_scores)
    return nll_g_dp_loss(torch.sigmoid(fake_scores))
