"""Background-context discriminator scoring stacked (noise image, candidate) pairs patch-wise"""

import torch
import torch.nn as nn

from psgan.errors import ShapeError
from psgan.models.generator import init_weights

KERNEL = 4
PADDING = 1


def receptive_field(strides, kernel=KERNEL):
    """Receptive field and jump of a conv stack via r <- r + (k - 1) * jump"""
    field, jump = 1, 1
    for stride in strides:
        field += (kernel - 1) * jump
        jump *= stride
    return field, jump


def output_size(size, strides, kernel=KERNEL, padding=PADDING):
    """Spatial size after a conv stack"""
    for stride in strides:
        size = (size + 2 * padding - kernel) // stride + 1
    return size


class BackgroundDiscriminator(nn.Module):
    """PatchGAN over 6-channel pairs: listed layers use stride 2 except the last (stride 1),
    then a 1-channel stride-1 head; batch norm from the second layer on; raw scores out"""

    def __init__(self, cfg):
        super().__init__()
        self.cfg = cfg.validate()

        layers = []
        in_channels = cfg.input_channels
        for i, (out_channels, stride) in enumerate(zip(cfg.layer_channels, cfg.strides)):
            layers.append(nn.Conv2d(in_channels, out_channels, KERNEL, stride=stride, padding=PADDING, bias=i == 0))
            if i > 0:
                layers.append(nn.BatchNorm2d(out_channels))
            layers.append(nn.LeakyReLU(0.2))
            in_channels = out_channels
        layers.append(nn.Conv2d(in_channels, 1, KERNEL, stride=1, padding=PADDING))
        self.model = nn.Sequential(*layers)

    @property
    def all_strides(self):
        return list(self.cfg.strides) + [1]

    @property
    def receptive_field(self):
        return receptive_field(self.all_strides)[0]

    def score_size(self, patch_size):
        return output_size(patch_size, self.all_strides)

    def forward(self, pair):
        if pair.dim() != 4 or pair.shape[1] != self.cfg.input_channels:
            raise ShapeError(f'background discriminator expects Nx6xPxP pairs, got {tuple(pair.shape)}')
        return self.model(pair)


def build_db(cfg, rng):
    return init_weights(BackgroundDiscriminator(cfg), rng)


def db_forward(db, pair):
    """Score a 6xPxP pair (or a batch of them); returns the raw score map"""
    if pair.dim() == 3:
        return db(pair.unsqueeze(0)).squeeze(0)
    return db(pair)


def patch_targets(shape, kind):
    """All-ones map for real pairs, all-zeros for fake pairs"""
    if kind not in ('real', 'fake'):
        raise ValueError(f'unknown target kind {kind!r}')
    fill = torch.ones if kind == 'real' else torch.zeros
    return fill((1,) + tuple(shape))
