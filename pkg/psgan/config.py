"""Typed configuration for networks, losses, training, toy data and proposals"""

import os
from dataclasses import asdict, dataclass, field
from enum import Enum

from psgan.errors import ConfigError
from psgan.utils.validators import (
    validate_non_negative,
    validate_ordered_pair,
    validate_positive,
)


def env_flag(name, default):
    """Read a 0/1 flag from the environment"""
    return os.getenv(name, '1' if default else '0') == '1'


class LossKind(str, Enum):
    LEAST_SQUARES = 'ls'
    LOG_LIKELIHOOD = 'nll'


@dataclass
class SppLevels:
    levels: tuple = (1, 2, 4)

    @property
    def total_bins(self):
        return sum(n * n for n in self.levels)

    def validate(self):
        if not self.levels:
            raise ConfigError('spp levels must not be empty')
        for n in self.levels:
            validate_positive('spp level', n)
        return self


@dataclass
class GeneratorConfig:
    """U-Net layout; the output activation is always tanh"""

    patch_size: int = 256
    levels: int = 8
    base_channels: int = 64
    use_dropout: bool = False

    @property
    def channels(self):
        return [min(self.base_channels * 2 ** i, self.base_channels * 8) for i in range(self.levels)]

    def validate(self):
        validate_positive('levels', self.levels)
        validate_positive('base_channels', self.base_channels)
        if self.levels < 2:
            raise ConfigError('the U-Net needs at least 2 levels')
        if self.patch_size != 2 ** self.levels:
            raise ConfigError(
                f'patch size {self.patch_size} does not reach a 1x1 bottleneck with '
                f'{self.levels} levels (expected {2 ** self.levels})'
            )
        return self


@dataclass
class DbConfig:
    input_channels: int = 6
    layer_channels: tuple = (64, 128, 256, 512)

    @property
    def strides(self):
        return [2] * (len(self.layer_channels) - 1) + [1]

    def validate(self):
        if self.input_channels != 6:
            raise ConfigError('the background discriminator takes exactly 6 input channels')
        if not self.layer_channels:
            raise ConfigError('layer_channels must not be empty')
        for c in self.layer_channels:
            validate_positive('layer channel', c)
        return self


@dataclass
class DpConfig:
    layer_channels: tuple = (64, 128, 256, 512, 512)
    spp: SppLevels = field(default_factory=SppLevels)
    spp_enabled: bool = True
    # crop size (H, W) used when the pyramid is disabled
    fixed_size: tuple = (64, 32)

    @property
    def min_crop_size(self):
        return 2 ** (len(self.layer_channels) - 1)

    def validate(self):
        if not self.layer_channels:
            raise ConfigError('layer_channels must not be empty')
        for c in self.layer_channels:
            validate_positive('layer channel', c)
        self.spp.validate()
        if min(self.fixed_size) < self.min_crop_size:
            raise ConfigError(f'fixed_size {self.fixed_size} is below the minimum crop size {self.min_crop_size}')
        return self


@dataclass
class LossWeights:
    lambda_l1: float = 100.0
    db_kind: LossKind = LossKind.LEAST_SQUARES
    dp_kind: LossKind = LossKind.LOG_LIKELIHOOD

    def validate(self):
        self.lambda_l1 = float(validate_non_negative('lambda_l1', self.lambda_l1))
        self.db_kind = LossKind(self.db_kind)
        self.dp_kind = LossKind(self.dp_kind)
        return self


@dataclass
class TrainConfig:
    epochs: int = 200
    batch_size: int = 1
    lr_g: float = 2e-4
    lr_db: float = 2e-4
    lr_dp: float = 2e-4
    beta1: float = 0.5
    beta2: float = 0.999
    seed: int = 0
    checkpoint_every: int = 10
    dp_enabled: bool = True
    weights: LossWeights = field(default_factory=LossWeights)
    generator: GeneratorConfig = field(default_factory=GeneratorConfig)
    db: DbConfig = field(default_factory=DbConfig)
    dp: DpConfig = field(default_factory=DpConfig)

    @property
    def spp_enabled(self):
        return self.dp.spp_enabled

    @property
    def patch_size(self):
        return self.generator.patch_size

    def validate(self):
        validate_positive('epochs', self.epochs)
        validate_positive('batch_size', self.batch_size)
        validate_positive('checkpoint_every', self.checkpoint_every)
        for name in ('lr_g', 'lr_db', 'lr_dp', 'beta1', 'beta2'):
            setattr(self, name, float(validate_non_negative(name, getattr(self, name))))
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1):
            raise ConfigError('moment decays must lie in [0, 1)')
        self.weights.validate()
        self.generator.validate()
        self.db.validate()
        self.dp.validate()
        return self

    def to_dict(self):
        """Convert the config to plain JSON-compatible data"""
        data = asdict(self)
        data['weights']['db_kind'] = self.weights.db_kind.value
        data['weights']['dp_kind'] = self.weights.dp_kind.value
        return data


@dataclass
class ToyConfig:
    width: int = 128
    height: int = 96
    n_peds: int = 1
    ped_h_range: tuple = (40, 56)

    def validate(self):
        validate_positive('width', self.width)
        validate_positive('height', self.height)
        validate_non_negative('n_peds', self.n_peds)
        low, high = validate_ordered_pair('ped_h_range', self.ped_h_range)
        if low < 10:
            raise ConfigError('toy pedestrians need a height of at least 10 pixels')
        if high > self.height - 2:
            raise ConfigError(f'pedestrian height {high} does not fit an image of height {self.height}')
        if high > self.width - 2:
            raise ConfigError(f'pedestrian height {high} does not fit an image of width {self.width}')
        return self


@dataclass
class ProposalConfig:
    h_min: int = 70
    h_max: int = 160
    aspect_range: tuple = (0.35, 0.5)
    min_w: int = 25
    max_iou: float = 0.3
    attempts_per_box: int = 1000

    def validate(self):
        validate_positive('h_min', self.h_min)
        validate_ordered_pair('height range', (self.h_min, self.h_max))
        low, high = validate_ordered_pair('aspect_range', self.aspect_range)
        if low <= 0:
            raise ConfigError('aspect ratios must be positive')
        validate_positive('min_w', self.min_w)
        validate_positive('attempts_per_box', self.attempts_per_box)
        return self
