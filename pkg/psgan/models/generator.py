"""U-Net generator mapping a noise-masked patch to a completed patch"""

import logging

import torch
import torch.nn as nn

from psgan.errors import ShapeError

logger = logging.getLogger(__name__)


def init_weights(module, rng, std=0.02):
    """Draw every conv/linear weight from N(0, std) using rng; biases start at zero"""
    with torch.no_grad():
        for layer in module.modules():
            if isinstance(layer, (nn.Conv2d, nn.ConvTranspose2d, nn.Linear)):
                layer.weight.copy_(torch.randn(layer.weight.shape, generator=rng) * std)
                if layer.bias is not None:
                    layer.bias.zero_()
            elif isinstance(layer, nn.BatchNorm2d):
                layer.weight.copy_(1.0 + torch.randn(layer.weight.shape, generator=rng) * std)
                layer.bias.zero_()
    return module


def parameter_count(module):
    return sum(p.numel() for p in module.parameters())


class UNetGenerator(nn.Module):
    """Encoder-decoder with mirror skip connections.

    Encoder level i halves the resolution with a 4x4 stride-2 convolution
    (LeakyReLU 0.2 in front of every level but the first, batch norm on every
    level but the first and the innermost). Decoder level i consumes the
    previous decoder output concatenated with encoder output i and doubles the
    resolution with a transposed convolution; the outermost level ends in tanh.
    """

    def __init__(self, cfg):
        super().__init__()
        self.cfg = cfg.validate()
        channels = cfg.channels
        levels = cfg.levels

        self.down = nn.ModuleList()
        in_channels = 3
        for i, out_channels in enumerate(channels):
            normalized = 0 < i < levels - 1
            layers = [] if i == 0 else [nn.LeakyReLU(0.2)]
            layers.append(nn.Conv2d(in_channels, out_channels, 4, stride=2, padding=1, bias=not normalized))
            if normalized:
                layers.append(nn.BatchNorm2d(out_channels))
            self.down.append(nn.Sequential(*layers))
            in_channels = out_channels

        self.up = nn.ModuleList()
        for i in range(levels):
            in_channels = channels[i] if i == levels - 1 else 2 * channels[i]
            outermost = i == 0
            out_channels = 3 if outermost else channels[i - 1]
            layers = [
                nn.ReLU(),
                nn.ConvTranspose2d(in_channels, out_channels, 4, stride=2, padding=1, bias=outermost),
            ]
            if outermost:
                layers.append(nn.Tanh())
            else:
                layers.append(nn.BatchNorm2d(out_channels))
                if cfg.use_dropout and i >= levels - 3:
                    layers.append(nn.Dropout(0.5))
            self.up.append(nn.Sequential(*layers))

    def forward(self, x):
        size = self.cfg.patch_size
        if x.dim() != 4 or x.shape[1] != 3 or x.shape[2] != size or x.shape[3] != size:
            raise ShapeError(f'generator expects Nx3x{size}x{size}, got {tuple(x.shape)}')

        skips = []
        h = x
        for level in self.down:
            h = level(h)
            skips.append(h)

        h = self.up[-1](skips[-1])
        for i in range(self.cfg.levels - 2, -1, -1):
            h = self.up[i](torch.cat([h, skips[i]], dim=1))
        return h


def build_generator(cfg, rng):
    """Build a U-Net generator with N(0, 0.02) initial weights drawn from rng"""
    generator = init_weights(UNetGenerator(cfg), rng)
    logger.debug('built generator with %d parameters', parameter_count(generator))
    return generator


def generator_forward(generator, x):
    """Run the generator on a 3xPxP patch or an Nx3xPxP batch"""
    if x.dim() == 3:
        return generator(x.unsqueeze(0)).squeeze(0)
    return generator(x)
