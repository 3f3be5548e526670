"""Pedestrian discriminator over variable-size crops, topped by spatial pyramid pooling"""

import torch
import torch.nn as nn
import torch.nn.functional as F

from psgan.errors import CropTooSmall, ShapeError
from psgan.models.generator import init_weights


def spp_pool(featmap, levels=(1, 2, 4)):
    """Max-pool a CxHxW (or NxCxHxW) map over n x n grids for each level.

    Bin (i, j) of level n covers rows [floor(i*H/n), ceil((i+1)*H/n)) and the
    matching columns, so bins are never empty. Output is level by level, then
    channel-major within a level: length C * sum(n*n).
    """
    levels = getattr(levels, 'levels', levels)
    single = featmap.dim() == 3
    if single:
        featmap = featmap.unsqueeze(0)
    if featmap.dim() != 4 or featmap.shape[-1] < 1 or featmap.shape[-2] < 1:
        raise ShapeError(f'spp_pool expects CxHxW with H, W >= 1, got {tuple(featmap.shape)}')

    pooled = [F.adaptive_max_pool2d(featmap, n).flatten(1) for n in levels]
    out = torch.cat(pooled, dim=1)
    return out.squeeze(0) if single else out


class PedestrianDiscriminator(nn.Module):
    """Conv stack (4x4 stride 2, last layer 3x3 stride 1) with LeakyReLU and batch norm from
    layer 2, then SPP (or a fixed-size resize when SPP is off) and a single linear unit"""

    def __init__(self, cfg):
        super().__init__()
        self.cfg = cfg.validate()

        layers = []
        in_channels = 3
        count = len(cfg.layer_channels)
        for i, out_channels in enumerate(cfg.layer_channels):
            last = i == count - 1
            layers.append(nn.Conv2d(
                in_channels, out_channels,
                3 if last else 4,
                stride=1 if last else 2,
                padding=1,
                bias=i == 0,
            ))
            if i > 0:
                layers.append(nn.BatchNorm2d(out_channels))
            layers.append(nn.LeakyReLU(0.2))
            in_channels = out_channels
        self.features = nn.Sequential(*layers)

        if cfg.spp_enabled:
            width = in_channels * cfg.spp.total_bins
        else:
            fh, fw = (s // self.downscale for s in cfg.fixed_size)
            width = in_channels * fh * fw
        self.head = nn.Linear(width, 1)

    @property
    def downscale(self):
        return 2 ** (len(self.cfg.layer_channels) - 1)

    def logits(self, crop):
        """Raw score per crop for an Nx3xhxw batch"""
        if crop.dim() != 4 or crop.shape[1] != 3:
            raise ShapeError(f'pedestrian discriminator expects Nx3xhxw crops, got {tuple(crop.shape)}')

        if self.cfg.spp_enabled:
            h, w = crop.shape[-2:]
            minimum = self.cfg.min_crop_size
            if h < minimum or w < minimum:
                raise CropTooSmall(f'crop {h}x{w} is below the minimum of {minimum} pixels per side')
            cells = crop.shape[0] * (h // self.downscale) * (w // self.downscale)
            if self.training and cells == 1:
                raise CropTooSmall(f'crop {h}x{w} leaves a single cell for batch norm in training mode')
            feats = self.features(crop)
            pooled = spp_pool(feats, self.cfg.spp.levels)
        else:
            resized = F.interpolate(crop, size=tuple(self.cfg.fixed_size), mode='bilinear', align_corners=False)
            pooled = self.features(resized).flatten(1)
        return self.head(pooled).squeeze(1)

    def forward(self, crop):
        return torch.sigmoid(self.logits(crop))


def build_dp(cfg, rng):
    return init_weights(PedestrianDiscriminator(cfg), rng)


def dp_forward(dp, crop):
    """Probability that a 3xhxw crop shows a real pedestrian"""
    if crop.dim() == 3:
        return dp(crop.unsqueeze(0)).squeeze(0)
    return dp(crop)
