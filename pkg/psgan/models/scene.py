"""Scenes, boxes and training patches"""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import torch

from psgan.errors import InvalidBox, OutOfBounds


class BoxLabel(str, Enum):
    REAL = 'real'
    SYNTHETIC = 'synthetic'


@dataclass(frozen=True)
class BBox:
    """Axis-aligned pixel rectangle; x is the column and y the row of the top-left corner"""

    x: int
    y: int
    w: int
    h: int
    label: BoxLabel = BoxLabel.REAL
    score: Optional[float] = None

    def __post_init__(self):
        if self.w < 1 or self.h < 1:
            raise InvalidBox(f'box must have positive size, got w={self.w} h={self.h}')
        if self.x < 0 or self.y < 0:
            raise InvalidBox(f'box must start inside the image, got x={self.x} y={self.y}')
        object.__setattr__(self, 'label', BoxLabel(self.label))

    @property
    def right(self):
        return self.x + self.w

    @property
    def bottom(self):
        return self.y + self.h

    @property
    def area(self):
        return self.w * self.h

    def fits(self, height, width):
        """Check that the box lies fully inside a height x width image"""
        return self.right <= width and self.bottom <= height

    def translate(self, dx, dy):
        return BBox(self.x + dx, self.y + dy, self.w, self.h, self.label, self.score)

    def with_label(self, label):
        return BBox(self.x, self.y, self.w, self.h, label, self.score)

    def iou(self, other):
        """Intersection over union with another box"""
        iw = min(self.right, other.right) - max(self.x, other.x)
        ih = min(self.bottom, other.bottom) - max(self.y, other.y)
        if iw <= 0 or ih <= 0:
            return 0.0
        inter = iw * ih
        return inter / float(self.area + other.area - inter)

    def to_dict(self):
        """Convert box to dictionary"""
        data = {
            'x': self.x,
            'y': self.y,
            'w': self.w,
            'h': self.h,
            'label': self.label.value,
        }
        if self.score is not None:
            data['score'] = self.score
        return data

    def __repr__(self):
        return f'<BBox {self.label.value} x={self.x} y={self.y} w={self.w} h={self.h}>'


@dataclass
class Scene:
    """Full RGB image in [-1, 1] with its pedestrian boxes"""

    image: torch.Tensor
    boxes: List[BBox] = field(default_factory=list)
    source_id: str = ''

    def __post_init__(self):
        if self.image.dim() != 3 or self.image.shape[0] != 3:
            raise OutOfBounds(f'scene image must be 3xHxW, got {tuple(self.image.shape)}')
        for box in self.boxes:
            if not box.fits(self.height, self.width):
                raise OutOfBounds(f'{box!r} leaves scene {self.source_id!r} of size {self.height}x{self.width}')

    @property
    def height(self):
        return self.image.shape[1]

    @property
    def width(self):
        return self.image.shape[2]

    def to_dict(self):
        """Convert scene annotation (not pixels) to dictionary"""
        return {
            'image': self.source_id,
            'boxes': [box.to_dict() for box in self.boxes],
        }

    def __repr__(self):
        return f'<Scene {self.source_id} {self.height}x{self.width} boxes={len(self.boxes)}>'


@dataclass
class PatchGeometry:
    """Patch cut out of a scene, the box in patch coordinates and the patch offset (top, left)"""

    patch: torch.Tensor
    box: BBox
    offset: Tuple[int, int]


@dataclass
class PatchPair:
    """Training triple: noisy input x, ground truth y and the noise box z in patch coordinates"""

    x_noisy: torch.Tensor
    y_truth: torch.Tensor
    z_box: BBox
    offset: Tuple[int, int] = (0, 0)
    source_id: str = ''

    @property
    def P(self):
        return self.y_truth.shape[-1]

    def to_dict(self):
        """Convert pair metadata to dictionary"""
        return {
            'source_id': self.source_id,
            'offset': list(self.offset),
            'z_box': self.z_box.to_dict(),
            'patch_size': self.P,
        }

    def __repr__(self):
        return f'<PatchPair {self.source_id} P={self.P} z={self.z_box!r}>'
