"""PNG input/output and value-range conversion for image tensors"""

import os

import numpy as np
import torch
from PIL import Image


def to_tensor(array):
    """Convert an HxWx3 uint8 array to a 3xHxW float tensor in [-1, 1]"""
    values = np.asarray(array, dtype=np.float32) / np.float32(127.5) - np.float32(1.0)
    return torch.from_numpy(np.ascontiguousarray(values.transpose(2, 0, 1)))


def to_uint8(tensor):
    """Convert a 3xHxW tensor in [-1, 1] to an HxWx3 uint8 array"""
    values = ((tensor.detach().to(torch.float32).cpu() + 1.0) * 127.5).round().clamp(0, 255)
    return values.to(torch.uint8).permute(1, 2, 0).numpy()


def load_png(path):
    """Load an 8-bit RGB image as a normalized tensor"""
    with Image.open(path) as img:
        return to_tensor(np.array(img.convert('RGB')))


def load_mask(path):
    """Load a placement mask as a boolean HxW tensor (nonzero means allowed)"""
    with Image.open(path) as img:
        return torch.from_numpy(np.array(img.convert('L')) > 0)


def save_png(tensor, path):
    """Write a normalized 3xHxW tensor as an 8-bit RGB PNG"""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    Image.fromarray(to_uint8(tensor), mode='RGB').save(path, format='PNG')
