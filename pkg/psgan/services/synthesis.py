"""Inference: propose noise boxes, run the generator, composite and export annotations"""

import json
import logging
import os
from dataclasses import replace

import torch

from psgan.errors import OutOfBounds
from psgan.models.generator import generator_forward
from psgan.models.scene import BBox, BoxLabel
from psgan.services.scene_data import crop_patch, mask_with_noise

logger = logging.getLogger(__name__)


def propose_boxes(scene, placement_mask, n, size_range, rng):
    """Sample up to n boxes whose bottom-centre lies on an allowed mask pixel.

    size_range is a ProposalConfig. A candidate is rejected when it leaves the
    image, is narrower than min_w, or overlaps an existing or already proposed
    box with IoU above max_iou. Gives up after attempts_per_box * n draws.
    """
    cfg = size_range.validate()
    if placement_mask is None:
        placement_mask = torch.ones(scene.height, scene.width, dtype=torch.bool)
    if tuple(placement_mask.shape) != (scene.height, scene.width):
        raise OutOfBounds(f'placement mask {tuple(placement_mask.shape)} does not match scene {scene.height}x{scene.width}')

    allowed = torch.nonzero(placement_mask.bool(), as_tuple=False)
    if n <= 0 or len(allowed) == 0:
        return []

    taken = list(scene.boxes)
    proposed = []
    budget = cfg.attempts_per_box * n
    low_aspect, high_aspect = cfg.aspect_range

    for _ in range(budget):
        if len(proposed) == n:
            break
        row, col = allowed[torch.randint(len(allowed), (1,), generator=rng).item()].tolist()
        h = torch.randint(cfg.h_min, cfg.h_max + 1, (1,), generator=rng).item()
        aspect = low_aspect + (high_aspect - low_aspect) * torch.rand(1, generator=rng, dtype=torch.float64).item()
        w = int(round(h * aspect))
        x = col - w // 2
        y = row - h + 1
        if w < cfg.min_w or x < 0 or y < 0 or x + w > scene.width or y + h > scene.height:
            continue
        box = BBox(x, y, w, h, BoxLabel.SYNTHETIC)
        if any(box.iou(other) > cfg.max_iou for other in taken):
            continue
        taken.append(box)
        proposed.append(box)

    if len(proposed) < n:
        logger.warning('placed %d of %d boxes in %s after %d attempts', len(proposed), n, scene.source_id, budget)
    return proposed


def synthesize_patch(generator, scene, box, rng, P=None):
    """crop_patch -> mask_with_noise -> generator (eval mode); returns (patch, (top, left))"""
    P = P or generator.cfg.patch_size
    geometry = crop_patch(scene, box, P)
    noisy = mask_with_noise(geometry.patch, geometry.box, rng)

    generator.eval()
    with torch.no_grad():
        generated = generator_forward(generator, noisy.to(next(generator.parameters()).dtype))
    return generated.to(scene.image.dtype), geometry.offset


def composite(scene, patch, offset, box, full_patch=False):
    """Paste the generated box interior (or the whole patch) back and record a synthetic box"""
    top, left = offset
    size_h, size_w = patch.shape[-2:]
    if top < 0 or left < 0 or top + size_h > scene.height or left + size_w > scene.width:
        raise OutOfBounds(f'patch at {offset} does not fit scene {scene.source_id!r}')
    local = box.translate(-left, -top) if box.x >= left and box.y >= top else None
    if local is None or not local.fits(size_h, size_w):
        raise OutOfBounds(f'{box!r} is not inside the patch at {offset}')

    image = scene.image.clone()
    if full_patch:
        image[:, top:top + size_h, left:left + size_w] = patch
    else:
        image[:, box.y:box.bottom, box.x:box.right] = patch[:, local.y:local.bottom, local.x:local.right]

    boxes = list(scene.boxes) + [box.with_label(BoxLabel.SYNTHETIC)]
    return replace(scene, image=image, boxes=boxes)


def annotation_document(scenes):
    """Build the annotation JSON structure with per-label counts"""
    real = sum(1 for s in scenes for b in s.boxes if b.label is BoxLabel.REAL)
    synthetic = sum(1 for s in scenes for b in s.boxes if b.label is BoxLabel.SYNTHETIC)
    return {
        'scenes': [scene.to_dict() for scene in scenes],
        'counts': {'real': real, 'synthetic': synthetic, 'total': real + synthetic},
    }


def export_annotations(scenes, path):
    """Write the annotation document; labels are kept so detectors can mix or weight them"""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    document = annotation_document(scenes)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(document, f, indent=2)
    logger.info('exported %d scenes with %d boxes to %s', len(scenes), document['counts']['total'], path)
    return document['counts']


def synthesize_scene(generator, scene, n, proposal_cfg, rng, placement_mask=None, full_patch=False):
    """Propose n boxes and fill each with a generated pedestrian"""
    for box in propose_boxes(scene, placement_mask, n, proposal_cfg, rng):
        patch, offset = synthesize_patch(generator, scene, box, rng)
        scene = composite(scene, patch, offset, box, full_patch=full_patch)
    return scene

