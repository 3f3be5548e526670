"""Dataset preparation: box filtering, patch cropping, noise masking and pair assembly"""

import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor

import torch
from marshmallow import ValidationError
from tqdm import tqdm

from psgan.config import env_flag
from psgan.errors import AnnotationError, BoxTooLarge, DataError, EmptyDataset, OutOfBounds, SceneTooSmall
from psgan.models.scene import PatchGeometry, PatchPair, Scene
from psgan.models.schemas import AnnotationDocumentSchema, PairManifestSchema
from psgan.utils.images import load_png, save_png
from psgan.utils.seeding import make_generator, spawn_seeds

logger = logging.getLogger(__name__)

PAIRS_MANIFEST = 'pairs.json'
IMAGE_EXTENSIONS = ('.png', '.jpg', '.jpeg')


def filter_boxes(boxes, min_h=70, min_w=25):
    """Keep boxes with h >= min_h and w >= min_w, preserving order"""
    return [box for box in boxes if box.h >= min_h and box.w >= min_w]


def crop_patch(scene, box, P=256):
    """Cut a PxP patch centred on box, translated the minimum amount to stay inside the scene"""
    if box.h > P or box.w > P:
        raise BoxTooLarge(f'{box!r} does not fit a {P}x{P} patch')
    if scene.height < P or scene.width < P:
        raise SceneTooSmall(f'scene {scene.source_id!r} of size {scene.height}x{scene.width} is smaller than {P}')
    if not box.fits(scene.height, scene.width):
        raise OutOfBounds(f'{box!r} leaves scene {scene.source_id!r}')

    top = box.y + box.h // 2 - P // 2
    left = box.x + box.w // 2 - P // 2
    top = min(max(top, 0), scene.height - P)
    left = min(max(left, 0), scene.width - P)

    patch = scene.image[:, top:top + P, left:left + P].clone()
    return PatchGeometry(patch=patch, box=box.translate(-left, -top), offset=(top, left))


def mask_with_noise(patch, box, rng):
    """Replace the box interior with i.i.d. uniform noise in [-1, 1]; everything else is copied"""
    if not box.fits(patch.shape[-2], patch.shape[-1]):
        raise OutOfBounds(f'{box!r} leaves the {patch.shape[-2]}x{patch.shape[-1]} patch')
    noisy = patch.clone()
    noise = torch.rand((patch.shape[0], box.h, box.w), generator=rng, dtype=torch.float32)
    noisy[:, box.y:box.bottom, box.x:box.right] = (noise * 2 - 1).to(patch.dtype)
    return noisy


def crop_region(image, box):
    """Exact copy of the box region of a ...xHxW tensor, no resizing"""
    if not box.fits(image.shape[-2], image.shape[-1]):
        raise OutOfBounds(f'{box!r} leaves the {image.shape[-2]}x{image.shape[-1]} image')
    return image[..., box.y:box.bottom, box.x:box.right].clone()


def _scene_pairs(scene, P, seed, include, min_h, min_w):
    rng = make_generator(seed)
    pairs = []
    for index, box in enumerate(scene.boxes):
        if include is not None and (scene.source_id, index) not in include:
            continue
        if not filter_boxes([box], min_h, min_w):
            continue
        try:
            geometry = crop_patch(scene, box, P)
        except DataError as e:
            logger.warning('skipping box %d of %s: %s', index, scene.source_id, e)
            continue
        pairs.append(PatchPair(
            x_noisy=mask_with_noise(geometry.patch, geometry.box, rng),
            y_truth=geometry.patch,
            z_box=geometry.box,
            offset=geometry.offset,
            source_id=scene.source_id,
        ))
    return pairs


def assemble_dataset(scenes, P, rng, workers=1, include=None, min_h=1, min_w=1):
    """One PatchPair per box: crop_patch then mask_with_noise.

    Each scene masks with its own generator seeded from rng up front, so the
    result does not depend on the worker count. `include` optionally restricts
    the boxes to a set of (source_id, box index) entries, where the index counts
    every box of the scene; boxes below min_h x min_w are dropped after that
    lookup.
    """
    seeds = spawn_seeds(rng, len(scenes))
    jobs = list(zip(scenes, seeds))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(lambda job: _scene_pairs(job[0], P, job[1], include, min_h, min_w), jobs))
    else:
        progress = tqdm(jobs, desc='prep', disable=not env_flag('PSGAN_PROGRESS', True))
        chunks = [_scene_pairs(scene, P, seed, include, min_h, min_w) for scene, seed in progress]

    pairs = [pair for chunk in chunks for pair in chunk]
    logger.info('assembled %d patch pairs from %d scenes', len(pairs), len(scenes))
    return pairs


def split_scenes(scenes, test_fraction, rng):
    """Seeded scene-level train/test split"""
    if not 0 <= test_fraction < 1:
        raise DataError(f'test fraction must lie in [0, 1), got {test_fraction}')
    order = torch.randperm(len(scenes), generator=rng).tolist()
    n_test = int(round(len(scenes) * test_fraction))
    test_ids = set(order[:n_test])
    train = [scene for i, scene in enumerate(scenes) if i not in test_ids]
    test = [scene for i, scene in enumerate(scenes) if i in test_ids]
    return train, test


def read_include_list(path):
    """Parse '<image>#<box index>' lines into a set of (image, index) entries"""
    include = set()
    with open(path, 'r', encoding='utf-8') as f:
        for number, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith('//'):
                continue
            image, sep, index = line.rpartition('#')
            if not sep or not index.isdigit():
                raise AnnotationError(f'{path}:{number}: expected <image>#<box index>, got {line!r}')
            include.add((image, int(index)))
    return include


def read_annotation_document(path):
    """Validate an annotation JSON document and return its scene entries"""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            raw = json.load(f)
        return AnnotationDocumentSchema().load(raw)['scenes']
    except json.JSONDecodeError as e:
        raise AnnotationError(f'{path} is not valid JSON: {e}') from e
    except ValidationError as e:
        raise AnnotationError(f'{path} does not match the annotation schema: {e.messages}') from e


def load_annotations(path, min_h=None, min_w=None):
    """Load scenes (images + boxes) listed in an annotation document.

    Image paths are relative to the document's directory. When min_h/min_w are
    given the boxes are filtered on load.
    """
    root = os.path.dirname(os.path.abspath(path))
    scenes = []
    for entry in read_annotation_document(path):
        boxes = entry['boxes']
        if min_h is not None or min_w is not None:
            boxes = filter_boxes(boxes, min_h or 1, min_w or 1)
        image = load_png(os.path.join(root, entry['image']))
        scenes.append(Scene(image=image, boxes=boxes, source_id=entry['image']))
    return scenes


def write_annotation_document(entries, path):
    """Validate {'scenes': entries} against the annotation schema and write it to path"""
    document = {'scenes': entries}
    errors = AnnotationDocumentSchema().validate(document)
    if errors:
        raise AnnotationError(f'refusing to write an invalid annotation document: {errors}')
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(document, f, indent=2)
    return document


def list_images(directory):
    """Image files below directory as sorted '/'-separated relative paths"""
    found = []
    for root, _, files in os.walk(directory):
        for name in files:
            if name.lower().endswith(IMAGE_EXTENSIONS):
                relative = os.path.relpath(os.path.join(root, name), directory)
                found.append(relative.replace(os.sep, '/'))
    return sorted(found)


def load_image_directory(directory):
    """Every image below directory as a scene without boxes (pedestrian-free backgrounds)"""
    names = list_images(directory)
    if not names:
        raise EmptyDataset(f'no images found under {directory}')
    logger.info('loaded %d background scenes from %s', len(names), directory)
    return [Scene(image=load_png(os.path.join(directory, name)), boxes=[], source_id=name) for name in names]


def save_pairs(pairs, directory):
    """Write pairs as x/NNNNN.png, y/NNNNN.png and a pairs.json manifest"""
    os.makedirs(directory, exist_ok=True)
    entries = []
    for index, pair in enumerate(pairs):
        name = f'{index:05d}.png'
        save_png(pair.x_noisy, os.path.join(directory, 'x', name))
        save_png(pair.y_truth, os.path.join(directory, 'y', name))
        entries.append(dict(pair.to_dict(), index=index))

    with open(os.path.join(directory, PAIRS_MANIFEST), 'w', encoding='utf-8') as f:
        json.dump({'pairs': entries}, f, indent=2, sort_keys=True)
    return len(entries)


def load_pairs(directory):
    """Read pairs written by save_pairs"""
    manifest = os.path.join(directory, PAIRS_MANIFEST)
    try:
        with open(manifest, 'r', encoding='utf-8') as f:
            entries = PairManifestSchema().load(json.load(f))['pairs']
    except json.JSONDecodeError as e:
        raise AnnotationError(f'{manifest} is not valid JSON: {e}') from e
    except ValidationError as e:
        raise AnnotationError(f'{manifest} does not match the pair manifest schema: {e.messages}') from e

    pairs = []
    for entry in entries:
        name = f"{entry['index']:05d}.png"
        pair = PatchPair(
            x_noisy=load_png(os.path.join(directory, 'x', name)),
            y_truth=load_png(os.path.join(directory, 'y', name)),
            z_box=entry['z_box'],
            offset=tuple(entry['offset']),
            source_id=entry['source_id'],
        )
        if pair.P != entry['patch_size'] or not pair.z_box.fits(pair.P, pair.P):
            raise AnnotationError(f'pair {entry["index"]} in {directory} is inconsistent with its manifest')
        pairs.append(pair)
    return pairs
