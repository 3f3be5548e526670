"""Convert Tsinghua-Daimler Cyclist Benchmark labels into the annotation document format"""

import glob
import json
import logging
import os

from PIL import Image

from psgan.errors import AnnotationError, EmptyDataset
from psgan.services.cityscapes import polygon_to_box
from psgan.services.scene_data import list_images, write_annotation_document

logger = logging.getLogger(__name__)

IMAGE_TAG = '_leftImg8bit'
DEFAULT_IDENTITIES = ('pedestrian', 'cyclist')


def _label_index(label_dir):
    """Map label file stems to paths"""
    if not label_dir:
        return {}
    paths = glob.glob(os.path.join(label_dir, '**', '*.json'), recursive=True)
    return {os.path.splitext(os.path.basename(p))[0]: p for p in sorted(paths)}


def _read_objects(path):
    try:
        with open(path, 'r', encoding='utf-8') as f:
            raw = json.load(f)
        return raw.get('children', [])
    except (json.JSONDecodeError, AttributeError) as e:
        raise AnnotationError(f'{path} is not a Tsinghua-Daimler label file: {e}') from e


def extent_to_box(obj, height, width):
    """Box from a labelled object's mincol/minrow/maxcol/maxrow extent"""
    try:
        corners = [[obj['mincol'], obj['minrow']], [obj['maxcol'], obj['maxrow']]]
    except KeyError as e:
        raise AnnotationError(f'labelled object is missing {e}') from e
    return polygon_to_box(corners, height, width)


def convert_tsinghua_daimler(image_dir, out_path, label_dir=None, identities=DEFAULT_IDENTITIES):
    """Write one annotation document for every image under image_dir.

    Images whose stem (with or without the _leftImg8bit tag) has a label file
    under label_dir get a box per object with a kept identity; images without
    one become background scenes with no boxes. Returns (scenes, boxes,
    background scenes).
    """
    images = list_images(image_dir)
    if not images:
        raise EmptyDataset(f'no images found under {image_dir}')

    labels = _label_index(label_dir)
    out_root = os.path.dirname(os.path.abspath(out_path))
    entries = []
    total_boxes = backgrounds = 0

    for name in images:
        image_path = os.path.join(image_dir, name)
        stem = os.path.splitext(os.path.basename(name))[0]
        label_path = labels.get(stem) or labels.get(stem.replace(IMAGE_TAG, ''))

        boxes = []
        if label_path:
            with Image.open(image_path) as img:
                width, height = img.size
            for obj in _read_objects(label_path):
                if obj.get('identity') in identities:
                    box = extent_to_box(obj, height, width)
                    if box is not None:
                        boxes.append(box.to_dict())
        if not boxes:
            backgrounds += 1

        entries.append({'image': os.path.relpath(image_path, out_root), 'boxes': boxes})
        total_boxes += len(boxes)

    write_annotation_document(entries, out_path)
    logger.info('converted %d Tsinghua-Daimler scenes with %d boxes (%d backgrounds)',
                len(entries), total_boxes, backgrounds)
    return len(entries), total_boxes, backgrounds
