"""Convert Cityscapes person polygons into the annotation document format"""

import glob
import json
import logging
import os

from psgan.errors import AnnotationError
from psgan.models.scene import BBox, BoxLabel
from psgan.services.scene_data import write_annotation_document

logger = logging.getLogger(__name__)

POLYGON_SUFFIX = '_gtFine_polygons.json'
IMAGE_SUFFIX = '_leftImg8bit.png'


def polygon_to_box(polygon, height, width):
    """Tight box around a polygon, clipped to the image; None if nothing is left"""
    xs = [int(round(p[0])) for p in polygon]
    ys = [int(round(p[1])) for p in polygon]
    left, right = max(min(xs), 0), min(max(xs), width - 1)
    top, bottom = max(min(ys), 0), min(max(ys), height - 1)
    if right < left or bottom < top:
        return None
    return BBox(left, top, right - left + 1, bottom - top + 1, BoxLabel.REAL)


def convert_cityscapes(gt_dir, image_dir, out_path, labels=('person',)):
    """Scan gt_dir for *_gtFine_polygons.json and write one annotation document.

    Image paths in the document are relative to the document's directory.
    Returns the number of scenes and boxes written.
    """
    out_root = os.path.dirname(os.path.abspath(out_path))
    entries = []
    total_boxes = 0

    for path in sorted(glob.glob(os.path.join(gt_dir, '**', f'*{POLYGON_SUFFIX}'), recursive=True)):
        stem = os.path.basename(path)[:-len(POLYGON_SUFFIX)]
        city = stem.split('_')[0]
        candidates = [
            os.path.join(image_dir, city, stem + IMAGE_SUFFIX),
            os.path.join(image_dir, stem + IMAGE_SUFFIX),
        ]
        image_path = next((c for c in candidates if os.path.exists(c)), None)
        if image_path is None:
            logger.warning('no image found for %s', path)
            continue

        try:
            with open(path, 'r', encoding='utf-8') as f:
                raw = json.load(f)
            height, width = raw['imgHeight'], raw['imgWidth']
            objects = raw.get('objects', [])
        except (json.JSONDecodeError, KeyError) as e:
            raise AnnotationError(f'{path} is not a Cityscapes polygon file: {e}') from e

        boxes = []
        for obj in objects:
            if obj.get('label') in labels and obj.get('polygon'):
                box = polygon_to_box(obj['polygon'], height, width)
                if box is not None:
                    boxes.append(box.to_dict())

        entries.append({'image': os.path.relpath(image_path, out_root), 'boxes': boxes})
        total_boxes += len(boxes)

    write_annotation_document(entries, out_path)
    logger.info('converted %d Cityscapes scenes with %d boxes', len(entries), total_boxes)
    return len(entries), total_boxes
