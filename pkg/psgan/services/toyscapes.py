"""Procedural street scenes with stick-figure pedestrians"""

import logging
import math
import os

import numpy as np
from PIL import Image, ImageDraw
from tqdm import tqdm

from psgan.config import env_flag
from psgan.models.scene import BBox, BoxLabel, Scene
from psgan.services.synthesis import export_annotations
from psgan.utils.images import save_png, to_tensor

logger = logging.getLogger(__name__)

ANNOTATIONS = 'annotations.json'


def _background(rng, height, width):
    """Sky and road bands split at a random horizon, textured, with a few lamp posts"""
    horizon = int(rng.integers(int(height * 0.35), int(height * 0.55) + 1))

    sky_top = rng.integers(110, 190, size=3)
    sky_bottom = np.clip(sky_top + rng.integers(20, 60, size=3), 0, 255)
    t = np.linspace(0.0, 1.0, horizon)[:, None, None]
    sky = sky_top[None, None, :] * (1 - t) + sky_bottom[None, None, :] * t
    sky = np.broadcast_to(sky, (horizon, width, 3))

    grey = rng.integers(60, 110)
    road_color = np.clip(grey + rng.integers(-8, 9, size=3), 0, 255)
    road = np.broadcast_to(road_color[None, None, :], (height - horizon, width, 3))

    canvas = np.concatenate([sky, road], axis=0).astype(np.float64)
    canvas += rng.normal(0.0, 6.0, size=canvas.shape)

    for _ in range(int(rng.integers(0, 4))):
        post_w = int(rng.integers(2, 5))
        x0 = int(rng.integers(0, width - post_w))
        top = int(rng.integers(0, max(horizon // 2, 1)))
        bottom = min(height, horizon + int(rng.integers(0, (height - horizon) // 3 + 1)))
        canvas[top:bottom, x0:x0 + post_w, :] = rng.integers(20, 50)

    return np.clip(np.round(canvas), 0, 255).astype(np.uint8), horizon


def _figure_color(rng):
    color = [int(rng.integers(170, 256)), int(rng.integers(0, 70)), int(rng.integers(0, 256))]
    rng.shuffle(color)
    return tuple(color)


def _draw_stick_figure(targets, rng, height, foot_x, foot_y):
    """Draw head, torso, arms and legs with random limb angles on every (draw, fill) target"""
    line = max(2, height // 12)
    radius = max(2, int(height * 0.1))
    top = foot_y - height + 1

    neck_y = top + 2 * radius
    hip_y = top + int(height * 0.55)
    shoulder_y = neck_y + int(height * 0.08)
    arm = height * 0.35
    leg = foot_y - hip_y

    arm_angles = [math.radians(rng.uniform(40, 75)) for _ in range(2)]
    leg_angles = [math.radians(rng.uniform(8, 25)) for _ in range(2)]

    segments = [
        ((foot_x, neck_y), (foot_x, hip_y)),
        ((foot_x, shoulder_y), (foot_x - math.sin(arm_angles[0]) * arm, shoulder_y + math.cos(arm_angles[0]) * arm)),
        ((foot_x, shoulder_y), (foot_x + math.sin(arm_angles[1]) * arm, shoulder_y + math.cos(arm_angles[1]) * arm)),
        ((foot_x, hip_y), (foot_x - math.tan(leg_angles[0]) * leg, foot_y)),
        ((foot_x, hip_y), (foot_x + math.tan(leg_angles[1]) * leg, foot_y)),
    ]
    for draw, fill in targets:
        draw.ellipse([foot_x - radius, top, foot_x + radius, top + 2 * radius], fill=fill)
        for start, end in segments:
            draw.line([start, end], fill=fill, width=line)


def gen_toy_scene(rng, cfg, source_id=''):
    """Render one toy scene; returned boxes tightly bound each figure's rendered pixels.

    The background is drawn before any figure, so a scene with n_peds=0 under
    the same seed is exactly the background of the populated scene.
    """
    cfg.validate()
    pixels, horizon = _background(rng, cfg.height, cfg.width)
    image = Image.fromarray(pixels, mode='RGB')
    draw = ImageDraw.Draw(image)

    boxes = []
    low, high = cfg.ped_h_range
    for _ in range(cfg.n_peds):
        height = int(rng.integers(low, high + 1))
        line = max(2, height // 12)
        margin = int(height * 0.4) + line
        foot_hi = cfg.height - 1 - line
        foot_lo = min(max(horizon + 2, height + line), foot_hi)
        foot_y = int(rng.integers(foot_lo, foot_hi + 1))
        foot_x = int(rng.integers(margin, max(margin, cfg.width - 1 - margin) + 1))

        mask = Image.new('L', (cfg.width, cfg.height), 0)
        _draw_stick_figure([(draw, _figure_color(rng)), (ImageDraw.Draw(mask), 255)], rng, height, foot_x, foot_y)
        left, upper, right, lower = mask.getbbox()
        boxes.append(BBox(left, upper, right - left, lower - upper, BoxLabel.REAL))

    return Scene(image=to_tensor(np.array(image)), boxes=boxes, source_id=source_id)


def write_toy_dataset(out_dir, n_scenes, seed, cfg):
    """Render n_scenes scenes (one seed substream each) as PNGs plus annotations.json"""
    cfg.validate()
    os.makedirs(out_dir, exist_ok=True)
    streams = np.random.SeedSequence(seed).spawn(n_scenes)

    scenes = []
    for index, stream in enumerate(tqdm(streams, desc='toygen', disable=not env_flag('PSGAN_PROGRESS', True))):
        name = f'scene_{index:04d}.png'
        scene = gen_toy_scene(np.random.default_rng(stream), cfg, source_id=name)
        save_png(scene.image, os.path.join(out_dir, name))
        scenes.append(scene)

    path = os.path.join(out_dir, ANNOTATIONS)
    export_annotations(scenes, path)
    logger.info('wrote %d toy scenes to %s', n_scenes, out_dir)
    return path
