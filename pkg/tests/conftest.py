import numpy as np
import pytest
import torch

from psgan.config import DbConfig, DpConfig, GeneratorConfig, ToyConfig, TrainConfig
from psgan.models.scene import BBox, PatchPair, Scene
from psgan.services.scene_data import crop_patch, mask_with_noise
from psgan.services.toyscapes import gen_toy_scene
from psgan.services.train_state import init_train_state
from psgan.services.trainer import train_step
from psgan.utils.seeding import make_generator


@pytest.fixture(autouse=True)
def quiet_progress(monkeypatch):
    monkeypatch.setenv('PSGAN_PROGRESS', '0')


def random_image(height, width, seed=0):
    rng = make_generator(seed)
    return torch.rand((3, height, width), generator=rng) * 2 - 1


def make_pair(P=32, box=None, seed=0):
    """Random-content patch pair with the noise box at z"""
    box = box or BBox(10, 6, 10, 20)
    y = random_image(P, P, seed)
    return PatchPair(x_noisy=mask_with_noise(y, box, make_generator(seed + 1)), y_truth=y, z_box=box)


def toy_scene(seed=0):
    """Small toy scene with one pedestrian"""
    cfg = ToyConfig(width=48, height=40, n_peds=1, ped_h_range=(20, 26))
    return gen_toy_scene(np.random.default_rng(seed), cfg, source_id='toy.png')


def toy_pair(seed=0, P=32):
    """One pair cut from toy_scene(seed), masked with make_generator(seed)"""
    scene = toy_scene(seed)
    box = scene.boxes[0]
    geometry = crop_patch(scene, box, P)
    return PatchPair(
        x_noisy=mask_with_noise(geometry.patch, geometry.box, make_generator(seed)),
        y_truth=geometry.patch,
        z_box=geometry.box,
        offset=geometry.offset,
        source_id=scene.source_id,
    )


def tiny_train_config(**overrides):
    """P=32 run with narrow networks; D_p keeps three conv layers so 4px crops pass"""
    cfg = TrainConfig(
        epochs=1,
        generator=GeneratorConfig(patch_size=32, levels=5, base_channels=4),
        db=DbConfig(layer_channels=(4, 8)),
        dp=DpConfig(layer_channels=(4, 8, 8), fixed_size=(16, 8)),
    )
    for key, value in overrides.items():
        setattr(cfg, key, value)
    return cfg.validate()


@pytest.fixture
def tiny_cfg():
    return tiny_train_config()


@pytest.fixture
def pair():
    return make_pair()


@pytest.fixture
def scene():
    boxes = [BBox(5, 8, 12, 30)]
    return Scene(image=random_image(48, 64, seed=7), boxes=boxes, source_id='scene.png')


@pytest.fixture(scope='session')
def overfit_toy():
    """tiny networks fitted to toy_pair() for 200 steps; returns (pair, state, g_l1 history)"""
    pair = toy_pair()
    # tiny-config setting: lr_g raised to 2e-3 (10x the default) so 200 steps fit one pair
    cfg = tiny_train_config(lr_g=2e-3, lr_db=2e-4, lr_dp=2e-4)
    cfg.generator.base_channels = 16
    state = init_train_state(cfg.validate())
    history = [train_step(state, pair)[1].g_l1 for _ in range(200)]
    return pair, state, history
