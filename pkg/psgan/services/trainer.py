"""Alternating D_b -> D_p -> G optimization over patch pairs"""

import csv
import logging
import os
from dataclasses import asdict, dataclass, fields
from typing import List

import torch
from tqdm import tqdm

from psgan.config import env_flag
from psgan.errors import EmptyDataset, NanDetected, ShapeError
from psgan.services.checkpoint import save_checkpoint
from psgan.services.losses import (
    discriminator_loss,
    generator_adversarial_loss,
    l1_loss,
    total_g_loss,
)
from psgan.services.scene_data import crop_region
from psgan.services.train_state import TrainState, init_train_state

logger = logging.getLogger(__name__)


@dataclass
class StepMetrics:
    db_loss: float
    dp_loss: float
    g_adv_db: float
    g_adv_dp: float
    g_l1: float
    g_total: float

    def as_dict(self):
        return asdict(self)


METRIC_NAMES = [f.name for f in fields(StepMetrics)]
CSV_COLUMNS = ['epoch', 'step'] + METRIC_NAMES


@dataclass
class TrainResult:
    state: TrainState
    history: List[dict]


def _set_requires_grad(module, flag):
    for p in module.parameters():
        p.requires_grad_(flag)


def _finite(value, component):
    if not torch.isfinite(value).all():
        raise NanDetected(component)
    return value


def _check_parameters(module, component):
    for p in module.parameters():
        if not torch.isfinite(p).all():
            raise NanDetected(f'{component} parameters')


def _pedestrian_crops(images, pairs):
    crops = []
    for image, pair in zip(images, pairs):
        crop = crop_region(image, pair.z_box)
        if crop.shape[-2:] != (pair.z_box.h, pair.z_box.w):
            raise ShapeError(f'pedestrian crop {tuple(crop.shape)} does not match {pair.z_box!r}')
        crops.append(crop.unsqueeze(0))
    return crops


def _dp_mean(values):
    return torch.stack(values).mean()


def train_step(state, pairs):
    """One update each of D_b, D_p and G on a batch of pairs (a single PatchPair is accepted)"""
    if not isinstance(pairs, (list, tuple)):
        pairs = [pairs]
    cfg = state.cfg
    kinds = cfg.weights
    G, Db, Dp = state.generator, state.db, state.dp
    G.train()
    Db.train()
    Dp.train()

    x = torch.stack([p.x_noisy for p in pairs])
    y = torch.stack([p.y_truth for p in pairs])
    fake = G(x)

    # (a) background discriminator on (x, y) vs (x, G(x))
    _set_requires_grad(Db, True)
    state.opt_db.zero_grad()
    db_loss = discriminator_loss(
        kinds.db_kind,
        Db(torch.cat([x, y], dim=1)),
        Db(torch.cat([x, fake.detach()], dim=1)),
    )
    _finite(db_loss, 'db_loss').backward()
    state.opt_db.step()
    _check_parameters(Db, 'db')

    # (b) pedestrian discriminator on crops at z
    if cfg.dp_enabled:
        _set_requires_grad(Dp, True)
        state.opt_dp.zero_grad()
        real_crops = _pedestrian_crops(y, pairs)
        fake_crops = _pedestrian_crops(fake.detach(), pairs)
        dp_loss = _dp_mean([
            discriminator_loss(kinds.dp_kind, Dp.logits(real), Dp.logits(fake_crop))
            for real, fake_crop in zip(real_crops, fake_crops)
        ])
        _finite(dp_loss, 'dp_loss').backward()
        state.opt_dp.step()
        _check_parameters(Dp, 'dp')
    else:
        dp_loss = torch.zeros(())

    # (c) generator against freshly recomputed scores
    _set_requires_grad(Db, False)
    _set_requires_grad(Dp, False)
    state.opt_g.zero_grad()
    g_adv_db = generator_adversarial_loss(kinds.db_kind, Db(torch.cat([x, fake], dim=1)))
    if cfg.dp_enabled:
        g_adv_dp = _dp_mean([
            generator_adversarial_loss(kinds.dp_kind, Dp.logits(crop))
            for crop in _pedestrian_crops(fake, pairs)
        ])
    else:
        g_adv_dp = torch.zeros(())
    g_l1 = l1_loss(fake, y)
    g_total = total_g_loss(g_adv_db, g_adv_dp, g_l1, kinds)
    for name, value in (('g_adv_db', g_adv_db), ('g_adv_dp', g_adv_dp), ('g_l1', g_l1), ('g_total', g_total)):
        _finite(value, name)
    g_total.backward()
    state.opt_g.step()
    _check_parameters(G, 'generator')
    _set_requires_grad(Db, True)
    _set_requires_grad(Dp, True)

    state.step += 1
    metrics = StepMetrics(
        db_loss=db_loss.item(),
        dp_loss=dp_loss.item(),
        g_adv_db=g_adv_db.item(),
        g_adv_dp=g_adv_dp.item(),
        g_l1=g_l1.item(),
        g_total=g_total.item(),
    )
    logger.debug('step %d: %s', state.step, metrics)
    return state, metrics


def metrics_path_for(checkpoint_path):
    stem, _ = os.path.splitext(checkpoint_path)
    return f'{stem}.metrics.csv'


def periodic_path_for(checkpoint_path, epoch):
    stem, ext = os.path.splitext(checkpoint_path)
    return f'{stem}.epoch{epoch:04d}{ext or ".psgn"}'


def _open_metrics(path, resume):
    append = resume and os.path.exists(path)
    handle = open(path, 'a' if append else 'w', newline='', encoding='utf-8')
    writer = csv.writer(handle, lineterminator='\n')
    if not append:
        writer.writerow(CSV_COLUMNS)
    return handle, writer


def train(cfg, pairs, out_path=None, state=None):
    """Run cfg.epochs epochs (continuing from state.epoch when resuming).

    Each epoch shuffles the pairs with the state's seeded generator. With
    out_path set, a checkpoint is written every cfg.checkpoint_every epochs
    next to it, the final one at out_path, and per-step metrics to
    <out stem>.metrics.csv.
    """
    if not pairs:
        raise EmptyDataset('no patch pairs to train on')
    cfg.validate()
    if any(p.P != cfg.patch_size for p in pairs):
        raise ShapeError(f'all pairs must have patch size {cfg.patch_size}')

    resume = state is not None
    state = state or init_train_state(cfg)
    state.cfg = cfg
    history = []

    handle = writer = None
    if out_path:
        os.makedirs(os.path.dirname(os.path.abspath(out_path)), exist_ok=True)
        handle, writer = _open_metrics(metrics_path_for(out_path), resume)

    try:
        epochs = range(state.epoch, cfg.epochs)
        for epoch in tqdm(epochs, desc='epochs', disable=not env_flag('PSGAN_PROGRESS', True)):
            order = torch.randperm(len(pairs), generator=state.rng).tolist()
            totals = dict.fromkeys(METRIC_NAMES, 0.0)
            batches = 0
            for start in range(0, len(order), cfg.batch_size):
                batch = [pairs[i] for i in order[start:start + cfg.batch_size]]
                _, metrics = train_step(state, batch)
                row = dict(epoch=epoch + 1, step=state.step, **metrics.as_dict())
                history.append(row)
                if writer:
                    writer.writerow([row[c] if c in ('epoch', 'step') else repr(row[c]) for c in CSV_COLUMNS])
                for name in METRIC_NAMES:
                    totals[name] += row[name]
                batches += 1

            state.epoch = epoch + 1
            logger.info('epoch %d/%d: %s', state.epoch, cfg.epochs,
                        ', '.join(f'{k}={v / batches:.4f}' for k, v in totals.items()))

            if out_path and state.epoch % cfg.checkpoint_every == 0 and state.epoch < cfg.epochs:
                save_checkpoint(state, periodic_path_for(out_path, state.epoch))
    finally:
        if handle:
            handle.close()

    if out_path:
        save_checkpoint(state, out_path)
    return TrainResult(state=state, history=history)
