"""Networks, optimizers and counters that make up a training run"""

from dataclasses import dataclass

import torch

from psgan.models.disc_background import build_db
from psgan.models.disc_pedestrian import build_dp
from psgan.models.generator import build_generator
from psgan.utils.seeding import make_generator, set_deterministic


@dataclass
class TrainState:
    cfg: object
    generator: torch.nn.Module
    db: torch.nn.Module
    dp: torch.nn.Module
    opt_g: torch.optim.Optimizer
    opt_db: torch.optim.Optimizer
    opt_dp: torch.optim.Optimizer
    rng: torch.Generator
    epoch: int = 0
    step: int = 0

    def networks(self):
        return {'generator': self.generator, 'db': self.db, 'dp': self.dp}

    def optimizers(self):
        return {'generator': self.opt_g, 'db': self.opt_db, 'dp': self.opt_dp}

    def __repr__(self):
        return f'<TrainState epoch={self.epoch} step={self.step}>'


def _adam(module, lr, cfg):
    return torch.optim.Adam(module.parameters(), lr=lr, betas=(cfg.beta1, cfg.beta2))


def init_train_state(cfg):
    """Build all three networks and their optimizers from one seeded generator"""
    cfg.validate()
    set_deterministic(cfg.seed)
    rng = make_generator(cfg.seed)

    generator = build_generator(cfg.generator, rng)
    db = build_db(cfg.db, rng)
    dp = build_dp(cfg.dp, rng)

    return TrainState(
        cfg=cfg,
        generator=generator,
        db=db,
        dp=dp,
        opt_g=_adam(generator, cfg.lr_g, cfg),
        opt_db=_adam(db, cfg.lr_db, cfg),
        opt_dp=_adam(dp, cfg.lr_dp, cfg),
        rng=rng,
    )
