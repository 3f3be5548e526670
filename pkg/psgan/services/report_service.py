"""Quantitative generator reports on held-out patch pairs"""

from dataclasses import asdict, dataclass

import torch

from psgan.errors import EmptyDataset
from psgan.models.generator import build_generator
from psgan.services.scene_data import crop_region
from psgan.utils.seeding import make_generator


@dataclass
class EvalReport:
    outside_l1: float
    inside_l1: float
    dp_fool_rate: float

    def to_dict(self):
        return asdict(self)


def _box_mask(pair):
    mask = torch.zeros(pair.y_truth.shape[-2:], dtype=torch.bool)
    z = pair.z_box
    mask[z.y:z.bottom, z.x:z.right] = True
    return mask


def eval_generator(generator, pairs, dp):
    """Background fidelity (outside_l1), reconstruction inside z (inside_l1) and the share
    of generated crops a frozen D_p scores above 0.5 (dp_fool_rate)"""
    if not pairs:
        raise EmptyDataset('no patch pairs to evaluate')
    for module in (generator, dp):
        if hasattr(module, 'eval'):
            module.eval()

    outside, inside, fooled = [], [], 0
    with torch.no_grad():
        for pair in pairs:
            output = generator(pair.x_noisy.unsqueeze(0)).squeeze(0)
            diff = (output - pair.y_truth).abs()
            mask = _box_mask(pair)
            inside.append(diff[:, mask].mean().item())
            outside.append(diff[:, ~mask].mean().item() if bool((~mask).any()) else 0.0)
            crop = crop_region(output, pair.z_box).unsqueeze(0)
            fooled += int(dp(crop).item() > 0.5)

    return EvalReport(
        outside_l1=sum(outside) / len(outside),
        inside_l1=sum(inside) / len(inside),
        dp_fool_rate=fooled / len(pairs),
    )


class ReportService:
    """Service for generating evaluation reports"""

    @staticmethod
    def get_generator_report(state, pairs, seed=0):
        """Evaluate a trained state next to an untrained generator built from seed"""
        trained = eval_generator(state.generator, pairs, state.dp)
        baseline = eval_generator(build_generator(state.cfg.generator, make_generator(seed)), pairs, state.dp)

        improvement = 0.0
        if baseline.inside_l1 > 0:
            improvement = 1.0 - trained.inside_l1 / baseline.inside_l1

        return {
            'epoch': state.epoch,
            'pairs': len(pairs),
            **trained.to_dict(),
            'baseline_outside_l1': baseline.outside_l1,
            'baseline_inside_l1': baseline.inside_l1,
            'inside_l1_reduction': improvement,
        }
