import pytest
import torch

from conftest import make_pair, tiny_train_config
from psgan.errors import EmptyDataset
from psgan.services.report_service import ReportService, eval_generator
from psgan.services.train_state import init_train_state


def constant_dp(prob):
    return lambda crop: torch.full((crop.shape[0],), prob)


def test_identity_generator_scores_zero(pair):
    report = eval_generator(lambda x: pair.y_truth.unsqueeze(0), [pair], constant_dp(0.9))
    assert report.outside_l1 == 0.0
    assert report.inside_l1 == 0.0
    assert report.dp_fool_rate == 1.0


def test_pass_through_generator_reports_noise_distance(pair):
    report = eval_generator(lambda x: x, [pair], constant_dp(0.1))
    z = pair.z_box
    expected = (pair.x_noisy - pair.y_truth)[:, z.y:z.bottom, z.x:z.right].abs().mean().item()

    assert report.outside_l1 == 0.0
    assert report.inside_l1 == pytest.approx(expected, rel=1e-6)
    assert report.inside_l1 > 0.3
    assert report.dp_fool_rate == 0.0


def test_rates_lie_in_unit_interval(tiny_cfg):
    state = init_train_state(tiny_cfg)
    pairs = [make_pair(seed=i) for i in range(4)]
    report = eval_generator(state.generator, pairs, state.dp)
    assert 0.0 <= report.dp_fool_rate <= 1.0
    assert report.outside_l1 >= 0 and report.inside_l1 >= 0


def test_empty_pairs_rejected():
    with pytest.raises(EmptyDataset):
        eval_generator(lambda x: x, [], constant_dp(0.5))


def test_untrained_state_matches_its_baseline(tiny_cfg):
    state = init_train_state(tiny_cfg)
    pairs = [make_pair(seed=i) for i in range(3)]
    report = ReportService.get_generator_report(state, pairs, seed=tiny_cfg.seed)

    assert report['pairs'] == 3
    assert report['epoch'] == 0
    assert {'outside_l1', 'inside_l1', 'dp_fool_rate'} <= set(report)
    assert report['inside_l1'] == pytest.approx(report['baseline_inside_l1'])
    assert report['inside_l1_reduction'] == pytest.approx(0.0, abs=1e-9)


def test_metrics_are_deterministic(tiny_cfg):
    pairs = [make_pair(seed=i) for i in range(2)]
    first = ReportService.get_generator_report(init_train_state(tiny_cfg), pairs)
    second = ReportService.get_generator_report(init_train_state(tiny_cfg), pairs)
    assert first == second
