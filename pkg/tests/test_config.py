import pytest

from psgan.config import DbConfig, DpConfig, GeneratorConfig, LossKind, LossWeights, ProposalConfig, TrainConfig
from psgan.errors import ConfigError
from psgan.models.schemas import TrainConfigSchema
from psgan.utils.validators import find_missing_fields, find_unknown_fields, is_power_of_two


def test_defaults_validate():
    cfg = TrainConfig().validate()
    assert cfg.patch_size == 256
    assert (cfg.lr_g, cfg.beta1, cfg.beta2) == (2e-4, 0.5, 0.999)
    assert cfg.weights.lambda_l1 == 100.0
    assert cfg.weights.db_kind is LossKind.LEAST_SQUARES
    assert cfg.weights.dp_kind is LossKind.LOG_LIKELIHOOD


def test_toy_patch_size_uses_six_levels():
    cfg = TrainConfig(generator=GeneratorConfig(patch_size=64, levels=6)).validate()
    assert cfg.patch_size == 64
    with pytest.raises(ConfigError):
        TrainConfig(generator=GeneratorConfig(patch_size=64, levels=5)).validate()


@pytest.mark.parametrize('change', [
    {'epochs': 0},
    {'batch_size': 0},
    {'beta1': 1.0},
    {'lr_g': -1.0},
])
def test_invalid_training_settings(change):
    cfg = TrainConfig()
    for key, value in change.items():
        setattr(cfg, key, value)
    with pytest.raises(ConfigError):
        cfg.validate()


def test_negative_lambda_rejected():
    with pytest.raises(ConfigError):
        LossWeights(lambda_l1=-1).validate()


def test_db_strides_end_with_one():
    assert DbConfig().strides == [2, 2, 2, 1]


def test_dp_minimum_crop():
    assert DpConfig().min_crop_size == 16
    with pytest.raises(ConfigError):
        DpConfig(fixed_size=(8, 8)).validate()


def test_proposal_ranges_validated():
    with pytest.raises(ConfigError):
        ProposalConfig(h_min=100, h_max=80).validate()
    with pytest.raises(ConfigError):
        ProposalConfig(aspect_range=(0.0, 0.5)).validate()


def test_schema_round_trip():
    cfg = TrainConfig(seed=4, dp_enabled=False)
    cfg.dp.spp_enabled = False
    cfg.weights.dp_kind = LossKind.LEAST_SQUARES
    cfg.validate()
    loaded = TrainConfigSchema().load(cfg.to_dict())
    assert loaded.to_dict() == cfg.to_dict()


def test_validators():
    assert is_power_of_two(64) and not is_power_of_two(48) and not is_power_of_two(0)
    assert find_missing_fields({'a': 1, 'b': '  ', 'c': None}, ['a', 'b', 'c', 'd']) == ['b', 'c', 'd']
    assert find_unknown_fields({'a': 1, 'z': 2, 'y': 3}, {'a'}) == ['y', 'z']
