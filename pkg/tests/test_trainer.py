import csv

import pytest
import torch

from conftest import make_pair, tiny_train_config
from psgan.errors import EmptyDataset, NanDetected, ShapeError
from psgan.services.checkpoint import encode_checkpoint
from psgan.services.train_state import init_train_state
from psgan.services.trainer import (
    CSV_COLUMNS,
    METRIC_NAMES,
    metrics_path_for,
    periodic_path_for,
    train,
    train_step,
)


def snapshot(module):
    return [p.detach().clone() for p in module.parameters()]


def unchanged(module, before):
    return all(torch.equal(p, q) for p, q in zip(module.parameters(), before))


def test_metrics_contract(tiny_cfg, pair):
    state = init_train_state(tiny_cfg)
    state, metrics = train_step(state, pair)
    assert set(metrics.as_dict()) == {'db_loss', 'dp_loss', 'g_adv_db', 'g_adv_dp', 'g_l1', 'g_total'}
    assert state.step == 1
    assert CSV_COLUMNS == ['epoch', 'step'] + METRIC_NAMES


def test_zero_learning_rates_leave_parameters_bit_exact(pair):
    cfg = tiny_train_config(lr_g=0.0, lr_db=0.0, lr_dp=0.0)
    state = init_train_state(cfg)
    before = {name: snapshot(net) for name, net in state.networks().items()}
    for _ in range(3):
        train_step(state, pair)
    for name, net in state.networks().items():
        assert unchanged(net, before[name]), name


def test_discriminator_updates_leave_generator_alone(pair):
    state = init_train_state(tiny_train_config(lr_g=0.0))
    g_before, db_before, dp_before = snapshot(state.generator), snapshot(state.db), snapshot(state.dp)
    train_step(state, pair)
    assert unchanged(state.generator, g_before)
    assert not unchanged(state.db, db_before)
    assert not unchanged(state.dp, dp_before)


def test_generator_update_leaves_discriminators_alone(pair):
    state = init_train_state(tiny_train_config(lr_db=0.0, lr_dp=0.0))
    g_before, db_before, dp_before = snapshot(state.generator), snapshot(state.db), snapshot(state.dp)
    train_step(state, pair)
    assert not unchanged(state.generator, g_before)
    assert unchanged(state.db, db_before)
    assert unchanged(state.dp, dp_before)


def test_baseline_without_pedestrian_discriminator(pair):
    state = init_train_state(tiny_train_config(dp_enabled=False))
    dp_before = snapshot(state.dp)
    _, metrics = train_step(state, pair)
    assert metrics.dp_loss == 0.0
    assert metrics.g_adv_dp == 0.0
    assert unchanged(state.dp, dp_before)


def test_epochs_times_pairs_steps(tiny_cfg):
    tiny_cfg.epochs = 2
    pairs = [make_pair(seed=i) for i in range(3)]
    result = train(tiny_cfg, pairs)
    assert len(result.history) == 6
    assert [row['step'] for row in result.history] == list(range(1, 7))
    assert [row['epoch'] for row in result.history] == [1, 1, 1, 2, 2, 2]
    assert result.state.epoch == 2


def test_batches_cover_every_pair(tiny_cfg):
    tiny_cfg.batch_size = 2
    result = train(tiny_cfg, [make_pair(seed=i) for i in range(3)])
    assert len(result.history) == 2


def test_same_seed_gives_identical_checkpoints(tmp_path):
    pairs = [make_pair(seed=i) for i in range(2)]
    first = train(tiny_train_config(epochs=2, seed=5), pairs, out_path=str(tmp_path / 'a.psgn'))
    second = train(tiny_train_config(epochs=2, seed=5), pairs, out_path=str(tmp_path / 'b.psgn'))

    assert (tmp_path / 'a.psgn').read_bytes() == (tmp_path / 'b.psgn').read_bytes()
    assert (tmp_path / 'a.metrics.csv').read_bytes() == (tmp_path / 'b.metrics.csv').read_bytes()
    assert encode_checkpoint(first.state) == encode_checkpoint(second.state)


def test_metrics_csv_and_periodic_checkpoints(tmp_path):
    out = tmp_path / 'run' / 'model.psgn'
    cfg = tiny_train_config(epochs=3, checkpoint_every=1)
    train(cfg, [make_pair()], out_path=str(out))

    with open(metrics_path_for(str(out)), newline='') as f:
        rows = list(csv.reader(f))
    assert rows[0] == CSV_COLUMNS
    assert len(rows) == 4
    assert (tmp_path / 'run' / 'model.epoch0001.psgn').exists()
    assert periodic_path_for(str(out), 2) == str(tmp_path / 'run' / 'model.epoch0002.psgn')
    assert (tmp_path / 'run' / 'model.epoch0002.psgn').exists()
    assert not (tmp_path / 'run' / 'model.epoch0003.psgn').exists()
    assert out.exists()


def test_empty_dataset_rejected(tiny_cfg):
    with pytest.raises(EmptyDataset):
        train(tiny_cfg, [])


def test_patch_size_mismatch_rejected(tiny_cfg):
    with pytest.raises(ShapeError):
        train(tiny_cfg, [make_pair(P=64)])


def test_nan_is_reported_with_component(tiny_cfg, pair):
    state = init_train_state(tiny_cfg)
    with torch.no_grad():
        next(state.db.parameters()).fill_(float('nan'))
    with pytest.raises(NanDetected) as info:
        train_step(state, pair)
    assert info.value.component == 'db_loss'


def test_loss_kinds_change_the_trace(pair):
    traces = []
    for db_kind, dp_kind in (('ls', 'nll'), ('ls', 'ls'), ('nll', 'nll')):
        cfg = tiny_train_config(epochs=2)
        cfg.weights.db_kind, cfg.weights.dp_kind = db_kind, dp_kind
        result = train(cfg.validate(), [pair])
        traces.append([row['g_total'] for row in result.history])
    assert traces[0] != traces[1] != traces[2] != traces[0]


def test_overfits_single_toy_pair(overfit_toy):
    _, _, history = overfit_toy
    assert all(torch.isfinite(torch.tensor(history)))
    assert history[-1] <= history[0] / 10
