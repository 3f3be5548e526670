import json
import struct

import pytest
import torch

from conftest import make_pair, tiny_train_config
from psgan.errors import CorruptCheckpoint
from psgan.services.checkpoint import MAGIC, decode_checkpoint, encode_checkpoint, load_checkpoint, save_checkpoint
from psgan.services.train_state import init_train_state
from psgan.services.trainer import train, train_step


@pytest.fixture
def trained_state():
    state = init_train_state(tiny_train_config())
    pair = make_pair()
    for _ in range(2):
        train_step(state, pair)
    state.epoch = 1
    return state


def rewrite_header(blob, **changes):
    (length,) = struct.unpack_from('<I', blob, len(MAGIC))
    start = len(MAGIC) + 4
    header = json.loads(blob[start:start + length])
    header.update(changes)
    encoded = json.dumps(header, sort_keys=True, separators=(',', ':')).encode('utf-8')
    return MAGIC + struct.pack('<I', len(encoded)) + encoded + blob[start + length:]


def test_save_load_save_is_byte_identical(tmp_path, trained_state):
    path = tmp_path / 'model.psgn'
    save_checkpoint(trained_state, str(path))
    restored = load_checkpoint(str(path))
    save_checkpoint(restored, str(tmp_path / 'again.psgn'))

    assert path.read_bytes() == (tmp_path / 'again.psgn').read_bytes()
    assert not (tmp_path / 'model.psgn.tmp').exists()


def test_round_trip_restores_parameters_and_counters(trained_state):
    restored = decode_checkpoint(encode_checkpoint(trained_state))

    assert (restored.epoch, restored.step) == (1, 2)
    for name, net in trained_state.networks().items():
        for (key, value), (_, other) in zip(net.state_dict().items(), restored.networks()[name].state_dict().items()):
            assert torch.equal(value, other), f'{name}/{key}'
    assert torch.equal(trained_state.rng.get_state(), restored.rng.get_state())


def test_resumed_run_matches_uninterrupted_run(tmp_path):
    pairs = [make_pair(seed=i) for i in range(2)]
    straight = train(tiny_train_config(epochs=2), pairs)

    half = train(tiny_train_config(epochs=1), pairs, out_path=str(tmp_path / 'half.psgn'))
    resumed_state = load_checkpoint(str(tmp_path / 'half.psgn'))
    assert resumed_state.epoch == half.state.epoch == 1
    cfg = resumed_state.cfg
    cfg.epochs = 2
    resumed = train(cfg, pairs, state=resumed_state)

    assert [r['g_total'] for r in resumed.history] == [r['g_total'] for r in straight.history[2:]]


def test_truncated_file(trained_state):
    blob = encode_checkpoint(trained_state)
    with pytest.raises(CorruptCheckpoint, match='length mismatch'):
        decode_checkpoint(blob[:-10])
    with pytest.raises(CorruptCheckpoint):
        decode_checkpoint(blob[:12])


def test_bad_magic(trained_state):
    blob = encode_checkpoint(trained_state)
    with pytest.raises(CorruptCheckpoint, match='bad magic'):
        decode_checkpoint(b'XXXXX' + blob[5:])


def test_unsupported_version(trained_state):
    blob = rewrite_header(encode_checkpoint(trained_state), version=2)
    with pytest.raises(CorruptCheckpoint, match='unsupported version'):
        decode_checkpoint(blob)


def test_header_lists_tensor_directory(trained_state):
    blob = encode_checkpoint(trained_state)
    (length,) = struct.unpack_from('<I', blob, len(MAGIC))
    header = json.loads(blob[len(MAGIC) + 4:len(MAGIC) + 4 + length])

    assert header['version'] == 1
    assert list(header) == sorted(header)
    names = [entry['name'] for entry in header['tensors']]
    assert 'rng/state' in names
    assert any(name.startswith('optim/generator/') for name in names)
    assert all({'name', 'shape', 'dtype', 'offset', 'count'} <= set(entry) for entry in header['tensors'])
