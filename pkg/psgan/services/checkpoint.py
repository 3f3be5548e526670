"""Checkpoint container: magic, JSON header, little-endian float32 payload.

Layout: b'PSGN1' | uint32 header length | header JSON | payload. The header
holds the format version, the training config, the epoch/step counters and a
tensor directory (name, shape, dtype, offset, count). Integer buffers and the
generator byte state are stored as exact float32 values.
"""

import json
import logging
import os
import struct

import numpy as np
import torch
from marshmallow import ValidationError

from psgan.errors import CorruptCheckpoint
from psgan.models.schemas import TrainConfigSchema
from psgan.services.train_state import init_train_state

logger = logging.getLogger(__name__)

MAGIC = b'PSGN1'
VERSION = 1
LENGTH = struct.Struct('<I')
FLOAT = np.dtype('<f4')


def _named_tensors(state):
    tensors = []
    for net_name, module in state.networks().items():
        for key, value in module.state_dict().items():
            tensors.append((f'{net_name}/{key}', value))

    for opt_name, optimizer in state.optimizers().items():
        per_param = optimizer.state_dict()['state']
        for index in sorted(per_param):
            for key in sorted(per_param[index]):
                value = per_param[index][key]
                if not torch.is_tensor(value):
                    value = torch.tensor(value, dtype=torch.float32)
                tensors.append((f'optim/{opt_name}/{index}/{key}', value))

    tensors.append(('rng/state', state.rng.get_state()))
    return tensors


def encode_checkpoint(state):
    """Serialize a TrainState to checkpoint bytes"""
    directory = []
    chunks = []
    offset = 0
    for name, tensor in _named_tensors(state):
        values = tensor.detach().cpu().to(torch.float32).contiguous().numpy().astype(FLOAT)
        directory.append({
            'name': name,
            'shape': list(tensor.shape),
            'dtype': str(tensor.dtype).replace('torch.', ''),
            'offset': offset,
            'count': int(values.size),
        })
        chunks.append(values.tobytes())
        offset += values.nbytes

    header = {
        'version': VERSION,
        'config': state.cfg.to_dict(),
        'epoch': state.epoch,
        'step': state.step,
        'tensors': directory,
    }
    header_bytes = json.dumps(header, sort_keys=True, separators=(',', ':')).encode('utf-8')
    return MAGIC + LENGTH.pack(len(header_bytes)) + header_bytes + b''.join(chunks)


def save_checkpoint(state, path):
    """Write the checkpoint atomically (temp file, then rename)"""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    tmp_path = f'{path}.tmp'
    with open(tmp_path, 'wb') as f:
        f.write(encode_checkpoint(state))
    os.replace(tmp_path, path)
    logger.info('saved checkpoint %s (epoch %d, step %d)', path, state.epoch, state.step)
    return path


def _parse(blob):
    if len(blob) < len(MAGIC) + LENGTH.size or blob[:len(MAGIC)] != MAGIC:
        raise CorruptCheckpoint('bad magic: not a checkpoint file')
    (header_length,) = LENGTH.unpack_from(blob, len(MAGIC))
    start = len(MAGIC) + LENGTH.size
    if len(blob) < start + header_length:
        raise CorruptCheckpoint('truncated header')

    try:
        header = json.loads(blob[start:start + header_length].decode('utf-8'))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise CorruptCheckpoint(f'unreadable header: {e}') from e

    if header.get('version') != VERSION:
        raise CorruptCheckpoint(f"unsupported version {header.get('version')!r}")

    payload = blob[start + header_length:]
    try:
        expected = sum(entry['count'] for entry in header['tensors']) * FLOAT.itemsize
    except (KeyError, TypeError) as e:
        raise CorruptCheckpoint(f'malformed tensor directory: {e}') from e
    if len(payload) != expected:
        raise CorruptCheckpoint(f'length mismatch: payload has {len(payload)} bytes, expected {expected}')
    return header, payload


def _restore_tensor(entry, payload):
    values = np.frombuffer(payload, dtype=FLOAT, count=entry['count'], offset=entry['offset'])
    tensor = torch.from_numpy(values.copy()).reshape(entry['shape'])
    return tensor.to(getattr(torch, entry['dtype']))


def decode_checkpoint(blob):
    """Rebuild a TrainState from checkpoint bytes"""
    header, payload = _parse(blob)
    try:
        cfg = TrainConfigSchema().load(header['config'])
    except (ValidationError, KeyError) as e:
        raise CorruptCheckpoint(f'invalid stored config: {e}') from e

    tensors = {entry['name']: _restore_tensor(entry, payload) for entry in header['tensors']}
    state = init_train_state(cfg)

    try:
        for net_name, module in state.networks().items():
            prefix = f'{net_name}/'
            module.load_state_dict({
                key[len(prefix):]: value for key, value in tensors.items() if key.startswith(prefix)
            })

        for opt_name, optimizer in state.optimizers().items():
            prefix = f'optim/{opt_name}/'
            per_param = {}
            for key, value in tensors.items():
                if key.startswith(prefix):
                    index, name = key[len(prefix):].split('/')
                    per_param.setdefault(int(index), {})[name] = value
            optimizer.load_state_dict({
                'state': per_param,
                'param_groups': optimizer.state_dict()['param_groups'],
            })

        state.rng.set_state(tensors['rng/state'].to(torch.uint8))
    except (RuntimeError, KeyError, ValueError) as e:
        raise CorruptCheckpoint(f'checkpoint tensors do not match the stored config: {e}') from e

    state.epoch = header['epoch']
    state.step = header['step']
    return state


def load_checkpoint(path):
    with open(path, 'rb') as f:
        return decode_checkpoint(f.read())
