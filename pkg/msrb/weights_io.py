"""
Block weight serialization
A weight set is stored as two files:
    <prefix>.bin       every tensor as little-endian float64, concatenated
    <prefix>.manifest  header line `msrb <channels> <height> <width> <clue_channels>`
                       then one `<name> <dim> ...` line per tensor, in file order
Tensor order: the full-axis matrices, then each pointwise layer as
`<layer>.w`, `<layer>.bias`, then each LSTM direction as `<dir>.w_ih`,
`<dir>.w_hh`, `<dir>.bias`; names follow MsrbWeights.
"""

import os
from typing import Dict, List, Tuple

import numpy as np

from data_models import LinearWeights, LstmWeights, MsrbWeights
from errors import KernelError
from helpers.logger import get_logger

MANIFEST_TAG = 'msrb'
_LE_F64 = np.dtype('<f8')


def _flat_tensors(wts: MsrbWeights) -> List[Tuple[str, np.ndarray]]:
    tensors = [(name, np.asarray(getattr(wts, name))) for name in MsrbWeights.MATRIX_NAMES]
    for name in MsrbWeights.LINEAR_NAMES:
        layer = getattr(wts, name)
        tensors += [(f"{name}.w", layer.w), (f"{name}.bias", layer.bias)]
    for name in MsrbWeights.LSTM_NAMES:
        cell = getattr(wts, name)
        tensors += [(f"{name}.w_ih", cell.w_ih), (f"{name}.w_hh", cell.w_hh), (f"{name}.bias", cell.bias)]
    return tensors


def dump_weights(wts: MsrbWeights) -> Tuple[bytes, str]:
    """Returns (payload, manifest text)"""
    tensors = _flat_tensors(wts)
    lines = [f"{MANIFEST_TAG} {wts.channels} {wts.height} {wts.width} {wts.clue_channels}"]
    lines += [' '.join([name] + [str(d) for d in array.shape]) for name, array in tensors]
    payload = b''.join(np.ascontiguousarray(array, dtype=_LE_F64).tobytes() for _, array in tensors)
    return payload, '\n'.join(lines) + '\n'


def _parse_manifest(manifest: str) -> Tuple[List[int], List[Tuple[str, Tuple[int, ...]]]]:
    lines = [line.split() for line in manifest.splitlines() if line.strip()]
    if not lines or lines[0][0] != MANIFEST_TAG or len(lines[0]) != 5:
        raise KernelError("weight manifest must start with 'msrb <channels> <height> <width> <clue_channels>'")
    try:
        header = [int(v) for v in lines[0][1:]]
        entries = [(parts[0], tuple(int(d) for d in parts[1:])) for parts in lines[1:]]
    except ValueError as e:
        raise KernelError(f"malformed weight manifest: {e}") from e
    return header, entries


def load_weights(payload: bytes, manifest: str) -> MsrbWeights:
    """Inverse of dump_weights"""
    (channels, height, width, clue_channels), entries = _parse_manifest(manifest)
    expected = sum(int(np.prod(shape)) for _, shape in entries) * _LE_F64.itemsize
    if len(payload) != expected:
        raise KernelError(f"weight payload has {len(payload)} bytes, manifest describes {expected}")

    flat: Dict[str, np.ndarray] = {}
    offset = 0
    for name, shape in entries:
        count = int(np.prod(shape))
        flat[name] = np.frombuffer(payload, dtype=_LE_F64, count=count, offset=offset) \
            .astype(np.float64).reshape(shape)
        offset += count * _LE_F64.itemsize

    try:
        tensors = {name: flat[name] for name in MsrbWeights.MATRIX_NAMES}
        for name in MsrbWeights.LINEAR_NAMES:
            tensors[name] = LinearWeights(flat[f"{name}.w"], flat[f"{name}.bias"])
        for name in MsrbWeights.LSTM_NAMES:
            tensors[name] = LstmWeights(flat[f"{name}.w_ih"], flat[f"{name}.w_hh"], flat[f"{name}.bias"])
    except KeyError as e:
        raise KernelError(f"weight manifest is missing tensor {e}") from e
    return MsrbWeights(channels, height, width, clue_channels, tensors)


def save_weights_file(wts: MsrbWeights, prefix: str):
    payload, manifest = dump_weights(wts)
    with open(prefix + '.bin', 'wb') as f:
        f.write(payload)
    with open(prefix + '.manifest', 'w', encoding='utf-8') as f:
        f.write(manifest)
    get_logger().log_debug(f"Saved block weights to {prefix}.bin ({len(payload)} bytes)")


def load_weights_file(prefix: str) -> MsrbWeights:
    for suffix in ('.bin', '.manifest'):
        if not os.path.exists(prefix + suffix):
            raise KernelError(f"weight file not found: {prefix + suffix}")
    with open(prefix + '.bin', 'rb') as f:
        payload = f.read()
    with open(prefix + '.manifest', 'r', encoding='utf-8') as f:
        manifest = f.read()
    return load_weights(payload, manifest)
