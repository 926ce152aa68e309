"""
Data Model Classes for Pixel Adapter Bench
Value types shared by the tensor core, the kernels, the losses and the bench
"""

import math
import struct
from typing import Dict, List, Optional, Tuple

import numpy as np

from errors import CsvFormatError, KernelError, ShapeMismatchError, WindowConfigError
from helpers.constants import (BENCH_CSV_FIELDS, DEFAULT_CELL_SIZE, DEFAULT_EPSILON,
                               DEFAULT_GAMMA, DEFAULT_N_BINS, HOG_BINNING_MODES, PAD)


def _as_float_array(values, dtype=None) -> np.ndarray:
    array = np.asarray(values)
    if dtype is not None:
        return array.astype(dtype, copy=False)
    if array.dtype not in (np.float32, np.float64):
        array = array.astype(np.float64)
    return array


class FeatureMap:
    """Dense rank-4 map laid out row-major as [batch, channels, height, width]"""

    def __init__(self, data, copy: bool = True):
        array = _as_float_array(data)
        if array.ndim != 4:
            raise ShapeMismatchError(f"FeatureMap needs 4 dims, got shape {array.shape}")
        if min(array.shape) < 1:
            raise ShapeMismatchError(f"FeatureMap dims must all be >= 1, got {array.shape}")
        array = np.array(array, order='C', copy=True) if copy else np.ascontiguousarray(array)
        array.setflags(write=False)
        self._data = array

    @classmethod
    def zeros(cls, b: int, c: int, h: int, w: int, dtype=np.float64) -> 'FeatureMap':
        return cls(np.zeros((b, c, h, w), dtype=dtype), copy=False)

    @classmethod
    def full(cls, value: float, b: int, c: int, h: int, w: int, dtype=np.float64) -> 'FeatureMap':
        return cls(np.full((b, c, h, w), value, dtype=dtype), copy=False)

    @classmethod
    def from_values(cls, values: List[float], b: int, c: int, h: int, w: int) -> 'FeatureMap':
        """Build a map from a flat row-major value list"""
        flat = np.asarray(values, dtype=np.float64)
        if flat.size != b * c * h * w:
            raise ShapeMismatchError(
                f"expected {b * c * h * w} values for [{b},{c},{h},{w}], got {flat.size}")
        return cls(flat.reshape(b, c, h, w), copy=False)

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def shape(self) -> Tuple[int, int, int, int]:
        return self._data.shape

    @property
    def b(self) -> int:
        return self._data.shape[0]

    @property
    def c(self) -> int:
        return self._data.shape[1]

    @property
    def h(self) -> int:
        return self._data.shape[2]

    @property
    def w(self) -> int:
        return self._data.shape[3]

    @property
    def n(self) -> int:
        """Pixel count h*w"""
        return self.h * self.w

    @property
    def dtype(self):
        return self._data.dtype

    @property
    def nbytes(self) -> int:
        return self._data.nbytes

    def astype(self, dtype) -> 'FeatureMap':
        if self._data.dtype == dtype:
            return self
        return FeatureMap(self._data.astype(dtype), copy=False)

    def select(self, index: int) -> 'FeatureMap':
        """Return batch item `index` as a batch-1 map"""
        return FeatureMap(self._data[index:index + 1], copy=False)

    def to_bytes(self) -> bytes:
        """Four little-endian int64 dims followed by little-endian float64 values"""
        header = struct.pack('<4q', *self.shape)
        return header + self._data.astype('<f8').tobytes()

    @classmethod
    def from_bytes(cls, payload: bytes) -> 'FeatureMap':
        if len(payload) < 32:
            raise ShapeMismatchError("payload shorter than the 32-byte dims header")
        dims = struct.unpack('<4q', payload[:32])
        values = np.frombuffer(payload[32:], dtype='<f8')
        if values.size != int(np.prod(dims)):
            raise ShapeMismatchError(f"payload holds {values.size} values, dims {dims} need {int(np.prod(dims))}")
        return cls(values.reshape(dims).astype(np.float64), copy=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FeatureMap):
            return NotImplemented
        return (self.shape == other.shape and self.dtype == other.dtype
                and self._data.tobytes() == other._data.tobytes())

    __hash__ = None

    def __repr__(self) -> str:
        return f"FeatureMap(shape={self.shape}, dtype={self.dtype})"


class UnfoldedMap:
    """Sliding-window columns [batch, c*k*k, h*w] produced by unfold"""

    def __init__(self, data: np.ndarray, k: int):
        if data.ndim != 3:
            raise ShapeMismatchError(f"UnfoldedMap needs 3 dims, got {data.shape}")
        if data.shape[1] % (k * k) != 0:
            raise ShapeMismatchError(f"column height {data.shape[1]} is not a multiple of k*k={k * k}")
        self.data = data
        self.k = k

    @property
    def b(self) -> int:
        return self.data.shape[0]

    @property
    def ckk(self) -> int:
        return self.data.shape[1]

    @property
    def n(self) -> int:
        return self.data.shape[2]

    @property
    def channels(self) -> int:
        return self.ckk // (self.k * self.k)


class LinearWeights:
    """Pointwise (1x1) transform: matrix [c_out, c_in] plus bias [c_out]"""

    def __init__(self, w, bias=None):
        w = _as_float_array(w)
        if w.ndim != 2 or min(w.shape) < 1:
            raise ShapeMismatchError(f"weight matrix must be [c_out, c_in] with both >= 1, got {w.shape}")
        bias = np.zeros(w.shape[0], dtype=w.dtype) if bias is None else _as_float_array(bias, w.dtype)
        if bias.shape != (w.shape[0],):
            raise ShapeMismatchError(f"bias shape {bias.shape} does not match c_out={w.shape[0]}")
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(bias))):
            raise KernelError("linear weights must be finite")
        self.w = w
        self.bias = bias

    @classmethod
    def identity(cls, c: int) -> 'LinearWeights':
        return cls(np.eye(c))

    @classmethod
    def zeros(cls, c_out: int, c_in: int) -> 'LinearWeights':
        return cls(np.zeros((c_out, c_in)))

    @classmethod
    def random(cls, rng: 'SeededRng', c_out: int, c_in: int, bias: bool = False,
               scale: Optional[float] = None) -> 'LinearWeights':
        """Uniform weights scaled by 1/sqrt(c_in) unless `scale` is given"""
        if scale is None:
            scale = 1.0 / math.sqrt(c_in)
        w = rng.uniform((c_out, c_in)) * scale
        b = rng.uniform((c_out,)) * scale if bias else None
        return cls(w, b)

    @property
    def c_out(self) -> int:
        return self.w.shape[0]

    @property
    def c_in(self) -> int:
        return self.w.shape[1]

    def scaled(self, alpha: float) -> 'LinearWeights':
        """Scale the matrix only; the bias is kept"""
        return LinearWeights(self.w * alpha, self.bias.copy())

    def astype(self, dtype) -> 'LinearWeights':
        return LinearWeights(self.w.astype(dtype), self.bias.astype(dtype))

    def copy(self) -> 'LinearWeights':
        return LinearWeights(self.w.copy(), self.bias.copy())


class SeededRng:
    """SplitMix64 generator producing uniform values in [-1, 1)

    Stream i (1-based) is mix(seed + i * 0x9E3779B97F4A7C15) with the
    standard SplitMix64 finalizer; the top 53 bits map to [0, 1) and then
    affinely to [-1, 1). Draws are consumed in row-major order of the
    requested shape, so the sequence is identical on every platform.
    """

    GOLDEN_GAMMA = 0x9E3779B97F4A7C15
    _MASK64 = (1 << 64) - 1

    def __init__(self, seed: int):
        self.seed = int(seed) & self._MASK64
        self._state = self.seed

    def next_uint64(self, count: int) -> np.ndarray:
        steps = np.arange(1, count + 1, dtype=np.uint64)
        with np.errstate(over='ignore'):
            z = np.uint64(self._state) + steps * np.uint64(self.GOLDEN_GAMMA)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
            z = z ^ (z >> np.uint64(31))
        self._state = (self._state + count * self.GOLDEN_GAMMA) & self._MASK64
        return z

    def uniform(self, shape) -> np.ndarray:
        if isinstance(shape, int):
            shape = (shape,)
        count = int(np.prod(shape)) if len(shape) else 1
        unit = (self.next_uint64(count) >> np.uint64(11)).astype(np.float64) * (2.0 ** -53)
        return (2.0 * unit - 1.0).reshape(shape)

    def integers(self, low: int, high: int, count: int = 1) -> List[int]:
        """Integers in [low, high]"""
        span = high - low + 1
        return [low + int(v % np.uint64(span)) for v in self.next_uint64(count)]

    def choice(self, options: List):
        return options[self.integers(0, len(options) - 1)[0]]

    def feature_map(self, b: int, c: int, h: int, w: int) -> FeatureMap:
        return FeatureMap(self.uniform((b, c, h, w)), copy=False)


class WindowConfig:
    """Odd window side k and its zero padding p = k // 2"""

    def __init__(self, k: int):
        if k < 1 or k % 2 == 0:
            raise WindowConfigError(f"window size must be odd and >= 1, got {k}")
        self.k = k
        self.p = k // 2

    @property
    def k2(self) -> int:
        return self.k * self.k

    def check_fits(self, h: int, w: int):
        if self.k > 2 * min(h, w) + 1:
            raise WindowConfigError(
                f"window {self.k} exceeds the padded extent of a {h}x{w} image")

    def __repr__(self) -> str:
        return f"WindowConfig(k={self.k}, p={self.p})"


class PamWeights:
    """Query (theta), key (phi) and value (omega) pointwise transforms"""

    def __init__(self, theta: LinearWeights, phi: LinearWeights, omega: LinearWeights):
        for name, t in (('theta', theta), ('phi', phi), ('omega', omega)):
            if t.c_out != t.c_in or t.c_in != theta.c_in:
                raise ShapeMismatchError(
                    f"{name} is [{t.c_out}, {t.c_in}], every transform must be [{theta.c_in}, {theta.c_in}]")
        self.theta = theta
        self.phi = phi
        self.omega = omega

    @classmethod
    def identity(cls, c: int) -> 'PamWeights':
        return cls(LinearWeights.identity(c), LinearWeights.identity(c), LinearWeights.identity(c))

    @classmethod
    def random(cls, rng: SeededRng, c: int, bias: bool = False) -> 'PamWeights':
        return cls(LinearWeights.random(rng, c, c, bias),
                   LinearWeights.random(rng, c, c, bias),
                   LinearWeights.random(rng, c, c, bias))

    @property
    def c(self) -> int:
        return self.theta.c_in

    def astype(self, dtype) -> 'PamWeights':
        return PamWeights(self.theta.astype(dtype), self.phi.astype(dtype), self.omega.astype(dtype))

    def items(self) -> List[Tuple[str, LinearWeights]]:
        return [('theta', self.theta), ('phi', self.phi), ('omega', self.omega)]


class RelationTensor:
    """Attention of each pixel over its k*k window slots, [batch, n, k*k]"""

    def __init__(self, values: np.ndarray):
        if values.ndim != 3:
            raise ShapeMismatchError(f"relation tensor needs 3 dims, got {values.shape}")
        self.values = values

    @property
    def k2(self) -> int:
        return self.values.shape[2]

    def row_sums(self) -> np.ndarray:
        return self.values.sum(axis=-1)


class PgaGraph:
    """Pixel graph: per-node window neighbor lists plus a dense adjacency mask"""

    def __init__(self, h: int, w: int, k: int, neighbors: np.ndarray, dense_mask: np.ndarray):
        self.h = h
        self.w = w
        self.k = k
        self.neighbors = neighbors
        self.dense_mask = dense_mask

    @property
    def n(self) -> int:
        return self.h * self.w

    @property
    def k2(self) -> int:
        return self.k * self.k

    def pad_count(self, node: int) -> int:
        return int(np.count_nonzero(self.neighbors[node] == PAD))

    def real_neighbors(self, node: int) -> np.ndarray:
        row = self.neighbors[node]
        return row[row != PAD]


class PamGradients:
    """Gradients of a scalar objective with respect to PAM's input and weights"""

    def __init__(self, d_input: FeatureMap, d_theta: LinearWeights, d_phi: LinearWeights,
                 d_omega: LinearWeights):
        self.d_input = d_input
        self.d_theta = d_theta
        self.d_phi = d_phi
        self.d_omega = d_omega

    def items(self) -> List[Tuple[str, LinearWeights]]:
        return [('theta', self.d_theta), ('phi', self.d_phi), ('omega', self.d_omega)]


class LstmWeights:
    """One LSTM direction; gate rows are stacked in order input, forget, cell, output"""

    def __init__(self, w_ih, w_hh, bias):
        self.w_ih = _as_float_array(w_ih)
        self.w_hh = _as_float_array(w_hh)
        self.bias = _as_float_array(bias)
        hidden = self.w_hh.shape[1]
        if self.w_ih.shape[0] != 4 * hidden or self.w_hh.shape != (4 * hidden, hidden) \
                or self.bias.shape != (4 * hidden,):
            raise ShapeMismatchError(
                f"inconsistent LSTM shapes w_ih={self.w_ih.shape} w_hh={self.w_hh.shape} bias={self.bias.shape}")

    @classmethod
    def zeros(cls, input_size: int, hidden_size: int) -> 'LstmWeights':
        return cls(np.zeros((4 * hidden_size, input_size)),
                   np.zeros((4 * hidden_size, hidden_size)),
                   np.zeros(4 * hidden_size))

    @classmethod
    def random(cls, rng: SeededRng, input_size: int, hidden_size: int) -> 'LstmWeights':
        scale = 1.0 / math.sqrt(hidden_size)
        return cls(rng.uniform((4 * hidden_size, input_size)) * scale,
                   rng.uniform((4 * hidden_size, hidden_size)) * scale,
                   rng.uniform((4 * hidden_size,)) * scale)

    @property
    def input_size(self) -> int:
        return self.w_ih.shape[1]

    @property
    def hidden_size(self) -> int:
        return self.w_hh.shape[1]


class MsrbWeights:
    """All parameters of one MLP-based sequential residual block

    axial_h/axial_w mix full columns/rows, channel_mix is the channel branch
    of the axial mixer, channel_fc/phase_fc produce the wave amplitude z and
    phase theta, amp_t_*/amp_i_* are the per-axis cos/sin mixing matrices,
    fuse_fc is the output MLP of the wave fusion, ffn_in/ffn_out the
    feed-forward MLP, lstm_fwd/lstm_bwd the two BLSTM directions and proj
    maps the BLSTM hidden state back to `channels`.
    """

    MATRIX_NAMES = ('axial_h', 'axial_w', 'amp_t_h', 'amp_i_h', 'amp_t_w', 'amp_i_w')
    LINEAR_NAMES = ('channel_mix', 'channel_fc', 'phase_fc', 'fuse_fc', 'ffn_in', 'ffn_out', 'proj')
    LSTM_NAMES = ('lstm_fwd', 'lstm_bwd')

    def __init__(self, channels: int, height: int, width: int, clue_channels: int,
                 tensors: Dict[str, object]):
        self.channels = channels
        self.height = height
        self.width = width
        self.clue_channels = clue_channels
        for name in self.MATRIX_NAMES + self.LINEAR_NAMES + self.LSTM_NAMES:
            if name not in tensors:
                raise ShapeMismatchError(f"missing MSRB tensor '{name}'")
            setattr(self, name, tensors[name])
        self._check_shapes()

    def _check_shapes(self):
        c, h, w = self.channels, self.height, self.width
        expected = {'axial_h': (h, h), 'amp_t_h': (h, h), 'amp_i_h': (h, h),
                    'axial_w': (w, w), 'amp_t_w': (w, w), 'amp_i_w': (w, w)}
        for name, shape in expected.items():
            if np.shape(getattr(self, name)) != shape:
                raise ShapeMismatchError(f"{name} must be {shape}, got {np.shape(getattr(self, name))}")
        for name in ('channel_mix', 'channel_fc', 'phase_fc', 'fuse_fc'):
            lw = getattr(self, name)
            if (lw.c_out, lw.c_in) != (c, c):
                raise ShapeMismatchError(f"{name} must be [{c}, {c}], got [{lw.c_out}, {lw.c_in}]")
        if self.ffn_in.c_in != c or self.ffn_out.c_out != c or self.ffn_out.c_in != self.ffn_in.c_out:
            raise ShapeMismatchError("feed-forward layers do not chain c -> hidden -> c")
        if self.lstm_fwd.input_size != c + self.clue_channels \
                or self.lstm_bwd.input_size != c + self.clue_channels:
            raise ShapeMismatchError(
                f"BLSTM input size must be channels + clue_channels = {c + self.clue_channels}")
        if self.lstm_fwd.hidden_size != self.lstm_bwd.hidden_size:
            raise ShapeMismatchError("forward and backward LSTM hidden sizes differ")
        if self.proj.c_in != self.lstm_fwd.hidden_size or self.proj.c_out != c:
            raise ShapeMismatchError("projection must map the LSTM hidden size back to channels")

    @classmethod
    def random(cls, rng: SeededRng, channels: int, height: int, width: int,
               clue_channels: int = 0, lstm_hidden: Optional[int] = None,
               ffn_hidden: Optional[int] = None) -> 'MsrbWeights':
        c = channels
        lstm_hidden = lstm_hidden or c
        ffn_hidden = ffn_hidden or 2 * c
        tensors = {
            'axial_h': rng.uniform((height, height)) / height,
            'axial_w': rng.uniform((width, width)) / width,
            'amp_t_h': rng.uniform((height, height)) / height,
            'amp_i_h': rng.uniform((height, height)) / height,
            'amp_t_w': rng.uniform((width, width)) / width,
            'amp_i_w': rng.uniform((width, width)) / width,
            'channel_mix': LinearWeights.random(rng, c, c, bias=True),
            'channel_fc': LinearWeights.random(rng, c, c, bias=True),
            'phase_fc': LinearWeights.random(rng, c, c, bias=True),
            'fuse_fc': LinearWeights.random(rng, c, c, bias=True),
            'ffn_in': LinearWeights.random(rng, ffn_hidden, c, bias=True),
            'ffn_out': LinearWeights.random(rng, c, ffn_hidden, bias=True),
            'lstm_fwd': LstmWeights.random(rng, c + clue_channels, lstm_hidden),
            'lstm_bwd': LstmWeights.random(rng, c + clue_channels, lstm_hidden),
            'proj': LinearWeights.random(rng, c, lstm_hidden, bias=True),
        }
        return cls(channels, height, width, clue_channels, tensors)

    @classmethod
    def zeros(cls, channels: int, height: int, width: int, clue_channels: int = 0,
              lstm_hidden: Optional[int] = None, ffn_hidden: Optional[int] = None) -> 'MsrbWeights':
        c = channels
        lstm_hidden = lstm_hidden or c
        ffn_hidden = ffn_hidden or 2 * c
        tensors = {name: np.zeros((height, height)) for name in ('axial_h', 'amp_t_h', 'amp_i_h')}
        tensors.update({name: np.zeros((width, width)) for name in ('axial_w', 'amp_t_w', 'amp_i_w')})
        tensors.update({name: LinearWeights.zeros(c, c)
                        for name in ('channel_mix', 'channel_fc', 'phase_fc', 'fuse_fc')})
        tensors['ffn_in'] = LinearWeights.zeros(ffn_hidden, c)
        tensors['ffn_out'] = LinearWeights.zeros(c, ffn_hidden)
        tensors['lstm_fwd'] = LstmWeights.zeros(c + clue_channels, lstm_hidden)
        tensors['lstm_bwd'] = LstmWeights.zeros(c + clue_channels, lstm_hidden)
        tensors['proj'] = LinearWeights.zeros(c, lstm_hidden)
        return cls(channels, height, width, clue_channels, tensors)

    def tensors(self) -> Dict[str, object]:
        return {name: getattr(self, name)
                for name in self.MATRIX_NAMES + self.LINEAR_NAMES + self.LSTM_NAMES}

    def replace(self, **overrides) -> 'MsrbWeights':
        """Copy with some tensors swapped out"""
        tensors = self.tensors()
        tensors.update(overrides)
        return MsrbWeights(self.channels, self.height, self.width, self.clue_channels, tensors)


class ClueMap:
    """Externally supplied text-clue map [batch, clue_channels, height, width]; zero channels allowed"""

    def __init__(self, values):
        values = _as_float_array(values)
        if values.ndim != 4:
            raise ShapeMismatchError(f"ClueMap needs 4 dims, got {values.shape}")
        self.values = values

    @classmethod
    def zeros(cls, b: int, c_t: int, h: int, w: int) -> 'ClueMap':
        return cls(np.zeros((b, c_t, h, w)))

    @property
    def channels(self) -> int:
        return self.values.shape[1]


class HogParams:
    """HOG cell/bin layout and normalization settings"""

    def __init__(self, cell_size: int = DEFAULT_CELL_SIZE, n_bins: int = DEFAULT_N_BINS,
                 binning: str = 'count', gamma: Optional[float] = DEFAULT_GAMMA,
                 epsilon: float = DEFAULT_EPSILON):
        if cell_size < 1 or n_bins < 1:
            raise KernelError(f"cell_size and n_bins must be >= 1, got {cell_size}, {n_bins}")
        if binning not in HOG_BINNING_MODES:
            raise KernelError(f"binning must be one of {HOG_BINNING_MODES}, got '{binning}'")
        if gamma is not None and gamma <= 0:
            raise KernelError(f"gamma must be > 0 or disabled, got {gamma}")
        if epsilon < 0:
            raise KernelError(f"epsilon must be >= 0, got {epsilon}")
        self.cell_size = cell_size
        self.n_bins = n_bins
        self.binning = binning
        self.gamma = gamma
        self.epsilon = epsilon

    def to_dict(self) -> Dict[str, str]:
        return {
            'cell_size': str(self.cell_size),
            'n_bins': str(self.n_bins),
            'binning': self.binning,
            'gamma': '' if self.gamma is None else repr(self.gamma),
            'epsilon': repr(self.epsilon),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, str]) -> 'HogParams':
        gamma = data.get('gamma', repr(DEFAULT_GAMMA)).strip()
        return cls(
            cell_size=int(data.get('cell_size', DEFAULT_CELL_SIZE)),
            n_bins=int(data.get('n_bins', DEFAULT_N_BINS)),
            binning=data.get('binning', 'count'),
            gamma=float(gamma) if gamma else None,
            epsilon=float(data.get('epsilon', DEFAULT_EPSILON)),
        )


class GradientField:
    """Per-pixel derivatives, magnitude and unsigned orientation in [0, pi)"""

    def __init__(self, gx: np.ndarray, gy: np.ndarray, magnitude: np.ndarray, direction: np.ndarray):
        self.gx = gx
        self.gy = gy
        self.magnitude = magnitude
        self.direction = direction

    @property
    def shape(self) -> Tuple[int, int]:
        return self.gx.shape


class HogDescriptor:
    """Concatenated per-cell histograms laid out (cells_y, cells_x, n_bins)"""

    def __init__(self, values: np.ndarray, cells_y: int, cells_x: int, n_bins: int):
        values = np.asarray(values, dtype=np.float64).ravel()
        if values.size != cells_y * cells_x * n_bins:
            raise ShapeMismatchError(
                f"{values.size} values do not fill layout ({cells_y}, {cells_x}, {n_bins})")
        self.values = values
        self.cells_y = cells_y
        self.cells_x = cells_x
        self.n_bins = n_bins

    @property
    def layout(self) -> Tuple[int, int, int]:
        return (self.cells_y, self.cells_x, self.n_bins)

    def cell(self, y: int, x: int) -> np.ndarray:
        return self.values.reshape(self.layout)[y, x]

    def to_text(self) -> str:
        """Header `cells_y cells_x n_bins`, then one line of bin values per cell"""
        lines = [f"{self.cells_y} {self.cells_x} {self.n_bins}"]
        for block in self.values.reshape(-1, self.n_bins):
            lines.append(' '.join(repr(float(v)) for v in block))
        return '\n'.join(lines) + '\n'

    @classmethod
    def from_text(cls, text: str) -> 'HogDescriptor':
        lines = [line for line in text.splitlines() if line.strip()]
        if not lines:
            raise ShapeMismatchError("empty descriptor dump")
        cells_y, cells_x, n_bins = (int(v) for v in lines[0].split())
        values = [float(v) for line in lines[1:] for v in line.split()]
        return cls(np.array(values), cells_y, cells_x, n_bins)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HogDescriptor):
            return NotImplemented
        return self.layout == other.layout and self.values.tobytes() == other.values.tobytes()

    __hash__ = None


class BenchRecord:
    """One benchmark measurement, one CSV row"""

    def __init__(self, kernel: str, b: int, c: int, h: int, w: int, k: int, reps: int,
                 wall_ns_median: int, peak_bytes: int, flops_est: int):
        self.kernel = kernel
        self.b = b
        self.c = c
        self.h = h
        self.w = w
        self.k = k
        self.reps = reps
        self.wall_ns_median = wall_ns_median
        self.peak_bytes = peak_bytes
        self.flops_est = flops_est

    @property
    def n(self) -> int:
        return self.h * self.w

    def to_row(self) -> List[str]:
        return [str(getattr(self, field)) for field in BENCH_CSV_FIELDS]

    @classmethod
    def from_row(cls, row: List[str], line_number: Optional[int] = None) -> 'BenchRecord':
        if len(row) != len(BENCH_CSV_FIELDS):
            raise CsvFormatError(f"expected {len(BENCH_CSV_FIELDS)} fields, got {len(row)}", line_number)
        kernel = row[0].strip()
        if not kernel:
            raise CsvFormatError("empty kernel name", line_number)
        try:
            numbers = [int(v) for v in row[1:]]
        except ValueError as e:
            raise CsvFormatError(f"non-integer field: {e}", line_number)
        return cls(kernel, *numbers)


class VerifyCase:
    """Outcome of one verification case"""

    def __init__(self, name: str, shapes: str, max_abs_diff: float, tolerance: float):
        self.name = name
        self.shapes = shapes
        self.max_abs_diff = max_abs_diff
        self.tolerance = tolerance

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.max_abs_diff)) and self.max_abs_diff <= self.tolerance


class VerifyReport:
    """Collection of verification cases; passes iff every case passes"""

    def __init__(self, title: str):
        self.title = title
        self.cases: List[VerifyCase] = []

    def add_case(self, name: str, shapes: str, max_abs_diff: float, tolerance: float) -> VerifyCase:
        case = VerifyCase(name, shapes, float(max_abs_diff), tolerance)
        self.cases.append(case)
        return case

    @property
    def passed(self) -> bool:
        return all(case.passed for case in self.cases)

    @property
    def failures(self) -> List[VerifyCase]:
        return [case for case in self.cases if not case.passed]
