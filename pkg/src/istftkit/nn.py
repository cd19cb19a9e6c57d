"""Dense-tensor neural primitives: convolutions, leaky ReLU, channel ops.

Tensors are plain ``numpy.ndarray`` objects, float32, row-major, with the
channel axis outermost ([C, T] for 1D, [C, F, T] for 2D). Convolutions are
cross-correlations (no kernel flip) with zero padding only; accumulation
happens in float64 and results are cast back to float32.

All functions are pure; inputs are never modified in place.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class ShapeError(ValueError):
    """Raised when tensor shapes violate an operation's preconditions."""


def _as_tuple(v, ndim: int) -> tuple[int, ...]:
    if isinstance(v, (int, np.integer)):
        return (int(v),) * ndim
    t = tuple(int(x) for x in v)
    if len(t) != ndim:
        raise ShapeError(f"expected {ndim} per-axis values, got {t}")
    return t


@dataclass
class ConvParams:
    """Weights and geometry of a 1D or 2D (transposed) convolution.

    weight has shape [out_channels, in_channels, *kernel]; bias has shape
    [out_channels]. kernel/stride/padding/dilation are per spatial axis.
    """

    in_channels: int
    out_channels: int
    kernel: tuple[int, ...]
    stride: tuple[int, ...] = ()
    padding: tuple[int, ...] = ()
    dilation: tuple[int, ...] = ()
    weight: np.ndarray = field(default=None, repr=False)
    bias: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        self.kernel = _as_tuple(self.kernel, len(self.kernel) if not isinstance(self.kernel, int) else 1)
        nd = len(self.kernel)
        self.stride = _as_tuple(self.stride, nd) if self.stride else (1,) * nd
        self.padding = _as_tuple(self.padding, nd) if self.padding != () else (0,) * nd
        self.dilation = _as_tuple(self.dilation, nd) if self.dilation else (1,) * nd
        if any(s < 1 for s in self.stride) or any(d < 1 for d in self.dilation):
            raise ShapeError("stride and dilation must be >= 1")
        if any(p < 0 for p in self.padding):
            raise ShapeError("padding must be >= 0")
        expected = (self.out_channels, self.in_channels) + self.kernel
        if self.weight is None:
            self.weight = np.zeros(expected, dtype=np.float32)
        self.weight = np.asarray(self.weight, dtype=np.float32)
        if self.weight.shape != expected:
            raise ShapeError(
                f"weight shape {self.weight.shape} inconsistent with {expected}"
            )
        if self.bias is None:
            self.bias = np.zeros(self.out_channels, dtype=np.float32)
        self.bias = np.asarray(self.bias, dtype=np.float32)
        if self.bias.shape != (self.out_channels,):
            raise ShapeError(f"bias shape {self.bias.shape} != ({self.out_channels},)")

    @property
    def n_params(self) -> int:
        return self.weight.size + self.bias.size

    def out_len(self, t: int, axis: int = 0) -> int:
        """Output length of a direct convolution along one spatial axis."""
        k, s = self.kernel[axis], self.stride[axis]
        p, d = self.padding[axis], self.dilation[axis]
        return (t + 2 * p - d * (k - 1) - 1) // s + 1

    def out_len_transposed(self, t: int, axis: int = 0) -> int:
        """Output length of a transposed convolution along one spatial axis."""
        k, s = self.kernel[axis], self.stride[axis]
        p, d = self.padding[axis], self.dilation[axis]
        return (t - 1) * s - 2 * p + d * (k - 1) + 1


def _check_channels(x: np.ndarray, p: ConvParams) -> None:
    if x.shape[0] != p.in_channels:
        raise ShapeError(
            f"input has {x.shape[0]} channels, conv expects {p.in_channels}"
        )


def conv1d(x: np.ndarray, p: ConvParams) -> np.ndarray:
    """Cross-correlate x [C_in, T] -> [C_out, T'] with bias."""
    _check_channels(x, p)
    t = x.shape[1]
    t_out = p.out_len(t)
    if t_out < 1:
        raise ShapeError(f"non-positive output length for T={t} with {p.kernel}")
    k, s, pad, d = p.kernel[0], p.stride[0], p.padding[0], p.dilation[0]
    xp = np.pad(x, ((0, 0), (pad, pad))).astype(np.float64)
    # gather [C_in, k, T'] windows, then contract with weight [C_out, C_in, k]
    idx = np.arange(t_out) * s + np.arange(k)[:, None] * d
    cols = xp[:, idx]
    out = np.tensordot(p.weight.astype(np.float64), cols, axes=([1, 2], [0, 1]))
    out += p.bias.astype(np.float64)[:, None]
    return out.astype(np.float32)


def conv2d(x: np.ndarray, p: ConvParams) -> np.ndarray:
    """Cross-correlate x [C_in, F, T] -> [C_out, F', T'] with bias."""
    _check_channels(x, p)
    f, t = x.shape[1], x.shape[2]
    f_out, t_out = p.out_len(f, 0), p.out_len(t, 1)
    if f_out < 1 or t_out < 1:
        raise ShapeError(f"non-positive output size for input {x.shape}")
    (kf, kt), (sf, st) = p.kernel, p.stride
    (pf, pt), (df, dt) = p.padding, p.dilation
    xp = np.pad(x, ((0, 0), (pf, pf), (pt, pt))).astype(np.float64)
    rows = np.arange(f_out) * sf + np.arange(kf)[:, None] * df  # [kf, F']
    cols = np.arange(t_out) * st + np.arange(kt)[:, None] * dt  # [kt, T']
    # gathered: [C_in, kf, F', kt, T']
    g = xp[:, rows[:, :, None, None], cols[None, None, :, :]]
    out = np.tensordot(p.weight.astype(np.float64), g, axes=([1, 2, 3], [0, 1, 3]))
    out += p.bias.astype(np.float64)[:, None, None]
    return out.astype(np.float32)


def _transposed_equivalent(p: ConvParams) -> ConvParams:
    """Direct-conv params realizing the transposed conv on a zero-stuffed input."""
    nd = len(p.kernel)
    w = np.swapaxes(p.weight, 0, 1)
    for axis in range(nd):
        w = np.flip(w, axis=2 + axis)
    pad = tuple(p.dilation[a] * (p.kernel[a] - 1) - p.padding[a] for a in range(nd))
    if any(q < 0 for q in pad):
        raise ShapeError(f"invalid transposed-conv geometry: padding {p.padding}")
    return ConvParams(
        in_channels=p.in_channels,
        out_channels=p.out_channels,
        kernel=p.kernel,
        stride=(1,) * nd,
        padding=pad,
        dilation=p.dilation,
        weight=np.ascontiguousarray(np.swapaxes(w, 0, 1)),
        bias=p.bias,
    )


def conv_transpose1d(x: np.ndarray, p: ConvParams) -> np.ndarray:
    """Transposed (scatter-accumulate) convolution, x [C_in, T] -> [C_out, T'].

    Weight layout matches conv1d: [out_channels, in_channels, k]. With
    stride s, kernel 2s and padding s/2 the output length is exactly s*T.
    """
    _check_channels(x, p)
    t = x.shape[1]
    if p.out_len_transposed(t) < 1:
        raise ShapeError(f"non-positive output length for T={t}")
    s = p.stride[0]
    up = np.zeros((x.shape[0], (t - 1) * s + 1), dtype=np.float32)
    up[:, ::s] = x
    return conv1d(up, _transposed_equivalent(p))


def conv_transpose2d(x: np.ndarray, p: ConvParams) -> np.ndarray:
    """2-axis analogue of conv_transpose1d, x [C_in, F, T] -> [C_out, F', T']."""
    _check_channels(x, p)
    f, t = x.shape[1], x.shape[2]
    if p.out_len_transposed(f, 0) < 1 or p.out_len_transposed(t, 1) < 1:
        raise ShapeError(f"non-positive output size for input {x.shape}")
    sf, st = p.stride
    up = np.zeros((x.shape[0], (f - 1) * sf + 1, (t - 1) * st + 1), dtype=np.float32)
    up[:, ::sf, ::st] = x
    return conv2d(up, _transposed_equivalent(p))


def leaky_relu(x: np.ndarray, slope: float = 0.1) -> np.ndarray:
    """Elementwise x if x >= 0 else slope * x."""
    return np.where(x >= 0, x, np.float32(slope) * x).astype(np.float32)


def channel_shuffle(x: np.ndarray, groups: int) -> np.ndarray:
    """Interleave channel groups: channel c -> (c % g) * (C/g) + c // g."""
    c = x.shape[0]
    if c % groups != 0:
        raise ShapeError(f"groups={groups} does not divide C={c}")
    return np.ascontiguousarray(
        x.reshape(groups, c // groups, *x.shape[1:]).swapaxes(0, 1).reshape(x.shape)
    )


def channel_split(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split into first/second contiguous channel halves; C must be even."""
    c = x.shape[0]
    if c % 2 != 0:
        raise ShapeError(f"cannot split odd channel count C={c}")
    return x[: c // 2], x[c // 2 :]


def channel_concat(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Stack channels of a and b; non-channel shapes must match."""
    if a.shape[1:] != b.shape[1:]:
        raise ShapeError(f"non-channel shapes differ: {a.shape[1:]} vs {b.shape[1:]}")
    return np.concatenate([a, b], axis=0)
