"""Composite layers: MRF 1D ResBlocks, temporal upsampling stages, 2D
residual/shuffle blocks, and the frequency-upsampling output head.

Every layer owns its ConvParams, exposes ``conv_params()`` for checkpointing
and parameter counting, ``out_shape()`` for static shape checking, and a pure
``__call__`` forward. Weights are frozen after construction/initialization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .nn import (
    ConvParams,
    ShapeError,
    channel_concat,
    channel_shuffle,
    channel_split,
    conv1d,
    conv2d,
    conv_transpose1d,
    conv_transpose2d,
    leaky_relu,
)

LRELU_SLOPE = 0.1


def _same_pad(k: int, d: int = 1) -> int:
    return (k - 1) * d // 2


class Conv1dLayer:
    def __init__(self, in_ch, out_ch, k, stride=1, padding=0, dilation=1):
        self.p = ConvParams(in_ch, out_ch, (k,), (stride,), (padding,), (dilation,))

    def conv_params(self):
        return [("", self.p)]

    def out_shape(self, shape):
        return (self.p.out_channels, self.p.out_len(shape[1]))

    def __call__(self, x):
        return conv1d(x, self.p)


class ConvT1dLayer(Conv1dLayer):
    def out_shape(self, shape):
        return (self.p.out_channels, self.p.out_len_transposed(shape[1]))

    def __call__(self, x):
        return conv_transpose1d(x, self.p)


class Conv2dLayer:
    def __init__(self, in_ch, out_ch, kernel, stride=(1, 1), padding=(0, 0)):
        self.p = ConvParams(in_ch, out_ch, tuple(kernel), tuple(stride), tuple(padding))

    def conv_params(self):
        return [("", self.p)]

    def out_shape(self, shape):
        return (self.p.out_channels, self.p.out_len(shape[1], 0), self.p.out_len(shape[2], 1))

    def __call__(self, x):
        return conv2d(x, self.p)


class ConvT2dLayer(Conv2dLayer):
    def out_shape(self, shape):
        return (
            self.p.out_channels,
            self.p.out_len_transposed(shape[1], 0),
            self.p.out_len_transposed(shape[2], 1),
        )

    def __call__(self, x):
        return conv_transpose2d(x, self.p)


@dataclass(frozen=True)
class Mrf1dConfig:
    channels: int
    kernel_sizes: tuple[int, ...] = (3, 7, 11)
    dilations: tuple[int, ...] = (1, 3, 5)
    fusion: str = "add"  # "add" | "concat"

    def __post_init__(self):
        if self.fusion not in ("add", "concat"):
            raise ValueError(f"unknown fusion mode {self.fusion!r}")

    @property
    def out_channels(self) -> int:
        if self.fusion == "concat":
            return self.channels * len(self.kernel_sizes)
        return self.channels


class Mrf1d:
    """Multi-receptive-field fusion of per-kernel residual branches.

    Each branch runs ``len(dilations)`` residual units of
    LReLU -> dilated conv -> LReLU -> conv, all same-padded. Branch outputs
    are averaged (fusion="add") or concatenated along channels ("concat").
    """

    def __init__(self, cfg: Mrf1dConfig):
        self.cfg = cfg
        c = cfg.channels
        self.branches = []
        for k in cfg.kernel_sizes:
            units = []
            for d in cfg.dilations:
                c1 = Conv1dLayer(c, c, k, padding=_same_pad(k, d), dilation=d)
                c2 = Conv1dLayer(c, c, k, padding=_same_pad(k))
                units.append((c1, c2))
            self.branches.append(units)

    def conv_params(self):
        out = []
        for bi, units in enumerate(self.branches):
            for ui, (c1, c2) in enumerate(units):
                out.append((f"b{bi}.c1.{ui}", c1.p))
                out.append((f"b{bi}.c2.{ui}", c2.p))
        return out

    def out_shape(self, shape):
        if shape[0] != self.cfg.channels:
            raise ShapeError(f"MRF expects {self.cfg.channels} channels, got {shape[0]}")
        return (self.cfg.out_channels, shape[1])

    def __call__(self, x):
        outs = []
        for units in self.branches:
            xb = x
            for c1, c2 in units:
                xt = leaky_relu(xb, LRELU_SLOPE)
                xt = c1(xt)
                xt = leaky_relu(xt, LRELU_SLOPE)
                xt = c2(xt)
                xb = xb + xt
            outs.append(xb)
        if self.cfg.fusion == "add":
            return (np.sum(outs, axis=0) / np.float32(len(outs))).astype(np.float32)
        out = outs[0]
        for o in outs[1:]:
            out = channel_concat(out, o)
        return out


class Upsample1d:
    """Temporal x-s upsampling stage.

    For s > 1: transposed conv with kernel 2s, stride s, padding s/2, halving
    the channel count. For s == 1: plain same-padded conv, channels unchanged.
    """

    SUPPORTED = (1, 2, 4, 8)

    def __init__(self, in_ch: int, factor: int):
        if factor not in self.SUPPORTED:
            raise ValueError(f"unsupported upsampling factor {factor}")
        self.factor = factor
        if factor == 1:
            self.out_channels = in_ch
            self.conv = Conv1dLayer(in_ch, in_ch, 7, padding=3)
        else:
            self.out_channels = in_ch // 2
            self.conv = ConvT1dLayer(
                in_ch, in_ch // 2, 2 * factor, stride=factor, padding=factor // 2
            )

    def conv_params(self):
        return [("", self.conv.p)]

    def out_shape(self, shape):
        return (self.out_channels, shape[1] * self.factor)

    def __call__(self, x):
        return self.conv(x)


@dataclass(frozen=True)
class Block2dConfig:
    channels: int
    kernel: tuple[int, int] = (3, 3)
    repeats: int = 3
    kind: str = "res"  # "res" | "shuffle"
    expansion: int = 2  # hidden width = expansion * channels

    def __post_init__(self):
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")
        if self.kind not in ("res", "shuffle"):
            raise ValueError(f"unknown 2D block kind {self.kind!r}")
        if self.kind == "shuffle" and self.channels % 2 != 0:
            raise ValueError("shuffle blocks need an even channel count")


class Block2dStack:
    """Stack of 2D residual or shuffle units, shape-preserving.

    Residual unit: LReLU -> conv (C -> expansion*C) -> LReLU -> conv (-> C),
    plus the input. Shuffle unit: channel split, the same two-conv transform
    on one half (C/2 -> expansion*C -> C/2), concat with the untouched half,
    then channel shuffle with two groups.
    """

    def __init__(self, cfg: Block2dConfig):
        self.cfg = cfg
        c, hidden = cfg.channels, cfg.expansion * cfg.channels
        pad = (_same_pad(cfg.kernel[0]), _same_pad(cfg.kernel[1]))
        cin = c if cfg.kind == "res" else c // 2
        self.units = [
            (
                Conv2dLayer(cin, hidden, cfg.kernel, padding=pad),
                Conv2dLayer(hidden, cin, cfg.kernel, padding=pad),
            )
            for _ in range(cfg.repeats)
        ]

    def conv_params(self):
        out = []
        for i, (c1, c2) in enumerate(self.units):
            out.append((f"r{i}.c1", c1.p))
            out.append((f"r{i}.c2", c2.p))
        return out

    def out_shape(self, shape):
        if shape[0] != self.cfg.channels:
            raise ShapeError(
                f"2D stack expects {self.cfg.channels} channels, got {shape[0]}"
            )
        return shape

    def _transform(self, x, c1, c2):
        xt = leaky_relu(x, LRELU_SLOPE)
        xt = c1(xt)
        xt = leaky_relu(xt, LRELU_SLOPE)
        return c2(xt)

    def __call__(self, x):
        for c1, c2 in self.units:
            if self.cfg.kind == "res":
                x = x + self._transform(x, c1, c2)
            else:
                skip, active = channel_split(x)
                active = self._transform(active, c1, c2)
                x = channel_shuffle(channel_concat(skip, active), 2)
        return x


class To2d:
    """Pointwise 1D-to-2D conversion: [C_in, T] -> [trunk_ch, freq, T].

    A 1x1 conv maps to trunk_ch*freq channels, reshaped with frequency as
    the slower sub-axis.
    """

    def __init__(self, in_ch: int, trunk_ch: int, freq: int):
        self.trunk_ch = trunk_ch
        self.freq = freq
        self.conv = Conv1dLayer(in_ch, trunk_ch * freq, 1)

    def conv_params(self):
        return [("", self.conv.p)]

    def out_shape(self, shape):
        return (self.trunk_ch, self.freq, shape[1])

    def __call__(self, x):
        y = self.conv(x)
        return y.reshape(self.trunk_ch, self.freq, y.shape[1])


class FreqUpHead:
    """Frequency-upsampling output head.

    A ladder of frequency-only transposed convs (stride (2,1), kernel (4,1))
    doubles the frequency axis until target_freq - 1, halving channels per
    rung; a zero Nyquist row is appended and a final same-padded 3x3 conv
    produces out_channels.
    """

    def __init__(self, in_ch: int, start_freq: int, target_freq: int, out_channels: int):
        if target_freq < start_freq:
            raise ShapeError("target frequency below input frequency")
        self.start_freq = start_freq
        self.target_freq = target_freq
        self.out_channels = out_channels
        self.rungs = []
        ch, f = in_ch, start_freq
        while f < target_freq - 1:
            self.rungs.append(ConvT2dLayer(ch, ch // 2, (4, 1), stride=(2, 1), padding=(1, 0)))
            ch //= 2
            f *= 2
        if f != target_freq - 1:
            raise ShapeError(
                f"frequency {start_freq} cannot reach {target_freq - 1} by doubling"
            )
        self.final = Conv2dLayer(ch, out_channels, (3, 3), padding=(1, 1))

    def conv_params(self):
        out = [(f"up{i}", r.p) for i, r in enumerate(self.rungs)]
        out.append(("out", self.final.p))
        return out

    def out_shape(self, shape):
        return (self.out_channels, self.target_freq, shape[2])

    def __call__(self, x):
        for rung in self.rungs:
            x = rung(leaky_relu(x, LRELU_SLOPE))
        x = np.pad(x, ((0, 0), (0, 1), (0, 0)))  # zero Nyquist row
        return self.final(leaky_relu(x, LRELU_SLOPE))
