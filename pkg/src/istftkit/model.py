"""Architecture-string compiler, model builders, forward pass, and
parameter counting for the iSTFTNet/iSTFTNet2 family.

Architecture strings follow (C<int>)+(S)?I<int>(B<int>)?: C stages are 1D
upsampling+MRF stages, S is the 2D-block stage, I<y> the iSTFT hop, B<b>
the sub-band count. The time-frequency budget (product of temporal factors
times iSTFT hop times bands) must equal the base hop of 256.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

import numpy as np

from . import blocks as B
from .dsp import PqmfBank, Spectrogram, StftConfig, istft, istft_params, pqmf_synthesis
from .nn import leaky_relu

BASE_STFT = StftConfig(1024, 256, 1024, "hann")


class ArchError(ValueError):
    pass


ALIASES = {
    "hifigan-v2": ("C8C8C2C2", None),
    "istftnet-c8c8i4": ("C8C8I4", None),
    "istftnet-c8c1i32": ("C8C1I32", None),
    "istftnet2-base": ("C8SI32", "res"),
    "istftnet2-small": ("C8SI32", "shuffle"),
    "istftnet-mb": ("C4C4I4B4", None),
    "istftnet2-mb": ("C4SI16B4", "shuffle"),
}

NAMED_VARIANTS = tuple(ALIASES)


@dataclass(frozen=True)
class ArchSpec:
    name: str
    factors: tuple[int, ...]
    istft_hop: int  # the I value; per-band iSTFT hop in samples
    bands: int = 1
    block2d: str | None = None  # None | "res" | "shuffle"
    head: str = "istft"  # "istft" | "waveform"
    base: StftConfig = BASE_STFT

    @property
    def temporal_product(self) -> int:
        p = 1
        for f in self.factors:
            p *= f
        return p

    @property
    def istft_scale(self) -> int:
        """Down-scaling factor for the per-band iSTFT configuration."""
        return self.temporal_product * self.bands

    @property
    def istft_config(self) -> StftConfig:
        return istft_params(self.base, self.istft_scale)

    @property
    def freq_bins(self) -> int:
        return self.base.fft_size // self.istft_scale // 2 + 1


_ARCH_RE = re.compile(r"^((?:C\d+)+)(S?)I(\d+)(?:B(\d+))?$")


def parse_arch(s: str, base: StftConfig = BASE_STFT) -> ArchSpec:
    """Parse and validate an architecture string or named alias."""
    name = s.strip()
    kind = None
    raw = name
    alias = ALIASES.get(name.lower())
    if alias is not None:
        raw, kind = alias
        if name.lower() == "hifigan-v2":
            spec = ArchSpec(name, (8, 8, 2, 2), istft_hop=1, head="waveform", base=base)
            _validate(spec)
            return spec
    m = _ARCH_RE.match(raw)
    if m is None:
        raise ArchError(f"cannot parse architecture string {s!r}")
    factors = tuple(int(v) for v in re.findall(r"C(\d+)", m.group(1)))
    block2d = (kind or "res") if m.group(2) else None
    spec = ArchSpec(
        name=name,
        factors=factors,
        istft_hop=int(m.group(3)),
        bands=int(m.group(4)) if m.group(4) else 1,
        block2d=block2d,
        base=base,
    )
    _validate(spec)
    return spec


def _validate(spec: ArchSpec) -> None:
    budget = spec.temporal_product * spec.istft_hop * spec.bands
    if budget != spec.base.hop:
        raise ArchError(
            f"time-frequency budget violation: {spec.temporal_product} x "
            f"{spec.istft_hop} x {spec.bands} = {budget} != {spec.base.hop}"
        )
    for f in spec.factors:
        if f not in B.Upsample1d.SUPPORTED:
            raise ArchError(f"unsupported temporal factor {f}")
    if spec.head == "istft":
        scale = spec.istft_scale
        for v in (spec.base.fft_size, spec.base.hop, spec.base.win_length):
            if v % scale != 0:
                raise ArchError(f"iSTFT scale {scale} does not divide {v}")


@dataclass(frozen=True)
class Hyper:
    mel_channels: int = 80
    base_channels: int = 128
    mrf_kernels: tuple[int, ...] = (3, 7, 11)
    mrf_dilations: tuple[int, ...] = (1, 3, 5)
    trunk_channels: int = 32
    trunk_kernel: tuple[int, int] = (3, 3)
    trunk_repeats: int = 3
    trunk_expansion: int = 2

    def __post_init__(self):
        for v in (self.mel_channels, self.base_channels, self.trunk_channels,
                  self.trunk_repeats, self.trunk_expansion):
            if v < 1:
                raise ValueError("hyperparameters must be positive")


def default_hyper(spec: ArchSpec) -> Hyper:
    """Per-variant defaults; multi-band 2D trunks are rebalanced (wider,
    no hidden expansion in the shuffle transform)."""
    h = Hyper()
    if spec.block2d is not None and spec.bands > 1:
        h = replace(h, trunk_channels=64, trunk_expansion=1)
    return h


@dataclass
class HeadInfo:
    kind: str  # "istft" | "waveform"
    freq_bins: int = 0
    bands: int = 1
    istft_cfg: StftConfig | None = None


class ModelGraph:
    """Ordered layer list with named weights plus output-head metadata."""

    def __init__(self, arch: ArchSpec, hyper: Hyper, layers, head: HeadInfo):
        self.arch = arch
        self.hyper = hyper
        self.layers = layers  # list[(name, layer)]
        self.head = head
        self._pqmf = PqmfBank(bands=arch.bands) if arch.bands > 1 else None

    def named_params(self):
        """Yield (name, ConvParams) over all layers in graph order."""
        for lname, layer in self.layers:
            for pname, p in layer.conv_params():
                yield (f"{lname}.{pname}" if pname else lname, p)

    def count_params(self) -> int:
        return sum(p.n_params for _, p in self.named_params())

    def static_shapes(self, t_mel: int):
        """Propagate shapes through the graph without running it."""
        shape = (self.hyper.mel_channels, t_mel)
        out = []
        for name, layer in self.layers:
            shape = layer.out_shape(shape)
            out.append((name, shape))
        return out

    def forward(self, mel: np.ndarray, debug: bool = False) -> np.ndarray:
        """Synthesize a waveform of exactly hop * T samples from mel [80, T]."""
        if mel.shape[0] != self.hyper.mel_channels:
            raise ValueError(
                f"mel has {mel.shape[0]} channels, expected {self.hyper.mel_channels}"
            )
        x = np.asarray(mel, dtype=np.float32)
        for name, layer in self.layers:
            if isinstance(layer, (B.Upsample1d, B.To2d)) or name == "post":
                x = leaky_relu(x, B.LRELU_SLOPE)
            x = layer(x)
            if debug and not np.all(np.isfinite(x)):
                raise FloatingPointError(f"non-finite activations after layer {name!r}")
        return self._apply_head(x)

    def _apply_head(self, y: np.ndarray) -> np.ndarray:
        if self.head.kind == "waveform":
            return np.tanh(y[0])
        cfg = self.head.istft_cfg
        fbins, b = self.head.freq_bins, self.head.bands
        frames = y.shape[-1]
        out_len = cfg.hop * frames
        bands = []
        for i in range(b):
            if y.ndim == 3:  # 2D head: [2b, F, T], mag/phase interleaved per band
                raw_mag, phase = y[2 * i], y[2 * i + 1]
            else:  # 1D head: [2*F*b, T], per band F mag rows then F phase rows
                blk = y[i * 2 * fbins : (i + 1) * 2 * fbins]
                raw_mag, phase = blk[:fbins], blk[fbins:]
            spec = Spectrogram(np.exp(raw_mag), phase)
            bands.append(istft(spec, cfg, out_len))
        if b == 1:
            return bands[0]
        return pqmf_synthesis(self._pqmf, np.stack(bands))


def build(spec: ArchSpec, hyper: Hyper | None = None) -> ModelGraph:
    """Construct a zero-initialized model graph for an architecture."""
    if hyper is None:
        hyper = default_hyper(spec)
    layers = []
    ch = hyper.base_channels
    layers.append(("pre", B.Conv1dLayer(hyper.mel_channels, ch, 7, padding=3)))
    for i, f in enumerate(spec.factors):
        up = B.Upsample1d(ch, f)
        ch = up.out_channels
        last = i == len(spec.factors) - 1
        fusion = "concat" if (spec.block2d is not None and last) else "add"
        mrf = B.Mrf1d(
            B.Mrf1dConfig(ch, hyper.mrf_kernels, hyper.mrf_dilations, fusion)
        )
        layers.append((f"stage{i}.up", up))
        layers.append((f"stage{i}.mrf", mrf))
        ch = mrf.cfg.out_channels

    fbins = spec.freq_bins if spec.head == "istft" else 0
    if spec.block2d is not None:
        tc = hyper.trunk_channels
        start_freq = (fbins - 1) // 8
        layers.append(("to2d", B.To2d(ch, tc, start_freq)))
        layers.append((
            "trunk",
            B.Block2dStack(
                B.Block2dConfig(
                    tc,
                    hyper.trunk_kernel,
                    hyper.trunk_repeats,
                    spec.block2d,
                    hyper.trunk_expansion,
                )
            ),
        ))
        layers.append(("head", B.FreqUpHead(tc, start_freq, fbins, 2 * spec.bands)))
        head = HeadInfo("istft", fbins, spec.bands, spec.istft_config)
    elif spec.head == "istft":
        layers.append(("post", B.Conv1dLayer(ch, 2 * fbins * spec.bands, 7, padding=3)))
        head = HeadInfo("istft", fbins, spec.bands, spec.istft_config)
    else:
        layers.append(("post", B.Conv1dLayer(ch, 1, 7, padding=3)))
        head = HeadInfo("waveform")
    return ModelGraph(spec, hyper, layers, head)


def init_random(g: ModelGraph, seed: int) -> ModelGraph:
    """Deterministic per-seed Gaussian init (mean 0, std 0.01), in place."""
    rng = np.random.default_rng(seed)
    for _, p in g.named_params():
        p.weight[...] = rng.normal(0.0, 0.01, p.weight.shape).astype(np.float32)
        p.bias[...] = rng.normal(0.0, 0.01, p.bias.shape).astype(np.float32)
    return g


def build_named(name: str, seed: int | None = None) -> ModelGraph:
    """Convenience: parse + build (+ optional random init) a named variant."""
    g = build(parse_arch(name))
    if seed is not None:
        init_random(g, seed)
    return g
