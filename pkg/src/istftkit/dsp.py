"""Signal-processing layer: STFT/iSTFT, time-frequency parameter algebra,
log-mel analysis, and the PQMF filter bank for multi-band synthesis.

Audio and spectra travel as float32 numpy arrays; internal arithmetic is
float64. STFT analysis uses centered frames with reflection padding of
fft_size/2 on both ends; iSTFT inverts per frame and overlap-adds with the
squared-window envelope as denominator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import firwin

from .fft import irfft, rfft


class DspError(ValueError):
    pass


_window_cache: dict[tuple[str, int], np.ndarray] = {}


def make_window(kind: str, length: int) -> np.ndarray:
    """Periodic analysis window of the given kind ('hann' or 'rect')."""
    key = (kind, length)
    w = _window_cache.get(key)
    if w is None:
        if kind == "hann":
            n = np.arange(length)
            w = 0.5 - 0.5 * np.cos(2.0 * np.pi * n / length)
        elif kind == "rect":
            w = np.ones(length)
        else:
            raise DspError(f"unknown window kind: {kind!r}")
        _window_cache[key] = w
    return w


@dataclass(frozen=True)
class StftConfig:
    fft_size: int = 1024
    hop: int = 256
    win_length: int = 1024
    window: str = "hann"

    def __post_init__(self):
        if min(self.fft_size, self.hop, self.win_length) < 1:
            raise DspError("fft_size, hop and win_length must be positive")
        if self.win_length > self.fft_size:
            raise DspError("win_length must not exceed fft_size")
        if self.hop > self.win_length:
            raise DspError("hop must not exceed win_length")
        if self.fft_size % 2 != 0:
            raise DspError("fft_size must be even")

    @property
    def freq_bins(self) -> int:
        return self.fft_size // 2 + 1

    def padded_window(self) -> np.ndarray:
        """Window of win_length samples zero-padded (centered) to fft_size."""
        w = make_window(self.window, self.win_length)
        if self.win_length == self.fft_size:
            return w
        lpad = (self.fft_size - self.win_length) // 2
        out = np.zeros(self.fft_size)
        out[lpad : lpad + self.win_length] = w
        return out


@dataclass
class Spectrogram:
    magnitude: np.ndarray  # [F, T_frames], linear, >= 0
    phase: np.ndarray  # [F, T_frames], radians

    def __post_init__(self):
        if self.magnitude.shape != self.phase.shape:
            raise DspError("magnitude and phase must share a shape")


def istft_params(base: StftConfig, s: int) -> StftConfig:
    """Scale an STFT configuration down by the temporal-upsampling factor s.

    Returns (fft_size/s, hop/s, win_length/s); the window kind is unchanged.
    """
    if s < 1:
        raise DspError(f"upsampling factor must be >= 1, got {s}")
    for name, v in (("fft_size", base.fft_size), ("hop", base.hop), ("win_length", base.win_length)):
        if v % s != 0:
            raise DspError(f"{name}={v} not divisible by s={s}")
    if base.hop // s < 1:
        raise DspError(f"s={s} drives the hop below one sample")
    return StftConfig(base.fft_size // s, base.hop // s, base.win_length // s, base.window)


def stft(x: np.ndarray, cfg: StftConfig) -> Spectrogram:
    """Centered STFT with reflection padding; T_frames = len(x)//hop + 1."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise DspError("stft expects a 1D signal")
    if len(x) < cfg.win_length:
        raise DspError(f"signal of {len(x)} samples shorter than window {cfg.win_length}")
    f, h = cfg.fft_size, cfg.hop
    n_frames = len(x) // h + 1
    xp = np.pad(x, (f // 2, f // 2), mode="reflect")
    starts = np.arange(n_frames) * h
    frames = xp[starts[:, None] + np.arange(f)[None, :]]
    frames = frames * cfg.padded_window()[None, :]
    spec = rfft(frames)  # [T_frames, F]
    return Spectrogram(
        magnitude=np.abs(spec).T.astype(np.float32),
        phase=np.angle(spec).T.astype(np.float32),
    )


def istft(spec: Spectrogram, cfg: StftConfig, out_len: int) -> np.ndarray:
    """Windowed overlap-add inversion, trimmed to out_len samples.

    The fft_size/2 head introduced by centered analysis is dropped; the
    overlap-add sum is divided by the summed squared-window envelope.
    Raises DspError when the window/hop pair violates NOLA.
    """
    if spec.magnitude.shape[0] != cfg.freq_bins:
        raise DspError(
            f"spectrogram has {spec.magnitude.shape[0]} bins, config expects {cfg.freq_bins}"
        )
    f, h = cfg.fft_size, cfg.hop
    n_frames = spec.magnitude.shape[1]
    win = cfg.padded_window()
    z = spec.magnitude.astype(np.float64) * np.exp(1j * spec.phase.astype(np.float64))
    frames = irfft(z.T, f) * win[None, :]  # [T_frames, f]

    total = f + h * (n_frames - 1)
    out = np.zeros(total)
    env = np.zeros(total)
    wsq = win * win
    for i in range(n_frames):
        out[i * h : i * h + f] += frames[i]
        env[i * h : i * h + f] += wsq

    start = f // 2
    if start + out_len > total:
        raise DspError(
            f"cannot produce {out_len} samples from {n_frames} frames (hop {h})"
        )
    seg_env = env[start : start + out_len]
    if np.any(seg_env < 1e-11):
        raise DspError("NOLA violated: squared-window envelope has (near-)zeros")
    return (out[start : start + out_len] / seg_env).astype(np.float32)


def hz_to_mel(f):
    """HTK mel scale."""
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)


def mel_to_hz(m):
    return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)


def mel_filterbank(sr: int, n_fft: int, n_mels: int, fmin: float, fmax: float) -> np.ndarray:
    """Triangular HTK-mel filterbank, [n_mels, n_fft/2 + 1], peak height 1."""
    if not (0 <= fmin < fmax <= sr / 2):
        raise DspError(f"invalid band edges fmin={fmin}, fmax={fmax} for sr={sr}")
    pts = mel_to_hz(np.linspace(hz_to_mel(fmin), hz_to_mel(fmax), n_mels + 2))
    bin_freqs = np.arange(n_fft // 2 + 1) * (sr / n_fft)
    lower = (bin_freqs[None, :] - pts[:-2, None]) / (pts[1:-1] - pts[:-2])[:, None]
    upper = (pts[2:, None] - bin_freqs[None, :]) / (pts[2:] - pts[1:-1])[:, None]
    return np.maximum(0.0, np.minimum(lower, upper))


def log_mel(
    x: np.ndarray,
    sr: int = 22050,
    cfg: StftConfig = StftConfig(),
    n_mels: int = 80,
    fmin: float = 0.0,
    fmax: float = 8000.0,
) -> np.ndarray:
    """Natural-log mel spectrogram [n_mels, T_frames], floored at 1e-5."""
    fb = mel_filterbank(sr, cfg.fft_size, n_mels, fmin, fmax)
    mag = stft(x, cfg).magnitude.astype(np.float64)
    mel = fb @ mag
    return np.log(np.maximum(mel, 1e-5)).astype(np.float32)


def design_prototype_filter(taps: int = 62, cutoff: float = 0.142, beta: float = 9.0) -> np.ndarray:
    """Kaiser-windowed lowpass prototype for the PQMF bank (taps+1 coefficients)."""
    if taps % 2 != 0:
        raise DspError("taps must be even")
    if not (0.0 < cutoff < 1.0):
        raise DspError("cutoff must lie in (0, 1)")
    return firwin(taps + 1, cutoff, window=("kaiser", beta))


@dataclass
class PqmfBank:
    """Near-perfect-reconstruction pseudo-QMF bank of b cosine-modulated bands."""

    bands: int = 4
    taps: int = 62
    cutoff: float = 0.142
    beta: float = 9.0

    def __post_init__(self):
        proto = design_prototype_filter(self.taps, self.cutoff, self.beta)
        n = np.arange(self.taps + 1)
        k = np.arange(self.bands)[:, None]
        phase = (2 * k + 1) * (np.pi / (2 * self.bands)) * (n[None, :] - self.taps / 2)
        shift = (-1.0) ** k * (np.pi / 4)
        self.prototype = proto
        self.analysis = (2.0 * proto[None, :] * np.cos(phase + shift)).astype(np.float64)
        self.synthesis = (2.0 * proto[None, :] * np.cos(phase - shift)).astype(np.float64)

    @property
    def round_trip_delay(self) -> int:
        # analysis and synthesis both pad taps/2 on each side (centered
        # filtering), so the cascade introduces no net delay
        return 0


def pqmf_analysis(bank: PqmfBank, x: np.ndarray) -> np.ndarray:
    """Split audio [b*T] into critically sampled sub-bands [b, T]."""
    x = np.asarray(x, dtype=np.float64)
    b = bank.bands
    if len(x) % b != 0:
        raise DspError(f"signal length {len(x)} not divisible by {b} bands")
    pad = bank.taps // 2
    xp = np.pad(x, (pad, pad))
    sub = np.stack([np.convolve(xp, h[::-1], mode="valid") for h in bank.analysis])
    return sub[:, ::b].astype(np.float32)


def pqmf_synthesis(bank: PqmfBank, sub: np.ndarray) -> np.ndarray:
    """Merge sub-bands [b, T] into audio of exactly b*T samples."""
    b = bank.bands
    if sub.shape[0] != b:
        raise DspError(f"expected {b} sub-bands, got {sub.shape[0]}")
    t = sub.shape[1]
    up = np.zeros((b, t * b))
    up[:, ::b] = np.asarray(sub, dtype=np.float64)
    pad = bank.taps // 2
    out = np.zeros(t * b)
    for ch, h in zip(up, bank.synthesis):
        out += np.convolve(np.pad(ch, (pad, pad)), b * h[::-1], mode="valid")
    return out.astype(np.float32)
