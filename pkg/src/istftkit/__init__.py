"""CPU inference engine and DSP toolkit for iSTFT-based neural vocoders."""

from .dsp import PqmfBank, Spectrogram, StftConfig, istft, istft_params, log_mel, stft
from .model import (
    ArchSpec,
    Hyper,
    ModelGraph,
    NAMED_VARIANTS,
    build,
    build_named,
    default_hyper,
    init_random,
    parse_arch,
)

__version__ = "0.1.0"

__all__ = [
    "ArchSpec",
    "Hyper",
    "ModelGraph",
    "NAMED_VARIANTS",
    "PqmfBank",
    "Spectrogram",
    "StftConfig",
    "build",
    "build_named",
    "default_hyper",
    "init_random",
    "istft",
    "istft_params",
    "log_mel",
    "parse_arch",
    "stft",
]
