"""Bit-exact file formats: ISN2 checkpoints, MEL0 feature files, WAV output.

All formats are little-endian. Checkpoints store the architecture string and
a list of named float32 tensors; loading rebuilds the graph from the stored
architecture and validates every tensor shape before accepting.
"""

from __future__ import annotations

import struct

import numpy as np

from .model import Hyper, ModelGraph, build, parse_arch

CKPT_MAGIC = b"ISN2"
CKPT_VERSION = 1
MEL_MAGIC = b"MEL0"


class FormatError(ValueError):
    pass


def _read(f, n: int, what: str) -> bytes:
    data = f.read(n)
    if len(data) != n:
        raise FormatError(f"truncated file while reading {what}")
    return data


def _write_str(f, s: str) -> None:
    raw = s.encode("utf-8")
    f.write(struct.pack("<I", len(raw)))
    f.write(raw)


def _read_str(f, what: str) -> str:
    (n,) = struct.unpack("<I", _read(f, 4, what))
    return _read(f, n, what).decode("utf-8")


def write_tensors(path, arch_string: str, entries: list[tuple[str, np.ndarray]]) -> None:
    """Write named float32 tensors in the ISN2 container format."""
    names = [n for n, _ in entries]
    if len(set(names)) != len(names):
        raise FormatError("duplicate tensor names")
    with open(path, "wb") as f:
        f.write(CKPT_MAGIC)
        f.write(struct.pack("<I", CKPT_VERSION))
        _write_str(f, arch_string)
        f.write(struct.pack("<I", len(entries)))
        for name, t in entries:
            t = np.ascontiguousarray(t, dtype=np.float32)
            _write_str(f, name)
            f.write(struct.pack("<I", t.ndim))
            f.write(struct.pack(f"<{t.ndim}I", *t.shape))
            f.write(t.tobytes())


def read_tensors(path) -> tuple[str, list[tuple[str, np.ndarray]]]:
    """Read an ISN2 container; returns (arch_string, [(name, tensor), ...])."""
    with open(path, "rb") as f:
        magic = _read(f, 4, "magic")
        if magic != CKPT_MAGIC:
            raise FormatError(f"bad magic {magic!r}, expected {CKPT_MAGIC!r}")
        (version,) = struct.unpack("<I", _read(f, 4, "version"))
        if version != CKPT_VERSION:
            raise FormatError(f"unsupported checkpoint version {version}")
        arch = _read_str(f, "architecture string")
        (count,) = struct.unpack("<I", _read(f, 4, "entry count"))
        entries = []
        seen = set()
        for _ in range(count):
            name = _read_str(f, "tensor name")
            if name in seen:
                raise FormatError(f"duplicate tensor name {name!r}")
            seen.add(name)
            (ndim,) = struct.unpack("<I", _read(f, 4, "tensor rank"))
            dims = struct.unpack(f"<{ndim}I", _read(f, 4 * ndim, "tensor dims"))
            nbytes = 4 * int(np.prod(dims, dtype=np.int64))
            data = np.frombuffer(_read(f, nbytes, f"tensor {name!r}"), dtype="<f4")
            entries.append((name, data.reshape(dims)))
        if f.read(1):
            raise FormatError("trailing bytes after last tensor")
    return arch, entries


def save_checkpoint(g: ModelGraph, path) -> None:
    entries = []
    for name, p in g.named_params():
        entries.append((f"{name}.weight", p.weight))
        entries.append((f"{name}.bias", p.bias))
    write_tensors(path, g.arch.name, entries)


def load_checkpoint(path, hyper: Hyper | None = None) -> ModelGraph:
    """Rebuild the stored architecture and load weights bitwise."""
    arch, entries = read_tensors(path)
    g = build(parse_arch(arch), hyper)
    params = {}
    for name, p in g.named_params():
        params[f"{name}.weight"] = p.weight
        params[f"{name}.bias"] = p.bias
    loaded = set()
    for name, t in entries:
        target = params.get(name)
        if target is None:
            raise FormatError(f"unknown tensor name {name!r} for arch {arch!r}")
        if tuple(t.shape) != target.shape:
            raise FormatError(
                f"shape mismatch: {name} has {tuple(t.shape)}, graph expects {target.shape}"
            )
        target[...] = t
        loaded.add(name)
    missing = set(params) - loaded
    if missing:
        raise FormatError(f"checkpoint missing tensors: {sorted(missing)[:3]} ...")
    return g


def write_mel(t: np.ndarray, path, sr: int = 22050) -> None:
    """Write a [n_mels, frames] float32 matrix in the MEL0 format."""
    t = np.ascontiguousarray(t, dtype=np.float32)
    if t.ndim != 2:
        raise FormatError("mel tensor must be 2D [n_mels, frames]")
    with open(path, "wb") as f:
        f.write(MEL_MAGIC)
        f.write(struct.pack("<III", sr, t.shape[0], t.shape[1]))
        f.write(t.tobytes())


def read_mel(path) -> tuple[np.ndarray, int]:
    """Read a MEL0 file; returns (mel [n_mels, frames], sample_rate)."""
    with open(path, "rb") as f:
        magic = _read(f, 4, "magic")
        if magic != MEL_MAGIC:
            raise FormatError(f"bad magic {magic!r}, expected {MEL_MAGIC!r}")
        sr, n_mels, frames = struct.unpack("<III", _read(f, 12, "mel header"))
        data = np.frombuffer(_read(f, 4 * n_mels * frames, "mel data"), dtype="<f4")
        if f.read(1):
            raise FormatError("trailing bytes after mel data")
    return data.reshape(n_mels, frames), sr


def write_wav(audio: np.ndarray, sr: int, path) -> None:
    """Write mono 16-bit PCM; samples clamped to [-1, 1] then scaled by 32767."""
    audio = np.asarray(audio)
    if not np.all(np.isfinite(audio)):
        raise FormatError("audio contains non-finite samples")
    pcm = np.round(np.clip(audio, -1.0, 1.0) * 32767.0).astype("<i2")
    data = pcm.tobytes()
    with open(path, "wb") as f:
        f.write(b"RIFF")
        f.write(struct.pack("<I", 36 + len(data)))
        f.write(b"WAVE")
        f.write(b"fmt ")
        f.write(struct.pack("<IHHIIHH", 16, 1, 1, sr, sr * 2, 2, 16))
        f.write(b"data")
        f.write(struct.pack("<I", len(data)))
        f.write(data)
