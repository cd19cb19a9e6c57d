"""Iterative radix-2 FFT for real signals.

Sizes must be powers of two (everything in scope is 16..1024). Transforms
are vectorized over a leading batch axis; bit-reversal permutations and
twiddle factors are cached per size and safe for concurrent readers.
"""

from __future__ import annotations

import numpy as np

_bitrev_cache: dict[int, np.ndarray] = {}
_twiddle_cache: dict[tuple[int, bool], list[np.ndarray]] = {}


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def _bitrev(n: int) -> np.ndarray:
    perm = _bitrev_cache.get(n)
    if perm is None:
        bits = n.bit_length() - 1
        perm = np.zeros(n, dtype=np.intp)
        for i in range(n):
            r = 0
            v = i
            for _ in range(bits):
                r = (r << 1) | (v & 1)
                v >>= 1
            perm[i] = r
        _bitrev_cache[n] = perm
    return perm


def _twiddles(n: int, inverse: bool) -> list[np.ndarray]:
    key = (n, inverse)
    tw = _twiddle_cache.get(key)
    if tw is None:
        sign = 1.0 if inverse else -1.0
        tw = []
        size = 2
        while size <= n:
            k = np.arange(size // 2)
            tw.append(np.exp(sign * 2j * np.pi * k / size))
            size *= 2
        _twiddle_cache[key] = tw
    return tw


def fft(x: np.ndarray, inverse: bool = False) -> np.ndarray:
    """Complex radix-2 FFT along the last axis (power-of-two length)."""
    x = np.asarray(x)
    n = x.shape[-1]
    if not _is_pow2(n):
        raise ValueError(f"FFT size {n} is not a power of two")
    a = np.array(x[..., _bitrev(n)], dtype=np.complex128)
    if n == 1:
        return a
    for stage, tw in enumerate(_twiddles(n, inverse)):
        size = 2 << stage
        half = size // 2
        v = a.reshape(*a.shape[:-1], n // size, size)
        even = v[..., :half].copy()
        odd = v[..., half:] * tw
        v[..., :half] = even + odd
        v[..., half:] = even - odd
    if inverse:
        a /= n
    return a


def rfft(x: np.ndarray) -> np.ndarray:
    """Real-input FFT along the last axis; returns the n/2+1 low bins."""
    n = np.asarray(x).shape[-1]
    return fft(np.asarray(x, dtype=np.float64))[..., : n // 2 + 1]


def irfft(spec: np.ndarray, n: int) -> np.ndarray:
    """Inverse of rfft: Hermitian-symmetric spectrum -> real signal of length n."""
    spec = np.asarray(spec, dtype=np.complex128)
    if spec.shape[-1] != n // 2 + 1:
        raise ValueError(f"expected {n // 2 + 1} bins for size {n}, got {spec.shape[-1]}")
    full = np.concatenate(
        [spec, np.conj(spec[..., -2:0:-1])], axis=-1
    )
    return fft(full, inverse=True).real
