"""Wall-clock real-time-factor benchmarking.

Only the forward pass (network + iSTFT + optional PQMF merge) sits inside
the timed region; model construction, weight init and I/O are excluded.
RTF = inference seconds / synthesized seconds, reported as the median over
repeats (with IQR) after warmup, on a pinned number of compute threads.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from threadpoolctl import threadpool_limits

from .model import ModelGraph, build, default_hyper, init_random, parse_arch

SAMPLE_RATE = 22050


@dataclass
class BenchResult:
    arch: str
    rtf_median: float
    rtf_iqr: float
    rtf_samples: list[float]
    params: int
    duration: float
    warmup: int
    repeats: int
    threads: int


def random_mel(frames: int, seed: int = 0) -> np.ndarray:
    """Seeded noise in the typical log-mel range [-4, 4]; timing for a
    convolutional pipeline is content-independent."""
    rng = np.random.default_rng(seed)
    return rng.uniform(-4.0, 4.0, size=(80, frames)).astype(np.float32)


def run_bench(
    arch: str,
    duration: float = 1.0,
    warmup: int = 5,
    repeats: int = 30,
    threads: int = 1,
    seed: int = 0,
    graph: ModelGraph | None = None,
) -> BenchResult:
    if duration <= 0:
        raise ValueError("duration must be positive")
    if graph is None:
        graph = init_random(build(parse_arch(arch)), seed)
    frames = math.ceil(duration * SAMPLE_RATE / 256)
    mel = random_mel(frames, seed)
    target_samples = int(duration * SAMPLE_RATE)

    times = []
    with threadpool_limits(limits=threads):
        for i in range(warmup + repeats):
            t0 = time.perf_counter()
            audio = graph.forward(mel)
            elapsed = time.perf_counter() - t0
            if i >= warmup:
                times.append(elapsed)
    n_samples = min(len(audio), target_samples)
    rtfs = sorted(t / (n_samples / SAMPLE_RATE) for t in times)
    q1, med, q3 = np.percentile(rtfs, [25, 50, 75])
    return BenchResult(
        arch=arch,
        rtf_median=float(med),
        rtf_iqr=float(q3 - q1),
        rtf_samples=rtfs,
        params=graph.count_params(),
        duration=duration,
        warmup=warmup,
        repeats=repeats,
        threads=threads,
    )
