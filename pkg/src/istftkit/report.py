"""Benchmark report rendering: delimited output plus matplotlib figures."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .bench import BenchResult


def write_bench_report(results: list[BenchResult], out_dir, ref_params: int | None = None):
    """Write bench.csv and an RTF/params figure into out_dir.

    Returns the paths of the files written.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "bench.csv"
    with open(csv_path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["arch", "rtf_median", "rtf_iqr", "params", "ratio_vs_v2",
                    "duration_s", "warmup", "repeats", "threads"])
        for r in results:
            ratio = r.params / ref_params if ref_params else ""
            w.writerow([r.arch, f"{r.rtf_median:.6f}", f"{r.rtf_iqr:.6f}", r.params,
                        f"{ratio:.4f}" if ratio != "" else "",
                        r.duration, r.warmup, r.repeats, r.threads])

    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    names = [r.arch for r in results]
    med = [r.rtf_median for r in results]
    err = [r.rtf_iqr / 2 for r in results]
    axes[0].bar(names, med, yerr=err, color="#4477aa")
    axes[0].set_ylabel("RTF (median, lower is faster)")
    axes[0].tick_params(axis="x", rotation=30)
    axes[1].bar(names, [r.params / 1e6 for r in results], color="#cc6677")
    axes[1].set_ylabel("Parameters (M)")
    axes[1].tick_params(axis="x", rotation=30)
    fig.tight_layout()
    fig_path = out / "bench.png"
    fig.savefig(fig_path, dpi=150)
    plt.close(fig)
    return [csv_path, fig_path]
