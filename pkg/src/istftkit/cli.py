"""Command-line entry point: synthesis, RTF benchmarking, parameter
reporting, and an embedded self-test."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import artifact_io, dsp
from .bench import SAMPLE_RATE, run_bench
from .model import NAMED_VARIANTS, build, default_hyper, init_random, parse_arch
from .nn import ConvParams, conv1d


def _ratio_vs_v2(params: int) -> float:
    return params / build(parse_arch("hifigan-v2")).count_params()


def cmd_synth(args) -> int:
    mel, sr = artifact_io.read_mel(args.mel)
    if mel.shape[0] != 80:
        raise artifact_io.FormatError(f"synthesis expects 80 mel bins, got {mel.shape[0]}")
    if args.ckpt:
        g = artifact_io.load_checkpoint(args.ckpt)
        if g.arch.name.lower() != args.arch.lower():
            print(
                f"error: checkpoint was built for {g.arch.name!r}, not {args.arch!r}",
                file=sys.stderr,
            )
            return 1
    else:
        g = init_random(build(parse_arch(args.arch)), args.seed)
    audio = g.forward(mel)
    artifact_io.write_wav(audio, sr, args.out)
    print(f"wrote {args.out}: {len(audio)} samples ({len(audio) / sr:.3f} s), "
          f"peak {np.max(np.abs(audio)):.4f}")
    return 0


def cmd_bench(args) -> int:
    results = [
        run_bench(arch, args.duration, args.warmup, args.repeats, args.threads, args.seed)
        for arch in args.arch
    ]
    ref = build(parse_arch("hifigan-v2")).count_params()
    payload = [
        {
            "arch": r.arch,
            "rtf_median": r.rtf_median,
            "rtf_iqr": r.rtf_iqr,
            "params": r.params,
            "ratio_vs_v2": r.params / ref,
        }
        for r in results
    ]
    if args.json:
        print(json.dumps(payload[0] if len(payload) == 1 else payload, indent=2))
    else:
        for r in results:
            print(
                f"{r.arch}: RTF median {r.rtf_median:.4f} (IQR {r.rtf_iqr:.4f}) "
                f"over {r.repeats} repeats after {r.warmup} warmup, "
                f"{r.threads} thread(s), {r.params} params"
            )
    if args.report_dir:
        from .report import write_bench_report

        for p in write_bench_report(results, args.report_dir, ref):
            print(f"report: {p}")
    return 0


def cmd_params(args) -> int:
    g = build(parse_arch(args.arch))
    n = g.count_params()
    ratio = _ratio_vs_v2(n)
    if args.json:
        print(json.dumps({"arch": args.arch, "params": n, "ratio_vs_v2": ratio}, indent=2))
    else:
        print(f"{args.arch}: {n} parameters ({n / 1e6:.2f}M, {100 * ratio:.0f}% of hifigan-v2)")
    return 0


def _naive_conv1d(x, w, b, stride, pad, dil):
    c_out, c_in, k = w.shape
    xp = np.pad(x, ((0, 0), (pad, pad))).astype(np.float64)
    t_out = (x.shape[1] + 2 * pad - dil * (k - 1) - 1) // stride + 1
    out = np.zeros((c_out, t_out))
    for o in range(c_out):
        for t in range(t_out):
            acc = 0.0
            for i in range(c_in):
                for j in range(k):
                    acc += w[o, i, j] * xp[i, t * stride + j * dil]
            out[o, t] = acc + b[o]
    return out


def cmd_selftest(args) -> int:
    failures = 0

    def suite(name, fn):
        nonlocal failures
        try:
            fn()
            print(f"[pass] {name}")
        except Exception as e:  # noqa: BLE001 - report and continue
            failures += 1
            print(f"[FAIL] {name}: {e}")

    def conv_oracle():
        rng = np.random.default_rng(11)
        for _ in range(10):
            c_in, c_out, t, k = 3, 4, 17, 5
            x = rng.standard_normal((c_in, t)).astype(np.float32)
            p = ConvParams(c_in, c_out, (k,), (2,), (4,), (2,),
                           rng.standard_normal((c_out, c_in, k)).astype(np.float32),
                           rng.standard_normal(c_out).astype(np.float32))
            got = conv1d(x, p)
            want = _naive_conv1d(x, p.weight, p.bias, 2, 4, 2)
            if args.inject_fault:
                want = want + 1.0
            err = np.max(np.abs(got - want)) / max(np.max(np.abs(want)), 1e-12)
            assert err < 1e-5, f"relative error {err:.2e}"

    def istft_round_trip():
        rng = np.random.default_rng(5)
        cfg = dsp.StftConfig(256, 64, 256)
        x = rng.standard_normal(4096).astype(np.float32)
        y = dsp.istft(dsp.stft(x, cfg), cfg, len(x))
        interior = slice(cfg.fft_size // 2, -cfg.fft_size // 2)
        err = np.max(np.abs(y[interior] - x[interior])) / np.max(np.abs(x))
        assert err < 1e-6, f"round-trip error {err:.2e}"

    def budget_checks():
        for name in NAMED_VARIANTS:
            parse_arch(name)
        for bad in ("C8C8I8", "C8C8", "C3C3I4", "X99"):
            try:
                parse_arch(bad)
            except Exception:
                continue
            raise AssertionError(f"{bad!r} unexpectedly accepted")

    suite("conv-oracle", conv_oracle)
    suite("istft-round-trip", istft_round_trip)
    suite("arch-budget", budget_checks)
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="istftkit",
                                 description="CPU vocoder inference and benchmarking")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("synth", help="synthesize a waveform from a MEL0 file")
    sp.add_argument("--arch", required=True)
    sp.add_argument("--ckpt")
    sp.add_argument("--mel", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(fn=cmd_synth)

    bp = sub.add_parser("bench", help="measure the real-time factor")
    bp.add_argument("--arch", required=True, nargs="+")
    bp.add_argument("--duration", type=float, default=1.0)
    bp.add_argument("--warmup", type=int, default=5)
    bp.add_argument("--repeats", type=int, default=30)
    bp.add_argument("--threads", type=int, default=1)
    bp.add_argument("--seed", type=int, default=0)
    bp.add_argument("--json", action="store_true")
    bp.add_argument("--report-dir", help="write bench.csv and bench.png here")
    bp.set_defaults(fn=cmd_bench)

    pp = sub.add_parser("params", help="report parameter count vs hifigan-v2")
    pp.add_argument("--arch", required=True)
    pp.add_argument("--json", action="store_true")
    pp.set_defaults(fn=cmd_params)

    st = sub.add_parser("selftest", help="run the embedded invariant suite")
    st.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    st.set_defaults(fn=cmd_selftest)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (artifact_io.FormatError, dsp.DspError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
