/**
 * Emits the committed golden vectors into ../vectors:
 *
 * - conv1d / conv_transpose1d / conv2d / conv_transpose2d: 100 seeded cases
 *   each, with inputs, weights, biases and expected outputs in one tensor
 *   container per primitive (hyperparameters live in the manifest),
 * - stft: magnitude/phase for a sine centered on a bin and for seeded noise,
 * - mel_filterbank: the 80-band HTK filterbank matrix as a mel file,
 * - pqmf: the lowpass prototype and the modulated analysis/synthesis banks,
 * - manifest.json: case list plus the tolerances consumers should apply.
 *
 * Inputs are rounded to float32 before the expected outputs are computed,
 * so the stored inputs are bit-identical to what the reference saw.
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { conv1d, conv2d, convTranspose1d, convTranspose2d } from "./conv.js";
import { melFilterbank, pqmfBank, stft } from "./dsp.js";
import { Tensor, toTensor, writeMel, writeTensors } from "./format.js";
import { Rng } from "./rng.js";

const OUT_DIR = join(dirname(fileURLToPath(import.meta.url)), "..", "vectors");

const N_CASES = 100;
const FFT_SIZE = 1024;
const HOP = 256;
const SIGNAL_LEN = 4096;
const SAMPLE_RATE = 22050;
const N_MELS = 80;

interface Conv1dCase {
  name: string;
  stride: number;
  padding: number;
  dilation: number;
}

interface Conv2dCase {
  name: string;
  stride: [number, number];
  padding: [number, number];
  dilation: [number, number];
}

function caseName(i: number): string {
  return `case${String(i).padStart(3, "0")}`;
}

function normalTensor3(rng: Rng, a: number, b: number, c: number): number[][][] {
  const out: number[][][] = [];
  for (let i = 0; i < a; i++) out.push(rng.normalMat(b, c));
  return out;
}

function normalTensor4(rng: Rng, a: number, b: number, c: number, d: number): number[][][][] {
  const out: number[][][][] = [];
  for (let i = 0; i < a; i++) out.push(normalTensor3(rng, b, c, d));
  return out;
}

function emitConv1dCases(seed: number, transposed: boolean): [Conv1dCase[], [string, Tensor][]] {
  const rng = new Rng(seed);
  const cases: Conv1dCase[] = [];
  const entries: [string, Tensor][] = [];
  while (cases.length < N_CASES) {
    const cIn = rng.int(1, 5);
    const cOut = rng.int(1, 5);
    const k = rng.int(1, 6);
    const s = rng.int(1, 4);
    const d = rng.int(1, 3);
    const pad = transposed
      ? rng.int(0, Math.min(d * (k - 1), 2) + 1)
      : rng.int(0, 4);
    const t = rng.int(d * (k - 1) + 1, 20);
    if (transposed && (t - 1) * s - 2 * pad + d * (k - 1) + 1 < 1) continue;
    const x = rng.normalMat(cIn, t);
    const w = normalTensor3(rng, cOut, cIn, k);
    const b = rng.normalVec(cOut);
    const y = transposed ? convTranspose1d(x, w, b, s, pad, d) : conv1d(x, w, b, s, pad, d);
    const name = caseName(cases.length);
    cases.push({ name, stride: s, padding: pad, dilation: d });
    entries.push([`${name}.input`, toTensor(x)]);
    entries.push([`${name}.weight`, toTensor(w)]);
    entries.push([`${name}.bias`, toTensor(b)]);
    entries.push([`${name}.expected`, toTensor(y)]);
  }
  return [cases, entries];
}

function emitConv2dCases(seed: number, transposed: boolean): [Conv2dCase[], [string, Tensor][]] {
  const rng = new Rng(seed);
  const cases: Conv2dCase[] = [];
  const entries: [string, Tensor][] = [];
  while (cases.length < N_CASES) {
    const cIn = rng.int(1, 5);
    const cOut = rng.int(1, 5);
    const kh = rng.int(1, 4);
    const kw = rng.int(1, 4);
    const stride: [number, number] = [rng.int(1, 3), rng.int(1, 3)];
    const dil: [number, number] = [rng.int(1, 3), rng.int(1, 3)];
    const pad: [number, number] = transposed
      ? [rng.int(0, Math.min(dil[0] * (kh - 1), 1) + 1), rng.int(0, Math.min(dil[1] * (kw - 1), 1) + 1)]
      : [rng.int(0, 3), rng.int(0, 3)];
    const h = rng.int(dil[0] * (kh - 1) + 1, 10);
    const wid = rng.int(dil[1] * (kw - 1) + 1, 10);
    if (transposed) {
      const hOut = (h - 1) * stride[0] - 2 * pad[0] + dil[0] * (kh - 1) + 1;
      const wOut = (wid - 1) * stride[1] - 2 * pad[1] + dil[1] * (kw - 1) + 1;
      if (hOut < 1 || wOut < 1) continue;
    }
    const x = normalTensor3(rng, cIn, h, wid);
    const w = normalTensor4(rng, cOut, cIn, kh, kw);
    const b = rng.normalVec(cOut);
    const y = transposed
      ? convTranspose2d(x, w, b, stride, pad, dil)
      : conv2d(x, w, b, stride, pad, dil);
    const name = caseName(cases.length);
    cases.push({ name, stride, padding: pad, dilation: dil });
    entries.push([`${name}.input`, toTensor(x)]);
    entries.push([`${name}.weight`, toTensor(w)]);
    entries.push([`${name}.bias`, toTensor(b)]);
    entries.push([`${name}.expected`, toTensor(y)]);
  }
  return [cases, entries];
}

function sineSignal(binIndex: number): number[] {
  const x = new Array<number>(SIGNAL_LEN);
  for (let n = 0; n < SIGNAL_LEN; n++) {
    x[n] = Math.fround(Math.sin((2.0 * Math.PI * binIndex * n) / FFT_SIZE));
  }
  return x;
}

function emitStft(): [string, Tensor][] {
  const entries: [string, Tensor][] = [];
  const signals: [string, number[]][] = [
    ["sine_bin40", sineSignal(40)],
    ["noise_seed11", new Rng(11).normalVec(SIGNAL_LEN)],
  ];
  for (const [name, x] of signals) {
    const s = stft(x, FFT_SIZE, HOP);
    entries.push([`${name}.signal`, toTensor(x)]);
    entries.push([`${name}.magnitude`, toTensor(s.magnitude)]);
    entries.push([`${name}.phase`, toTensor(s.phase)]);
  }
  return entries;
}

function main(): void {
  mkdirSync(OUT_DIR, { recursive: true });

  const [c1Cases, c1Entries] = emitConv1dCases(1001, false);
  const [ct1Cases, ct1Entries] = emitConv1dCases(1002, true);
  const [c2Cases, c2Entries] = emitConv2dCases(1003, false);
  const [ct2Cases, ct2Entries] = emitConv2dCases(1004, true);
  writeTensors(join(OUT_DIR, "conv1d.isn2"), "golden:conv1d", c1Entries);
  writeTensors(join(OUT_DIR, "conv_transpose1d.isn2"), "golden:conv_transpose1d", ct1Entries);
  writeTensors(join(OUT_DIR, "conv2d.isn2"), "golden:conv2d", c2Entries);
  writeTensors(join(OUT_DIR, "conv_transpose2d.isn2"), "golden:conv_transpose2d", ct2Entries);

  writeTensors(join(OUT_DIR, "stft.isn2"), "golden:stft", emitStft());

  const fb = melFilterbank(SAMPLE_RATE, FFT_SIZE, N_MELS, 0.0, 8000.0);
  writeMel(join(OUT_DIR, "mel_filterbank.mel"), fb, SAMPLE_RATE);

  const bank = pqmfBank();
  writeTensors(join(OUT_DIR, "pqmf.isn2"), "golden:pqmf", [
    ["prototype", toTensor(bank.prototype)],
    ["analysis", toTensor(bank.analysis)],
    ["synthesis", toTensor(bank.synthesis)],
  ]);

  const manifest = {
    version: 1,
    tolerances: {
      conv_rel: 1e-5,
      mel_filterbank_abs: 1e-4,
      stft_magnitude_rel: 1e-4,
      pqmf_abs: 1e-6,
    },
    conv: {
      conv1d: { file: "conv1d.isn2", cases: c1Cases },
      conv_transpose1d: { file: "conv_transpose1d.isn2", cases: ct1Cases },
      conv2d: { file: "conv2d.isn2", cases: c2Cases },
      conv_transpose2d: { file: "conv_transpose2d.isn2", cases: ct2Cases },
    },
    stft: {
      file: "stft.isn2",
      fft_size: FFT_SIZE,
      hop: HOP,
      win_length: FFT_SIZE,
      window: "hann",
      signals: ["sine_bin40", "noise_seed11"],
    },
    mel_filterbank: {
      file: "mel_filterbank.mel",
      sr: SAMPLE_RATE,
      n_fft: FFT_SIZE,
      n_mels: N_MELS,
      fmin: 0.0,
      fmax: 8000.0,
    },
    pqmf: { file: "pqmf.isn2", bands: 4, taps: 62, cutoff: 0.142, beta: 9.0 },
  };
  writeFileSync(join(OUT_DIR, "manifest.json"), JSON.stringify(manifest, null, 2) + "\n");
  console.log(`wrote vectors to ${OUT_DIR}`);
}

main();
