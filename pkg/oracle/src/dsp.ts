/**
 * Naive reference DSP: centered STFT via a direct DFT, HTK mel filterbank,
 * Kaiser-windowed lowpass design, and a cosine-modulated pseudo-QMF bank.
 *
 * All arithmetic is double precision. The STFT deliberately avoids any FFT:
 * each frame is transformed by the O(n^2) definition so the reference shares
 * no code path with the implementation it validates.
 */

/** Periodic Hann window of the given length. */
export function hannPeriodic(length: number): number[] {
  const w = new Array<number>(length);
  for (let n = 0; n < length; n++) {
    w[n] = 0.5 - 0.5 * Math.cos((2.0 * Math.PI * n) / length);
  }
  return w;
}

/** Map an index in [-pad, n + pad) into [0, n) by edge reflection. */
function reflectIndex(i: number, n: number): number {
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * n - 2 - i;
  }
  return i;
}

export interface Stft {
  magnitude: number[][]; // [freqBins][frames]
  phase: number[][]; // [freqBins][frames]
}

/**
 * Centered STFT: reflect-pad fftSize/2 on each end, frames start every hop
 * samples, frame count = floor(len/hop) + 1, periodic Hann analysis window.
 */
export function stft(x: number[], fftSize: number, hop: number): Stft {
  const nFrames = Math.floor(x.length / hop) + 1;
  const half = fftSize / 2;
  const bins = half + 1;
  const win = hannPeriodic(fftSize);
  const magnitude: number[][] = [];
  const phase: number[][] = [];
  for (let f = 0; f < bins; f++) {
    magnitude.push(new Array<number>(nFrames));
    phase.push(new Array<number>(nFrames));
  }
  const frame = new Array<number>(fftSize);
  for (let t = 0; t < nFrames; t++) {
    for (let n = 0; n < fftSize; n++) {
      frame[n] = x[reflectIndex(t * hop + n - half, x.length)] * win[n];
    }
    for (let f = 0; f < bins; f++) {
      let re = 0.0;
      let im = 0.0;
      const step = (-2.0 * Math.PI * f) / fftSize;
      for (let n = 0; n < fftSize; n++) {
        re += frame[n] * Math.cos(step * n);
        im += frame[n] * Math.sin(step * n);
      }
      magnitude[f][t] = Math.hypot(re, im);
      phase[f][t] = Math.atan2(im, re);
    }
  }
  return { magnitude, phase };
}

export function hzToMel(f: number): number {
  return 2595.0 * Math.log10(1.0 + f / 700.0);
}

export function melToHz(m: number): number {
  return 700.0 * (Math.pow(10.0, m / 2595.0) - 1.0);
}

/** Triangular HTK-mel filterbank [nMels][nFft/2 + 1] with peak height 1. */
export function melFilterbank(
  sr: number,
  nFft: number,
  nMels: number,
  fmin: number,
  fmax: number
): number[][] {
  const loMel = hzToMel(fmin);
  const hiMel = hzToMel(fmax);
  const pts = new Array<number>(nMels + 2);
  for (let i = 0; i < nMels + 2; i++) {
    pts[i] = melToHz(loMel + ((hiMel - loMel) * i) / (nMels + 1));
  }
  const bins = Math.floor(nFft / 2) + 1;
  const fb: number[][] = [];
  for (let m = 0; m < nMels; m++) {
    const row = new Array<number>(bins);
    for (let j = 0; j < bins; j++) {
      const f = (j * sr) / nFft;
      const lower = (f - pts[m]) / (pts[m + 1] - pts[m]);
      const upper = (pts[m + 2] - f) / (pts[m + 2] - pts[m + 1]);
      row[j] = Math.max(0.0, Math.min(lower, upper));
    }
    fb.push(row);
  }
  return fb;
}

/** Modified Bessel function of the first kind, order zero (power series). */
export function besselI0(x: number): number {
  let sum = 1.0;
  let term = 1.0;
  for (let k = 1; k < 200; k++) {
    const t = x / (2 * k);
    term *= t * t;
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return sum;
}

/** Symmetric Kaiser window of the given length and shape parameter. */
export function kaiserWindow(length: number, beta: number): number[] {
  const denom = besselI0(beta);
  const alpha = (length - 1) / 2.0;
  const w = new Array<number>(length);
  for (let n = 0; n < length; n++) {
    const r = (n - alpha) / alpha;
    w[n] = besselI0(beta * Math.sqrt(Math.max(0.0, 1.0 - r * r))) / denom;
  }
  return w;
}

function sinc(x: number): number {
  if (x === 0.0) return 1.0;
  return Math.sin(Math.PI * x) / (Math.PI * x);
}

/**
 * Kaiser-windowed lowpass FIR with DC gain normalized to exactly one.
 * Cutoff is normalized so 1.0 is the Nyquist frequency.
 */
export function firwinLowpass(numtaps: number, cutoff: number, beta: number): number[] {
  const win = kaiserWindow(numtaps, beta);
  const alpha = (numtaps - 1) / 2.0;
  const h = new Array<number>(numtaps);
  let dc = 0.0;
  for (let n = 0; n < numtaps; n++) {
    h[n] = cutoff * sinc(cutoff * (n - alpha)) * win[n];
    dc += h[n];
  }
  for (let n = 0; n < numtaps; n++) h[n] /= dc;
  return h;
}

export interface PqmfBank {
  bands: number;
  taps: number;
  prototype: number[];
  analysis: number[][]; // [bands][taps + 1]
  synthesis: number[][];
}

/** Cosine-modulated pseudo-QMF bank built on the Kaiser lowpass prototype. */
export function pqmfBank(
  bands = 4,
  taps = 62,
  cutoff = 0.142,
  beta = 9.0
): PqmfBank {
  const proto = firwinLowpass(taps + 1, cutoff, beta);
  const analysis: number[][] = [];
  const synthesis: number[][] = [];
  for (let k = 0; k < bands; k++) {
    const a = new Array<number>(taps + 1);
    const s = new Array<number>(taps + 1);
    const shift = (k % 2 === 0 ? 1.0 : -1.0) * (Math.PI / 4);
    for (let n = 0; n <= taps; n++) {
      const phase = ((2 * k + 1) * (Math.PI / (2 * bands))) * (n - taps / 2);
      a[n] = 2.0 * proto[n] * Math.cos(phase + shift);
      s[n] = 2.0 * proto[n] * Math.cos(phase - shift);
    }
    analysis.push(a);
    synthesis.push(s);
  }
  return { bands, taps, prototype: proto, analysis, synthesis };
}

/** Correlate x (padded taps/2 each side) with h, same-length output. */
function filterCentered(x: number[], h: number[]): number[] {
  const taps = h.length - 1;
  const pad = taps / 2;
  const out = new Array<number>(x.length);
  for (let i = 0; i < x.length; i++) {
    let acc = 0.0;
    for (let q = 0; q <= taps; q++) {
      const src = i + q - pad;
      if (src >= 0 && src < x.length) acc += x[src] * h[q];
    }
    out[i] = acc;
  }
  return out;
}

/** Split audio of length bands*t into critically sampled sub-bands [bands][t]. */
export function pqmfAnalysis(bank: PqmfBank, x: number[]): number[][] {
  const sub: number[][] = [];
  for (const h of bank.analysis) {
    const full = filterCentered(x, h);
    const row: number[] = [];
    for (let i = 0; i < full.length; i += bank.bands) row.push(full[i]);
    sub.push(row);
  }
  return sub;
}

/** Merge sub-bands [bands][t] back into audio of exactly bands*t samples. */
export function pqmfSynthesis(bank: PqmfBank, sub: number[][]): number[] {
  const b = bank.bands;
  const t = sub[0].length;
  const out = new Array<number>(b * t).fill(0.0);
  for (let k = 0; k < b; k++) {
    const up = new Array<number>(b * t).fill(0.0);
    for (let i = 0; i < t; i++) up[i * b] = sub[k][i] * b;
    const filtered = filterCentered(up, bank.synthesis[k]);
    for (let i = 0; i < out.length; i++) out[i] += filtered[i];
  }
  return out;
}
