import { describe, expect, it } from "vitest";

import {
  besselI0,
  firwinLowpass,
  hannPeriodic,
  melFilterbank,
  pqmfAnalysis,
  pqmfBank,
  pqmfSynthesis,
  stft,
} from "../src/dsp.js";
import { Rng } from "../src/rng.js";

describe("stft", () => {
  it("uses the periodic Hann window convention", () => {
    const w = hannPeriodic(8);
    expect(w[0]).toBe(0);
    expect(w[4]).toBeCloseTo(1, 12);
    // periodic: w[k] == w[N-k] for k > 0, and w[N] would wrap to w[0]
    expect(w[1]).toBeCloseTo(w[7], 12);
  });

  it("frame count is floor(len/hop) + 1", () => {
    const x = new Rng(1).normalVec(4096);
    const s = stft(x, 1024, 256);
    expect(s.magnitude.length).toBe(513);
    expect(s.magnitude[0].length).toBe(17);
  });

  it("concentrates a bin-centered sine around its bin", () => {
    const fft = 1024;
    const bin = 40;
    const x = new Array<number>(4096);
    for (let n = 0; n < x.length; n++) x[n] = Math.sin((2 * Math.PI * bin * n) / fft);
    const s = stft(x, fft, 256);
    const t = 8; // an interior frame
    let total = 0;
    for (let f = 0; f < s.magnitude.length; f++) total += s.magnitude[f][t] ** 2;
    const near = s.magnitude[bin - 1][t] ** 2 + s.magnitude[bin][t] ** 2 + s.magnitude[bin + 1][t] ** 2;
    expect(near / total).toBeGreaterThan(0.99);
  });
});

describe("melFilterbank", () => {
  it("has the expected shape and peak height 1", () => {
    const fb = melFilterbank(22050, 1024, 80, 0, 8000);
    expect(fb.length).toBe(80);
    expect(fb[0].length).toBe(513);
    let peak = 0;
    for (const row of fb) for (const v of row) peak = Math.max(peak, v);
    expect(peak).toBeLessThanOrEqual(1 + 1e-12);
    expect(peak).toBeGreaterThan(0.99);
  });

  it("every band has support and stays below fmax", () => {
    const sr = 22050;
    const fb = melFilterbank(sr, 1024, 80, 0, 8000);
    for (const row of fb) {
      const energy = row.reduce((a, b) => a + b, 0);
      expect(energy).toBeGreaterThan(0);
    }
    const lastBinBelow = Math.ceil((8000 * 1024) / sr);
    for (const row of fb) {
      for (let j = lastBinBelow + 1; j < row.length; j++) expect(row[j]).toBe(0);
    }
  });
});

describe("lowpass prototype", () => {
  it("besselI0 matches known values", () => {
    expect(besselI0(0)).toBe(1);
    expect(besselI0(1)).toBeCloseTo(1.2660658777520084, 12);
    expect(besselI0(9)).toBeCloseTo(1093.5883545113745, 6);
  });

  it("has unit DC gain and even symmetry", () => {
    const h = firwinLowpass(63, 0.142, 9.0);
    const dc = h.reduce((a, b) => a + b, 0);
    expect(dc).toBeCloseTo(1.0, 12);
    for (let n = 0; n < 63; n++) expect(h[n]).toBeCloseTo(h[62 - n], 14);
  });

  it("attenuates near Nyquist", () => {
    const h = firwinLowpass(63, 0.142, 9.0);
    let re = 0;
    for (let n = 0; n < h.length; n++) re += h[n] * Math.cos(Math.PI * n);
    expect(Math.abs(re)).toBeLessThan(1e-4);
  });
});

describe("pqmf", () => {
  it("round trip error stays at or below -35 dB", () => {
    const bank = pqmfBank();
    const x = new Rng(99).normalVec(8192);
    const y = pqmfSynthesis(bank, pqmfAnalysis(bank, x));
    let errSq = 0;
    let refSq = 0;
    for (let i = 100; i < x.length - 100; i++) {
      errSq += (y[i] - x[i]) ** 2;
      refSq += x[i] ** 2;
    }
    const db = 10 * Math.log10(errSq / refSq);
    expect(db).toBeLessThanOrEqual(-35);
  });

  it("analysis is critically sampled", () => {
    const bank = pqmfBank();
    const sub = pqmfAnalysis(bank, new Rng(4).normalVec(1024));
    expect(sub.length).toBe(4);
    expect(sub[0].length).toBe(256);
    const y = pqmfSynthesis(bank, sub);
    expect(y.length).toBe(1024);
  });
});
