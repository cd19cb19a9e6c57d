/**
 * Deterministic pseudo-random source for vector generation.
 *
 * Uses a 32-bit splitmix-style state update so the same seed always yields
 * the same stream on every platform. Samples that end up in emitted files
 * are rounded through Math.fround so the stored float32 values are exactly
 * what the generator computed with.
 */

export class Rng {
  private state: number;

  constructor(seed: number) {
    this.state = seed >>> 0;
  }

  /** Uniform float in [0, 1). */
  uniform(): number {
    this.state = (this.state + 0x9e3779b9) >>> 0;
    let z = this.state;
    z ^= z >>> 16;
    z = Math.imul(z, 0x21f0aaad);
    z ^= z >>> 15;
    z = Math.imul(z, 0x735a2d97);
    z ^= z >>> 15;
    return (z >>> 0) / 4294967296;
  }

  /** Integer in [lo, hi), uniform. */
  int(lo: number, hi: number): number {
    return lo + Math.floor(this.uniform() * (hi - lo));
  }

  /** Standard normal via Box-Muller (one value per call, no caching). */
  normal(): number {
    let u = this.uniform();
    while (u === 0) u = this.uniform();
    const v = this.uniform();
    return Math.sqrt(-2.0 * Math.log(u)) * Math.cos(2.0 * Math.PI * v);
  }

  /** Standard-normal vector pre-rounded to float32 precision. */
  normalVec(n: number): number[] {
    const out = new Array<number>(n);
    for (let i = 0; i < n; i++) out[i] = Math.fround(this.normal());
    return out;
  }

  /** [rows][cols] standard-normal matrix pre-rounded to float32 precision. */
  normalMat(rows: number, cols: number): number[][] {
    const out = new Array<number[]>(rows);
    for (let r = 0; r < rows; r++) out[r] = this.normalVec(cols);
    return out;
  }
}
