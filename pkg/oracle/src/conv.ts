/**
 * Naive reference convolutions over nested number arrays.
 *
 * Everything is computed with explicit loops in double precision. These are
 * the source of truth for the emitted golden vectors, so clarity beats
 * speed: no vectorization, no restructuring of the sums.
 *
 * Conventions (shared with the consumer of the vectors):
 * - convolution means cross-correlation (no kernel flip),
 * - padding is zero padding,
 * - weights are laid out [out_channels][in_channels][kernel...] for the
 *   forward and the transposed direction alike.
 */

export function conv1d(
  x: number[][], // [cIn][t]
  w: number[][][], // [cOut][cIn][k]
  b: number[], // [cOut]
  stride: number,
  pad: number,
  dil: number
): number[][] {
  const cIn = x.length;
  const t = x[0].length;
  const cOut = w.length;
  const k = w[0][0].length;
  const tOut = Math.floor((t + 2 * pad - dil * (k - 1) - 1) / stride) + 1;
  const out: number[][] = [];
  for (let o = 0; o < cOut; o++) {
    const row = new Array<number>(tOut);
    for (let j = 0; j < tOut; j++) {
      let acc = b[o];
      for (let i = 0; i < cIn; i++) {
        for (let q = 0; q < k; q++) {
          const src = j * stride + q * dil - pad;
          if (src >= 0 && src < t) acc += x[i][src] * w[o][i][q];
        }
      }
      row[j] = acc;
    }
    out.push(row);
  }
  return out;
}

export function convTranspose1d(
  x: number[][], // [cIn][t]
  w: number[][][], // [cOut][cIn][k]
  b: number[],
  stride: number,
  pad: number,
  dil: number
): number[][] {
  const cIn = x.length;
  const t = x[0].length;
  const cOut = w.length;
  const k = w[0][0].length;
  const tOut = (t - 1) * stride - 2 * pad + dil * (k - 1) + 1;
  const out: number[][] = [];
  for (let o = 0; o < cOut; o++) out.push(new Array<number>(tOut).fill(b[o]));
  for (let i = 0; i < cIn; i++) {
    for (let j = 0; j < t; j++) {
      for (let q = 0; q < k; q++) {
        const dst = j * stride + q * dil - pad;
        if (dst < 0 || dst >= tOut) continue;
        for (let o = 0; o < cOut; o++) out[o][dst] += x[i][j] * w[o][i][q];
      }
    }
  }
  return out;
}

export function conv2d(
  x: number[][][], // [cIn][h][w]
  w: number[][][][], // [cOut][cIn][kh][kw]
  b: number[],
  stride: [number, number],
  pad: [number, number],
  dil: [number, number]
): number[][][] {
  const cIn = x.length;
  const h = x[0].length;
  const wid = x[0][0].length;
  const cOut = w.length;
  const kh = w[0][0].length;
  const kw = w[0][0][0].length;
  const hOut = Math.floor((h + 2 * pad[0] - dil[0] * (kh - 1) - 1) / stride[0]) + 1;
  const wOut = Math.floor((wid + 2 * pad[1] - dil[1] * (kw - 1) - 1) / stride[1]) + 1;
  const out: number[][][] = [];
  for (let o = 0; o < cOut; o++) {
    const plane: number[][] = [];
    for (let r = 0; r < hOut; r++) {
      const row = new Array<number>(wOut);
      for (let c = 0; c < wOut; c++) {
        let acc = b[o];
        for (let i = 0; i < cIn; i++) {
          for (let p = 0; p < kh; p++) {
            const sr = r * stride[0] + p * dil[0] - pad[0];
            if (sr < 0 || sr >= h) continue;
            for (let q = 0; q < kw; q++) {
              const sc = c * stride[1] + q * dil[1] - pad[1];
              if (sc >= 0 && sc < wid) acc += x[i][sr][sc] * w[o][i][p][q];
            }
          }
        }
        row[c] = acc;
      }
      plane.push(row);
    }
    out.push(plane);
  }
  return out;
}

export function convTranspose2d(
  x: number[][][], // [cIn][h][w]
  w: number[][][][], // [cOut][cIn][kh][kw]
  b: number[],
  stride: [number, number],
  pad: [number, number],
  dil: [number, number]
): number[][][] {
  const cIn = x.length;
  const h = x[0].length;
  const wid = x[0][0].length;
  const cOut = w.length;
  const kh = w[0][0].length;
  const kw = w[0][0][0].length;
  const hOut = (h - 1) * stride[0] - 2 * pad[0] + dil[0] * (kh - 1) + 1;
  const wOut = (wid - 1) * stride[1] - 2 * pad[1] + dil[1] * (kw - 1) + 1;
  const out: number[][][] = [];
  for (let o = 0; o < cOut; o++) {
    const plane: number[][] = [];
    for (let r = 0; r < hOut; r++) plane.push(new Array<number>(wOut).fill(b[o]));
    out.push(plane);
  }
  for (let i = 0; i < cIn; i++) {
    for (let r = 0; r < h; r++) {
      for (let c = 0; c < wid; c++) {
        for (let p = 0; p < kh; p++) {
          const dr = r * stride[0] + p * dil[0] - pad[0];
          if (dr < 0 || dr >= hOut) continue;
          for (let q = 0; q < kw; q++) {
            const dc = c * stride[1] + q * dil[1] - pad[1];
            if (dc < 0 || dc >= wOut) continue;
            for (let o = 0; o < cOut; o++) out[o][dr][dc] += x[i][r][c] * w[o][i][p][q];
          }
        }
      }
    }
  }
  return out;
}
