/**
 * Binary writers and readers for the tensor-container and mel-file formats
 * consumed by the istftkit test suite. All fields are little-endian.
 *
 * Tensor container: magic "ISN2", u32 version, length-prefixed label string,
 * u32 entry count, then per entry a length-prefixed name, u32 rank, u32 dims
 * and raw float32 data. Mel file: magic "MEL0", u32 sample rate, u32 rows,
 * u32 cols, raw float32 data.
 */

import { readFileSync, writeFileSync } from "node:fs";

const TENSOR_MAGIC = "ISN2";
const TENSOR_VERSION = 1;
const MEL_MAGIC = "MEL0";

export interface Tensor {
  shape: number[];
  data: Float32Array;
}

/** Flatten a (possibly nested) number array into a float32 tensor. */
export function toTensor(value: number[] | number[][] | number[][][] | number[][][][]): Tensor {
  const shape: number[] = [];
  let probe: unknown = value;
  while (Array.isArray(probe)) {
    shape.push(probe.length);
    probe = probe[0];
  }
  const flat: number[] = [];
  const walk = (v: unknown): void => {
    if (Array.isArray(v)) {
      for (const item of v) walk(item);
    } else {
      flat.push(v as number);
    }
  };
  walk(value);
  return { shape, data: Float32Array.from(flat) };
}

class ByteWriter {
  private chunks: Buffer[] = [];

  ascii(s: string): void {
    this.chunks.push(Buffer.from(s, "ascii"));
  }

  u32(v: number): void {
    const b = Buffer.alloc(4);
    b.writeUInt32LE(v >>> 0);
    this.chunks.push(b);
  }

  str(s: string): void {
    const raw = Buffer.from(s, "utf8");
    this.u32(raw.length);
    this.chunks.push(raw);
  }

  f32Array(data: Float32Array): void {
    const b = Buffer.alloc(4 * data.length);
    for (let i = 0; i < data.length; i++) b.writeFloatLE(data[i], 4 * i);
    this.chunks.push(b);
  }

  bytes(): Buffer {
    return Buffer.concat(this.chunks);
  }
}

export function writeTensors(path: string, label: string, entries: [string, Tensor][]): void {
  const names = new Set(entries.map(([n]) => n));
  if (names.size !== entries.length) throw new Error("duplicate tensor names");
  const w = new ByteWriter();
  w.ascii(TENSOR_MAGIC);
  w.u32(TENSOR_VERSION);
  w.str(label);
  w.u32(entries.length);
  for (const [name, t] of entries) {
    const count = t.shape.reduce((a, b) => a * b, 1);
    if (count !== t.data.length) throw new Error(`tensor ${name}: shape/data mismatch`);
    w.str(name);
    w.u32(t.shape.length);
    for (const d of t.shape) w.u32(d);
    w.f32Array(t.data);
  }
  writeFileSync(path, w.bytes());
}

class ByteReader {
  private pos = 0;

  constructor(private buf: Buffer) {}

  private take(n: number, what: string): Buffer {
    if (this.pos + n > this.buf.length) throw new Error(`truncated file while reading ${what}`);
    const out = this.buf.subarray(this.pos, this.pos + n);
    this.pos += n;
    return out;
  }

  ascii(n: number, what: string): string {
    return this.take(n, what).toString("ascii");
  }

  u32(what: string): number {
    return this.take(4, what).readUInt32LE();
  }

  str(what: string): string {
    return this.take(this.u32(what), what).toString("utf8");
  }

  f32Array(count: number, what: string): Float32Array {
    const raw = this.take(4 * count, what);
    const out = new Float32Array(count);
    for (let i = 0; i < count; i++) out[i] = raw.readFloatLE(4 * i);
    return out;
  }

  atEnd(): boolean {
    return this.pos === this.buf.length;
  }
}

export function readTensors(path: string): { label: string; entries: [string, Tensor][] } {
  const r = new ByteReader(readFileSync(path));
  const magic = r.ascii(4, "magic");
  if (magic !== TENSOR_MAGIC) throw new Error(`bad magic ${magic}`);
  const version = r.u32("version");
  if (version !== TENSOR_VERSION) throw new Error(`unsupported version ${version}`);
  const label = r.str("label");
  const count = r.u32("entry count");
  const entries: [string, Tensor][] = [];
  for (let i = 0; i < count; i++) {
    const name = r.str("tensor name");
    const rank = r.u32("tensor rank");
    const shape: number[] = [];
    for (let d = 0; d < rank; d++) shape.push(r.u32("tensor dims"));
    const n = shape.reduce((a, b) => a * b, 1);
    entries.push([name, { shape, data: r.f32Array(n, `tensor ${name}`) }]);
  }
  if (!r.atEnd()) throw new Error("trailing bytes after last tensor");
  return { label, entries };
}

export function writeMel(path: string, matrix: number[][], sr: number): void {
  const rows = matrix.length;
  const cols = matrix[0].length;
  const w = new ByteWriter();
  w.ascii(MEL_MAGIC);
  w.u32(sr);
  w.u32(rows);
  w.u32(cols);
  const flat = new Float32Array(rows * cols);
  for (let r = 0; r < rows; r++) {
    for (let c = 0; c < cols; c++) flat[r * cols + c] = matrix[r][c];
  }
  w.f32Array(flat);
  writeFileSync(path, w.bytes());
}

export function readMel(path: string): { sr: number; rows: number; cols: number; data: Float32Array } {
  const r = new ByteReader(readFileSync(path));
  const magic = r.ascii(4, "magic");
  if (magic !== MEL_MAGIC) throw new Error(`bad magic ${magic}`);
  const sr = r.u32("sample rate");
  const rows = r.u32("rows");
  const cols = r.u32("cols");
  const data = r.f32Array(rows * cols, "mel data");
  if (!r.atEnd()) throw new Error("trailing bytes after mel data");
  return { sr, rows, cols, data };
}
