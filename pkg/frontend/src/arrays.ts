/**
 * Array views crossing the boundary: contiguous row-major buffers with an
 * explicit logical shape, either u8 / f32 elements or a bit-packed spike
 * stream (kept packed for the 8x memory advantage; unpackBits is the
 * explicit escape hatch).
 */

import { DimensionError, DomainError } from "./errors.js";

export type ElementKind = "u8" | "f32";

export interface ArrayView {
  readonly kind: ElementKind;
  /** Row-major logical shape, 1-D to 4-D. */
  readonly shape: readonly number[];
  readonly data: Uint8Array | Float32Array;
  readonly contiguous: true;
}

function checkShape(shape: readonly number[], length: number): void {
  if (shape.length < 1 || shape.length > 4) {
    throw new DimensionError(`shape must be 1-D to 4-D, got ${shape.length}-D`);
  }
  let size = 1;
  for (const dim of shape) {
    if (!Number.isInteger(dim) || dim < 1) {
      throw new DimensionError(`shape entries must be positive integers, got [${shape}]`);
    }
    size *= dim;
  }
  if (size !== length) {
    throw new DimensionError(`logical shape [${shape}] needs ${size} elements, buffer has ${length}`);
  }
}

export function f32View(shape: readonly number[], data: Float32Array): ArrayView {
  if (!(data instanceof Float32Array)) {
    throw new DomainError(`f32 view requires a Float32Array, got ${(data as object).constructor.name}`);
  }
  checkShape(shape, data.length);
  return { kind: "f32", shape: [...shape], data, contiguous: true };
}

export function u8View(shape: readonly number[], data: Uint8Array): ArrayView {
  if (!(data instanceof Uint8Array)) {
    throw new DomainError(`u8 view requires a Uint8Array, got ${(data as object).constructor.name}`);
  }
  checkShape(shape, data.length);
  return { kind: "u8", shape: [...shape], data, contiguous: true };
}

/** Bit-packed binary stream: t-major, row-major, MSB-first, per-frame byte padding. */
export interface PackedStream {
  readonly width: number;
  readonly height: number;
  readonly tCount: number;
  /** tCount frames of ceil(width * height / 8) bytes each. */
  readonly payload: Uint8Array;
}

export function frameBytes(width: number, height: number): number {
  return Math.ceil((width * height) / 8);
}

export function packedStream(
  width: number,
  height: number,
  tCount: number,
  payload: Uint8Array,
): PackedStream {
  if (width < 1 || height < 1 || tCount < 1) {
    throw new DimensionError(`stream dimensions must be >= 1, got ${width}x${height}x${tCount}`);
  }
  const expected = tCount * frameBytes(width, height);
  if (payload.length !== expected) {
    throw new DimensionError(`payload has ${payload.length} bytes, expected ${expected}`);
  }
  return { width, height, tCount, payload };
}

/** Pack one bit per entry of a (t, h, w) u8 array of 0/1 values. */
export function packBits(bits: Uint8Array, width: number, height: number, tCount: number): PackedStream {
  if (bits.length !== tCount * height * width) {
    throw new DimensionError(`bit buffer has ${bits.length} entries, expected ${tCount * height * width}`);
  }
  const fb = frameBytes(width, height);
  const payload = new Uint8Array(tCount * fb);
  const pixels = width * height;
  for (let t = 0; t < tCount; t++) {
    for (let i = 0; i < pixels; i++) {
      if (bits[t * pixels + i]) {
        payload[t * fb + (i >> 3)] |= 0x80 >> (i & 7);
      }
    }
  }
  return { width, height, tCount, payload };
}

/** Explicit unpack: one byte per bit, shape (t, h, w) row-major. */
export function unpackBits(stream: PackedStream): Uint8Array {
  const pixels = stream.width * stream.height;
  const fb = frameBytes(stream.width, stream.height);
  const out = new Uint8Array(stream.tCount * pixels);
  for (let t = 0; t < stream.tCount; t++) {
    for (let i = 0; i < pixels; i++) {
      const byte = stream.payload[t * fb + (i >> 3)];
      out[t * pixels + i] = (byte >> (7 - (i & 7))) & 1;
    }
  }
  return out;
}

/** Fraction of set bits (padding is zero by construction). */
export function coverage(stream: PackedStream): number {
  let ones = 0;
  for (const byte of stream.payload) {
    let b = byte;
    while (b) {
      ones += b & 1;
      b >>= 1;
    }
  }
  return ones / (stream.tCount * stream.width * stream.height);
}
