/**
 * Wire formats shared with the core, byte-identical on both sides:
 *
 *   SPKS  spike streams: "SPKS", version u16 LE (= 1), flags u16 LE
 *         (bit 0: v_th f32 present), width/height/t_count u32 LE, optional
 *         v_th f32 LE, then bit-packed frames (row-major, MSB-first,
 *         per-frame zero padding).
 *   SPKF  float rasters: "SPKF", width/height/channels u32 LE, planar f32 LE.
 *   PGM/PPM  binary 8-bit P5 / P6, maxval 255, bytes map to value / 255.
 */

import {
  ArrayView,
  PackedStream,
  f32View,
  frameBytes,
  packedStream,
  u8View,
} from "./arrays.js";
import { FormatError } from "./errors.js";

const SPKS_MAGIC = 0x53504b53; // "SPKS" big-endian read of the 4 bytes
const SPKF_MAGIC = 0x53504b46; // "SPKF"
export const SPKS_VERSION = 1;
export const FLAG_VTH = 0x0001;

function ascii(view: DataView, offset: number): number {
  return view.getUint32(offset, false);
}

export function encodeSpks(stream: PackedStream, vTh?: number): Uint8Array {
  const headerLen = 20 + (vTh === undefined ? 0 : 4);
  const out = new Uint8Array(headerLen + stream.payload.length);
  const view = new DataView(out.buffer);
  out.set([0x53, 0x50, 0x4b, 0x53], 0);
  view.setUint16(4, SPKS_VERSION, true);
  view.setUint16(6, vTh === undefined ? 0 : FLAG_VTH, true);
  view.setUint32(8, stream.width, true);
  view.setUint32(12, stream.height, true);
  view.setUint32(16, stream.tCount, true);
  if (vTh !== undefined) {
    view.setFloat32(20, vTh, true);
  }
  out.set(stream.payload, headerLen);
  return out;
}

export function decodeSpks(
  data: Uint8Array,
  strict = true,
): { stream: PackedStream; vTh?: number } {
  if (data.length < 20) {
    throw new FormatError(`container too short for header: got ${data.length} bytes`);
  }
  const view = new DataView(data.buffer, data.byteOffset, data.byteLength);
  if (ascii(view, 0) !== SPKS_MAGIC) {
    throw new FormatError("bad magic, expected SPKS");
  }
  const version = view.getUint16(4, true);
  if (version !== SPKS_VERSION) {
    throw new FormatError(`unsupported version ${version}`);
  }
  const flags = view.getUint16(6, true);
  if (flags & ~FLAG_VTH) {
    throw new FormatError(`unknown flag bits 0x${(flags & ~FLAG_VTH).toString(16)}`);
  }
  const width = view.getUint32(8, true);
  const height = view.getUint32(12, true);
  const tCount = view.getUint32(16, true);
  if (width < 1 || height < 1 || tCount < 1) {
    throw new FormatError(`dimensions must be >= 1, got ${width}x${height}x${tCount}`);
  }
  let offset = 20;
  let vTh: number | undefined;
  if (flags & FLAG_VTH) {
    if (data.length < 24) {
      throw new FormatError("container too short for v_th field");
    }
    vTh = view.getFloat32(20, true);
    offset = 24;
  }
  const fb = frameBytes(width, height);
  const expected = offset + tCount * fb;
  if (data.length !== expected) {
    throw new FormatError(`payload size mismatch: expected ${expected} bytes, got ${data.length}`);
  }
  const payload = data.slice(offset);
  const padBits = fb * 8 - width * height;
  if (padBits > 0) {
    const mask = (0xff << padBits) & 0xff;
    for (let t = 0; t < tCount; t++) {
      const last = payload[t * fb + fb - 1];
      if (last & ~mask) {
        if (strict) {
          throw new FormatError("nonzero frame padding bits");
        }
        payload[t * fb + fb - 1] = last & mask;
      }
    }
  }
  return { stream: packedStream(width, height, tCount, payload), vTh };
}

export function encodeSpkf(image: ArrayView): Uint8Array {
  if (image.kind !== "f32") {
    throw new FormatError("SPKF holds f32 rasters");
  }
  const [height, width, channels = 1] = [...image.shape, 1].slice(0, 3) as number[];
  if (image.shape.length < 2 || image.shape.length > 3 || (image.shape.length === 3 && image.shape[2] !== 3)) {
    throw new FormatError(`SPKF rasters are (h, w) or (h, w, 3), got [${image.shape}]`);
  }
  const pixels = width * height;
  const out = new Uint8Array(16 + 4 * pixels * channels);
  const view = new DataView(out.buffer);
  out.set([0x53, 0x50, 0x4b, 0x46], 0);
  view.setUint32(4, width, true);
  view.setUint32(8, height, true);
  view.setUint32(12, channels, true);
  const data = image.data as Float32Array;
  // Interleaved (h, w, c) -> planar planes.
  for (let c = 0; c < channels; c++) {
    for (let i = 0; i < pixels; i++) {
      view.setFloat32(16 + 4 * (c * pixels + i), data[channels === 1 ? i : i * 3 + c], true);
    }
  }
  return out;
}

export function decodeSpkf(data: Uint8Array): ArrayView {
  if (data.length < 16) {
    throw new FormatError(`container too short for header: got ${data.length} bytes`);
  }
  const view = new DataView(data.buffer, data.byteOffset, data.byteLength);
  if (ascii(view, 0) !== SPKF_MAGIC) {
    throw new FormatError("bad magic, expected SPKF");
  }
  const width = view.getUint32(4, true);
  const height = view.getUint32(8, true);
  const channels = view.getUint32(12, true);
  if (channels !== 1 && channels !== 3) {
    throw new FormatError(`channels must be 1 or 3, got ${channels}`);
  }
  const pixels = width * height;
  if (data.length !== 16 + 4 * pixels * channels) {
    throw new FormatError(`payload size mismatch for ${width}x${height}x${channels}`);
  }
  const out = new Float32Array(pixels * channels);
  for (let c = 0; c < channels; c++) {
    for (let i = 0; i < pixels; i++) {
      const v = view.getFloat32(16 + 4 * (c * pixels + i), true);
      if (channels === 1) {
        out[i] = v;
      } else {
        out[i * 3 + c] = v;
      }
    }
  }
  return f32View(channels === 1 ? [height, width] : [height, width, 3], out);
}

export function encodePgm(image: ArrayView): Uint8Array {
  if (image.kind !== "u8" || image.shape.length !== 2) {
    throw new FormatError("PGM holds 2-D u8 rasters");
  }
  const [height, width] = image.shape;
  const header = new TextEncoder().encode(`P5\n${width} ${height}\n255\n`);
  const out = new Uint8Array(header.length + width * height);
  out.set(header, 0);
  out.set(image.data as Uint8Array, header.length);
  return out;
}

export function encodePpm(image: ArrayView): Uint8Array {
  if (image.kind !== "u8" || image.shape.length !== 3 || image.shape[2] !== 3) {
    throw new FormatError("PPM holds (h, w, 3) u8 rasters");
  }
  const [height, width] = image.shape;
  const header = new TextEncoder().encode(`P6\n${width} ${height}\n255\n`);
  const out = new Uint8Array(header.length + width * height * 3);
  out.set(header, 0);
  out.set(image.data as Uint8Array, header.length);
  return out;
}

export function decodePnm(data: Uint8Array): ArrayView {
  const kind = String.fromCharCode(data[0], data[1]);
  if (kind !== "P5" && kind !== "P6") {
    throw new FormatError(`unrecognized PNM magic ${kind}`);
  }
  let pos = 2;
  const fields: number[] = [];
  while (fields.length < 3) {
    while (pos < data.length && isSpace(data[pos])) pos++;
    if (data[pos] === 0x23) {
      while (pos < data.length && data[pos] !== 0x0a) pos++;
      continue;
    }
    let token = "";
    while (pos < data.length && !isSpace(data[pos])) {
      token += String.fromCharCode(data[pos]);
      pos++;
    }
    if (!/^\d+$/.test(token)) {
      throw new FormatError(`malformed PNM header token ${JSON.stringify(token)}`);
    }
    fields.push(Number(token));
  }
  pos++; // single whitespace byte after maxval
  const [width, height, maxval] = fields;
  if (maxval !== 255) {
    throw new FormatError(`unsupported maxval ${maxval}`);
  }
  const channels = kind === "P5" ? 1 : 3;
  const count = width * height * channels;
  if (data.length < pos + count) {
    throw new FormatError(`payload size mismatch: expected ${pos + count} bytes, got ${data.length}`);
  }
  const pixels = data.slice(pos, pos + count);
  return u8View(channels === 1 ? [height, width] : [height, width, 3], pixels);
}

function isSpace(byte: number): boolean {
  return byte === 0x20 || byte === 0x09 || byte === 0x0a || byte === 0x0d;
}
