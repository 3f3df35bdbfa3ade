/**
 * Test-side oracles: independent reimplementations of the core math used to
 * verify the bound operations differentially.  Where the wire format
 * quantizes (f32 rasters), the oracle replicates the exact arithmetic of
 * the export path so comparisons can be bit-exact.
 */

import { PackedStream, packBits, unpackBits } from "../src/arrays.js";
import { CounterRng, TAG_NOISE, TAG_SPIKES } from "../src/rng.js";

export async function pool<T>(n: number, limit: number, fn: (i: number) => Promise<T>): Promise<T[]> {
  const results = new Array<T>(n);
  let next = 0;
  const workers = Array.from({ length: Math.min(limit, n) }, async () => {
    for (;;) {
      const i = next++;
      if (i >= n) return;
      results[i] = await fn(i);
    }
  });
  await Promise.all(workers);
  return results;
}

export function clip01(x: number): number {
  return Math.min(Math.max(x, 0), 1);
}

/** Deterministic pseudo-random f32 values in [0, 1). */
export function randUnitF32(seed: number, n: number): Float32Array {
  const rng = new CounterRng(seed);
  const out = new Float32Array(n);
  for (let i = 0; i < n; i++) {
    out[i] = Math.fround(rng.uniformAt(i));
  }
  return out;
}

export function randU8(seed: number, n: number): Uint8Array {
  const rng = new CounterRng(seed);
  const out = new Uint8Array(n);
  for (let i = 0; i < n; i++) {
    out[i] = Math.floor(rng.uniformAt(i) * 256);
  }
  return out;
}

export function randStream(seed: number, width: number, height: number, tCount: number): PackedStream {
  const rng = new CounterRng(seed);
  const density = 0.1 + 0.8 * rng.uniformAt(1 << 20);
  const bits = new Uint8Array(width * height * tCount);
  for (let i = 0; i < bits.length; i++) {
    bits[i] = rng.uniformAt(i) < density ? 1 : 0;
  }
  return packBits(bits, width, height, tCount);
}

/** Scalar integrate-and-fire reference over f64 values. */
export function simulateOracle(
  frames: Float32Array,
  width: number,
  height: number,
  tCount: number,
  vTh: number,
): PackedStream {
  const pixels = width * height;
  const residuals = new Float64Array(pixels);
  const bits = new Uint8Array(tCount * pixels);
  for (let t = 0; t < tCount; t++) {
    for (let i = 0; i < pixels; i++) {
      const charged = residuals[i] + frames[t * pixels + i];
      if (charged >= vTh) {
        bits[t * pixels + i] = 1;
        residuals[i] = charged % vTh;
      } else {
        residuals[i] = charged;
      }
    }
  }
  return packBits(bits, width, height, tCount);
}

/** Latency to the most recent spike at or before t; 0 where undefined. */
function latencies(stream: PackedStream, t: number): Int32Array {
  const pixels = stream.width * stream.height;
  const bits = unpackBits(stream);
  const out = new Int32Array(pixels);
  for (let i = 0; i < pixels; i++) {
    out[i] = 0;
    for (let back = 0; back <= t; back++) {
      if (bits[(t - back) * pixels + i]) {
        out[i] = back + 1;
        break;
      }
    }
  }
  return out;
}

/** TFI through the f32 wire: replicates the export arithmetic exactly. */
export function tfiOracle(stream: PackedStream, t: number, vTh: number): Float32Array {
  const lat = latencies(stream, t);
  const out = new Float32Array(lat.length);
  const gain = 255.0 / vTh;
  for (let i = 0; i < lat.length; i++) {
    const value = lat[i] > 0 ? vTh / lat[i] : 0.0;
    const wire = Math.fround(clip01((value * gain) / 255.0));
    out[i] = Math.fround(wire * vTh);
  }
  return out;
}

/** TFP through the f32 wire: replicates the export arithmetic exactly. */
export function tfpOracle(stream: PackedStream, t: number, window: number, scale: number): Float32Array {
  const pixels = stream.width * stream.height;
  const bits = unpackBits(stream);
  const start = Math.max(0, t - window + 1);
  const wEff = t - start + 1;
  const out = new Float32Array(pixels);
  const gain = 255.0 / scale;
  for (let i = 0; i < pixels; i++) {
    let n = 0;
    for (let s = start; s <= t; s++) {
      n += bits[s * pixels + i];
    }
    const value = (n / wEff) * scale;
    const wire = Math.fround(clip01((value * gain) / 255.0));
    out[i] = Math.fround(wire * scale);
  }
  return out;
}

/** Probability-map pipeline with sigma_s = 0 (exact arithmetic only). */
export function probmapOracleSigma0(
  values: Float64Array,
  gammaC: number,
  noise: number,
  seed: number | undefined,
): Float32Array {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    lo = Math.min(lo, v);
    hi = Math.max(hi, v);
  }
  const p = new Float64Array(values.length);
  for (let i = 0; i < values.length; i++) {
    p[i] = hi === lo ? 0.5 : (values[i] - lo) / (hi - lo);
    p[i] = Math.pow(p[i], gammaC);
  }
  if (noise > 0) {
    const sub = new CounterRng(seed!).split(TAG_NOISE);
    for (let i = 0; i < p.length; i++) {
      p[i] = p[i] + (2.0 * sub.uniformAt(i) - 1.0) * noise;
    }
  }
  const out = new Float32Array(p.length);
  for (let i = 0; i < p.length; i++) {
    out[i] = Math.fround(clip01(p[i]));
  }
  return out;
}

/** Bernoulli sampling keyed by (seed, t * pixels + i). */
export function sampleSpikesOracle(
  p: Float32Array,
  width: number,
  height: number,
  frames: number,
  seed: number,
): PackedStream {
  const pixels = width * height;
  const sub = new CounterRng(seed).split(TAG_SPIKES);
  const bits = new Uint8Array(frames * pixels);
  for (let t = 0; t < frames; t++) {
    for (let i = 0; i < pixels; i++) {
      const counter = t * pixels + i;
      bits[counter] = sub.uniformAt(counter) < p[i] ? 1 : 0;
    }
  }
  return packBits(bits, width, height, frames);
}

/** Compensated (Neumaier) summation for loss/metric oracles. */
export function neumaierSum(values: Iterable<number>): number {
  let sum = 0;
  let comp = 0;
  for (const v of values) {
    const t = sum + v;
    comp += Math.abs(sum) >= Math.abs(v) ? sum - t + v : v - t + sum;
    sum = t;
  }
  return sum + comp;
}

export function alignLossOracle(
  p: Float32Array,
  gt: PackedStream,
  eps: number,
): { bce: number; rateMse: number } {
  const pixels = gt.width * gt.height;
  const bits = unpackBits(gt);
  const counts = new Int32Array(pixels);
  for (let t = 0; t < gt.tCount; t++) {
    for (let i = 0; i < pixels; i++) {
      counts[i] += bits[t * pixels + i];
    }
  }
  const bceTerms: number[] = [];
  const mseTerms: number[] = [];
  for (let i = 0; i < pixels; i++) {
    const ph = Math.min(Math.max(p[i], eps), 1 - eps);
    bceTerms.push(-(counts[i] * Math.log(ph) + (gt.tCount - counts[i]) * Math.log1p(-ph)));
    const diff = p[i] - counts[i] / gt.tCount;
    mseTerms.push(diff * diff);
  }
  return {
    bce: neumaierSum(bceTerms) / (gt.tCount * pixels),
    rateMse: neumaierSum(mseTerms) / pixels,
  };
}

export function mseOracle(a: Float64Array, b: Float64Array): number {
  const terms: number[] = [];
  for (let i = 0; i < a.length; i++) {
    const d = a[i] - b[i];
    terms.push(d * d);
  }
  return neumaierSum(terms) / a.length;
}

/** Windowed SSIM with an 11x11 Gaussian (std 1.5), valid region only. */
export function ssimOracle(a: Float64Array, b: Float64Array, h: number, w: number, maxI: number): number {
  const radius = 5;
  const k1 = new Float64Array(11);
  let ksum = 0;
  for (let i = -radius; i <= radius; i++) {
    k1[i + radius] = Math.exp(-(i * i) / (2 * 1.5 * 1.5));
    ksum += k1[i + radius];
  }
  for (let i = 0; i < 11; i++) {
    k1[i] /= ksum;
  }
  const c1 = (0.01 * maxI) ** 2;
  const c2 = (0.03 * maxI) ** 2;
  const values: number[] = [];
  for (let y = radius; y < h - radius; y++) {
    for (let x = radius; x < w - radius; x++) {
      let muA = 0;
      let muB = 0;
      let eAA = 0;
      let eBB = 0;
      let eAB = 0;
      for (let i = -radius; i <= radius; i++) {
        for (let j = -radius; j <= radius; j++) {
          const wgt = k1[i + radius] * k1[j + radius];
          const va = a[(y + i) * w + (x + j)];
          const vb = b[(y + i) * w + (x + j)];
          muA += wgt * va;
          muB += wgt * vb;
          eAA += wgt * va * va;
          eBB += wgt * vb * vb;
          eAB += wgt * va * vb;
        }
      }
      const varA = eAA - muA * muA;
      const varB = eBB - muB * muB;
      const cov = eAB - muA * muB;
      values.push(
        ((2 * muA * muB + c1) * (2 * cov + c2)) / ((muA * muA + muB * muB + c1) * (varA + varB + c2)),
      );
    }
  }
  return neumaierSum(values) / values.length;
}
