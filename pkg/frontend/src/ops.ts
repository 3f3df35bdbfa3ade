/**
 * Bound operations: same names and results as the core, array-in/array-out.
 *
 * Each call round-trips through the core CLI using the documented file
 * formats, so float results carry the boundary's f32 precision and bit
 * outputs are exact.  Scalar results (losses, metrics) are parsed from the
 * core's shortest-roundtrip decimal output and are therefore the core's
 * f64 values verbatim.
 */

import { readFile, writeFile } from "node:fs/promises";
import { join } from "node:path";

import { ArrayView, PackedStream, f32View } from "./arrays.js";
import { DimensionError, DomainError } from "./errors.js";
import { decodeSpkf, decodeSpks, encodePgm, encodePpm, encodeSpkf, encodeSpks } from "./formats.js";
import { runCli, withTempDir } from "./runner.js";

export interface SimulateImageOptions {
  coverage: number;
  frames: number;
  vTh?: number;
}

export interface ProbabilityMapOptions {
  sigmaS?: number;
  gammaC?: number;
  noise?: number;
  seed?: number | bigint;
}

function checkImageView(view: ArrayView, name: string): void {
  if (view.shape.length !== 2 && !(view.shape.length === 3 && view.shape[2] === 3)) {
    throw new DimensionError(`${name} must be (h, w) or (h, w, 3), got [${view.shape}]`);
  }
  if (view.kind === "f32") {
    for (const v of view.data as Float32Array) {
      if (!Number.isFinite(v) || v < 0 || v > 1) {
        throw new DomainError(`${name} values must lie in [0, 1] for the unit-float domain`);
      }
    }
  }
}

async function writeView(dir: string, stem: string, view: ArrayView): Promise<string> {
  let path: string;
  let bytes: Uint8Array;
  if (view.kind === "f32") {
    path = join(dir, `${stem}.spkf`);
    bytes = encodeSpkf(view);
  } else if (view.shape.length === 2) {
    path = join(dir, `${stem}.pgm`);
    bytes = encodePgm(view);
  } else {
    path = join(dir, `${stem}.ppm`);
    bytes = encodePpm(view);
  }
  await writeFile(path, bytes);
  return path;
}

async function readStream(path: string): Promise<{ stream: PackedStream; vTh?: number }> {
  return decodeSpks(new Uint8Array(await readFile(path)));
}

/** Core version string, e.g. "0.1.0"; must match this package's version. */
export async function version(): Promise<string> {
  const out = await runCli(["--version"]);
  return out.trim().split(/\s+/).pop() ?? "";
}

/** Integrate-and-fire simulation of a (t, h, w) f32 intensity sequence. */
export async function simulate(seq: ArrayView, vTh = 1.0): Promise<PackedStream> {
  if (seq.kind !== "f32" || seq.shape.length !== 3) {
    throw new DimensionError(`simulate expects an f32 (t, h, w) view, got ${seq.kind} [${seq.shape}]`);
  }
  const [tCount, height, width] = seq.shape;
  const data = seq.data as Float32Array;
  for (const v of data) {
    if (!Number.isFinite(v) || v < 0 || v > 1) {
      throw new DomainError("intensities must lie in [0, 1] for the unit-float file domain");
    }
  }
  return withTempDir(async (dir) => {
    const pixels = height * width;
    for (let t = 0; t < tCount; t++) {
      const frame = f32View([height, width], data.subarray(t * pixels, (t + 1) * pixels));
      await writeFile(join(dir, `f_${String(t).padStart(4, "0")}.spkf`), encodeSpkf(frame));
    }
    const out = join(dir, "out.spks");
    await runCli(["simulate", "--in", dir, "--vth", String(vTh), "--out", out]);
    return (await readStream(out)).stream;
  });
}

/** Coverage-calibrated stream from a static image. */
export async function simulateImage(image: ArrayView, opts: SimulateImageOptions): Promise<PackedStream> {
  checkImageView(image, "image");
  return withTempDir(async (dir) => {
    const input = await writeView(dir, "image", image);
    const out = join(dir, "out.spks");
    await runCli([
      "simulate-image",
      "--in", input,
      "--coverage", String(opts.coverage),
      "--frames", String(opts.frames),
      "--vth", String(opts.vTh ?? 1.0),
      "--out", out,
    ]);
    return (await readStream(out)).stream;
  });
}

/** Texture-from-interval frame at step t; values are v_th / latency (f32). */
export async function tfi(stream: PackedStream, t: number, vTh = 1.0): Promise<ArrayView> {
  return withTempDir(async (dir) => {
    const input = join(dir, "in.spks");
    await writeFile(input, encodeSpks(stream, vTh));
    const out = join(dir, "out.spkf");
    await runCli(["tfi", "--in", input, "--t", String(t), "--out", out]);
    const norm = decodeSpkf(new Uint8Array(await readFile(out)));
    const data = norm.data as Float32Array;
    const values = new Float32Array(data.length);
    for (let i = 0; i < data.length; i++) {
      values[i] = Math.fround(data[i] * vTh);
    }
    return f32View(norm.shape, values);
  });
}

/** Texture-from-playback frame: trailing-window spike rate times scale (f32). */
export async function tfp(
  stream: PackedStream,
  t: number,
  window: number,
  scale = 255.0,
): Promise<ArrayView> {
  return withTempDir(async (dir) => {
    const input = join(dir, "in.spks");
    await writeFile(input, encodeSpks(stream));
    const out = join(dir, "out.spkf");
    await runCli([
      "tfp", "--in", input, "--t", String(t), "--window", String(window),
      "--scale", String(scale), "--out", out,
    ]);
    const norm = decodeSpkf(new Uint8Array(await readFile(out)));
    const data = norm.data as Float32Array;
    const values = new Float32Array(data.length);
    for (let i = 0; i < data.length; i++) {
      values[i] = Math.fround(data[i] * scale);
    }
    return f32View(norm.shape, values);
  });
}

/** Normalize / smooth / gamma / noise pipeline; returns the f32 probability map. */
export async function probabilityMap(pred: ArrayView, opts: ProbabilityMapOptions = {}): Promise<ArrayView> {
  checkImageView(pred, "pred");
  if (pred.shape.length !== 2) {
    throw new DimensionError("probabilityMap expects a single-channel image");
  }
  return withTempDir(async (dir) => {
    const input = await writeView(dir, "pred", pred);
    const out = join(dir, "out.spkf");
    const args = [
      "probmap", "--in", input,
      "--sigma-s", String(opts.sigmaS ?? 1.0),
      "--gamma-c", String(opts.gammaC ?? 1.0),
      "--noise", String(opts.noise ?? 0.01),
      "--out", out,
    ];
    if (opts.seed !== undefined) {
      args.push("--seed", String(opts.seed));
    }
    await runCli(args);
    return decodeSpkf(new Uint8Array(await readFile(out)));
  });
}

/** Bernoulli spike stream sampled from an f32 probability map. */
export async function sampleSpikes(
  p: ArrayView,
  frames: number,
  seed: number | bigint,
): Promise<PackedStream> {
  checkImageView(p, "p");
  if (p.kind !== "f32" || p.shape.length !== 2) {
    throw new DimensionError(`sampleSpikes expects an f32 (h, w) view, got ${p.kind} [${p.shape}]`);
  }
  return withTempDir(async (dir) => {
    const input = await writeView(dir, "p", p);
    const out = join(dir, "out.spks");
    await runCli([
      "sample-spikes", "--in", input, "--frames", String(frames),
      "--seed", String(seed), "--out", out,
    ]);
    return (await readStream(out)).stream;
  });
}

/** BCE and rate-MSE of a probability map against a ground-truth stream. */
export async function alignLoss(
  p: ArrayView,
  gt: PackedStream,
  eps?: number,
): Promise<{ bce: number; rateMse: number }> {
  checkImageView(p, "p");
  return withTempDir(async (dir) => {
    const input = await writeView(dir, "p", p);
    const ref = join(dir, "gt.spks");
    await writeFile(ref, encodeSpks(gt));
    const args = ["align-loss", "--in", input, "--ref", ref];
    if (eps !== undefined) {
      args.push("--eps", String(eps));
    }
    const out = await runCli(args);
    const m = /^bce=(\S+) rate_mse=(\S+)$/m.exec(out);
    if (!m) {
      throw new DomainError(`unexpected align-loss output: ${out.trim()}`);
    }
    return { bce: Number(m[1]), rateMse: Number(m[2]) };
  });
}

/** MSE / PSNR / SSIM for an image pair; psnr is Infinity for identical inputs. */
export async function metrics(
  a: ArrayView,
  b: ArrayView,
  maxI = 1.0,
): Promise<{ mse: number; psnr: number; ssim: number }> {
  checkImageView(a, "a");
  checkImageView(b, "b");
  return withTempDir(async (dir) => {
    const pa = await writeView(dir, "a", a);
    const pb = await writeView(dir, "b", b);
    const out = await runCli(["metrics", "--in", pa, "--ref", pb, "--max-i", String(maxI)]);
    const m = /^mse=(\S+) psnr=(\S+) ssim=(\S+)$/m.exec(out);
    if (!m) {
      throw new DomainError(`unexpected metrics output: ${out.trim()}`);
    }
    return {
      mse: Number(m[1]),
      psnr: m[2] === "inf" ? Infinity : Number(m[2]),
      ssim: Number(m[3]),
    };
  });
}
