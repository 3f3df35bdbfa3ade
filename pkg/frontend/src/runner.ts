/**
 * Subprocess transport to the core CLI.
 *
 * The binary is resolved from SPIKEKIT_BIN or PATH; each call gets a fresh
 * temp directory for its input/output files.  Core exit codes map onto the
 * typed error hierarchy (1 -> CoreUsageError, 2 -> CoreIoError).
 */

import { execFile } from "node:child_process";
import { mkdtemp, rm } from "node:fs/promises";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { CoreError, CoreIoError, CoreUsageError } from "./errors.js";

export function spikekitBin(): string {
  return process.env.SPIKEKIT_BIN ?? "spikekit";
}

export function runCli(args: string[]): Promise<string> {
  return new Promise((resolve, reject) => {
    execFile(spikekitBin(), args, { maxBuffer: 1 << 26 }, (error, stdout, stderr) => {
      if (!error) {
        resolve(stdout);
        return;
      }
      const code: number | string | undefined = (error as { code?: number | string }).code;
      const message = (stderr || error.message).trim();
      if (code === "ENOENT") {
        reject(new CoreError(-1, `spikekit binary not found (${spikekitBin()}); set SPIKEKIT_BIN`));
      } else if (code === 1) {
        reject(new CoreUsageError(message));
      } else if (code === 2) {
        reject(new CoreIoError(message));
      } else {
        reject(new CoreError(typeof code === "number" ? code : -1, message));
      }
    });
  });
}

export async function withTempDir<T>(fn: (dir: string) => Promise<T>): Promise<T> {
  const dir = await mkdtemp(join(tmpdir(), "spikekit-"));
  try {
    return await fn(dir);
  } finally {
    await rm(dir, { recursive: true, force: true });
  }
}
