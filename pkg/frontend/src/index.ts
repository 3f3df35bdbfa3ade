export {
  ArrayView,
  ElementKind,
  PackedStream,
  coverage,
  f32View,
  frameBytes,
  packBits,
  packedStream,
  u8View,
  unpackBits,
} from "./arrays.js";
export {
  CoreError,
  CoreIoError,
  CoreUsageError,
  DimensionError,
  DomainError,
  FormatError,
  SpikekitError,
} from "./errors.js";
export {
  FLAG_VTH,
  SPKS_VERSION,
  decodePnm,
  decodeSpkf,
  decodeSpks,
  encodePgm,
  encodePpm,
  encodeSpkf,
  encodeSpks,
} from "./formats.js";
export { CounterRng, TAG_KERNEL, TAG_NOISE, TAG_SPIKES } from "./rng.js";
export { runCli, spikekitBin, withTempDir } from "./runner.js";
export {
  alignLoss,
  metrics,
  probabilityMap,
  sampleSpikes,
  simulate,
  simulateImage,
  tfi,
  tfp,
  version,
} from "./ops.js";

export const VERSION = "0.1.0";
