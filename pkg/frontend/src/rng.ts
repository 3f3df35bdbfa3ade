/**
 * Counter-based deterministic RNG, bit-compatible with the core.
 *
 * word(i) = mix64(key + (i + 1) * GOLDEN) over wrapping uint64, where mix64
 * is the SplitMix64 finalizer; uniforms are (word >> 11) * 2^-53.  Keys and
 * substream tags follow the core exactly, so a seed produces the same
 * draws on both sides of the boundary.
 */

const MASK = (1n << 64n) - 1n;
const GOLDEN = 0x9e3779b97f4a7c15n;
const MIX_A = 0xbf58476d1ce4e5b9n;
const MIX_B = 0x94d049bb133111ebn;

/** Substream tags used by core operations. */
export const TAG_NOISE = 0x4e4f4953n;
export const TAG_SPIKES = 0x53504b53n;
export const TAG_KERNEL = 0x4b45524en;

const INV_2_53 = 2 ** -53;

function mix64(z: bigint): bigint {
  z &= MASK;
  z = ((z ^ (z >> 30n)) * MIX_A) & MASK;
  z = ((z ^ (z >> 27n)) * MIX_B) & MASK;
  return z ^ (z >> 31n);
}

export class CounterRng {
  private key: bigint;
  private cursor = 0n;

  constructor(seed: bigint | number) {
    this.key = mix64(BigInt(seed) & MASK);
  }

  private static fromKey(key: bigint): CounterRng {
    const rng = new CounterRng(0n);
    rng.key = key;
    return rng;
  }

  split(tag: bigint | number): CounterRng {
    const t = BigInt(tag) & MASK;
    return CounterRng.fromKey(mix64(this.key ^ (((t + 1n) * GOLDEN) & MASK)));
  }

  private word(counter: bigint): bigint {
    return mix64((this.key + (((counter & MASK) + 1n) * GOLDEN)) & MASK);
  }

  /** Stateless uniform in [0, 1) keyed by an explicit counter. */
  uniformAt(counter: bigint | number): number {
    return Number(this.word(BigInt(counter)) >> 11n) * INV_2_53;
  }

  /** n uniforms in [0, 1); advances the cursor like the core's uniform(n). */
  uniform(n: number): Float64Array {
    const out = new Float64Array(n);
    for (let i = 0; i < n; i++) {
      out[i] = this.uniformAt(this.cursor);
      this.cursor += 1n;
    }
    return out;
  }
}
