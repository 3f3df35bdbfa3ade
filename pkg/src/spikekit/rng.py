"""Counter-based deterministic random numbers.

Every draw is a pure function of (key, counter): the i-th output word is

    word(i) = mix64(key + (i + 1) * GOLDEN)       (uint64, wrapping)

where mix64 is the SplitMix64 finalizer.  Because there is no sequential
state, draws can be generated in any order or in parallel and still be
bit-identical; batch operations key each draw by its logical index
(e.g. t * height * width + pixel) so results are independent of chunking
or thread schedule.

A `CounterRng` also keeps a convenience cursor so that repeated calls to
`uniform(n)` / `normal(n)` walk forward through the counter space the way
an ordinary generator would.  `split(tag)` derives an independent keyed
substream; library operations that draw randomness internally split off a
fixed per-operation tag, so one seed can safely drive a whole pipeline.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError

_U64 = np.uint64
_GOLDEN = _U64(0x9E3779B97F4A7C15)
_MIX_A = _U64(0xBF58476D1CE4E5B9)
_MIX_B = _U64(0x94D049BB133111EB)

# Fixed substream tags used by library operations (see split()).
TAG_NOISE = 0x4E4F4953
TAG_SPIKES = 0x53504B53
TAG_KERNEL = 0x4B45524E

# 2**-53, the spacing of the uniform grid on [0, 1).
_INV_2_53 = float(np.ldexp(1.0, -53))


def _mix64(z: np.ndarray | np.uint64) -> np.ndarray | np.uint64:
    """SplitMix64 finalizer; operates elementwise on uint64 (wrapping)."""
    with np.errstate(over="ignore"):
        z = (z ^ (z >> _U64(30))) * _MIX_A
        z = (z ^ (z >> _U64(27))) * _MIX_B
        return z ^ (z >> _U64(31))


class CounterRng:
    """Deterministic, splittable counter-based generator."""

    __slots__ = ("_key", "_cursor")

    def __init__(self, seed: int):
        if not isinstance(seed, (int, np.integer)):
            raise DomainError(f"seed must be an integer, got {type(seed).__name__}")
        self._key = _U64(_mix64(_U64(int(seed) % (1 << 64))))
        self._cursor = 0

    @classmethod
    def _from_key(cls, key: np.uint64) -> "CounterRng":
        rng = cls.__new__(cls)
        rng._key = _U64(key)
        rng._cursor = 0
        return rng

    @property
    def key(self) -> int:
        return int(self._key)

    def split(self, tag: int) -> "CounterRng":
        """Independent substream; same (seed, tag) always yields the same stream."""
        t = _U64(int(tag) % (1 << 64))
        with np.errstate(over="ignore"):
            mixed = self._key ^ ((t + _U64(1)) * _GOLDEN)
        return CounterRng._from_key(_mix64(mixed))

    def _words(self, counters: np.ndarray) -> np.ndarray:
        c = counters.astype(np.uint64, copy=False)
        with np.errstate(over="ignore"):
            keyed = self._key + (c + _U64(1)) * _GOLDEN
        return _mix64(keyed)

    def uniform_at(self, counters: np.ndarray) -> np.ndarray:
        """Stateless uniforms in [0, 1) keyed by explicit counters."""
        counters = np.asarray(counters)
        return (self._words(counters) >> _U64(11)).astype(np.float64) * _INV_2_53

    def uniform(self, n: int) -> np.ndarray:
        """n uniforms in [0, 1); advances the cursor."""
        idx = np.arange(self._cursor, self._cursor + int(n), dtype=np.uint64)
        self._cursor += int(n)
        return self.uniform_at(idx)

    def normal(self, n: int) -> np.ndarray:
        """n standard normal draws via Box-Muller; consumes 2n counters."""
        n = int(n)
        idx = np.arange(self._cursor, self._cursor + 2 * n, dtype=np.uint64)
        self._cursor += 2 * n
        words = self._words(idx)
        # u1 in (0, 1] so the log is finite; u2 in [0, 1).
        u1 = ((words[:n] >> _U64(11)).astype(np.float64) + 1.0) * _INV_2_53
        u2 = (words[n:] >> _U64(11)).astype(np.float64) * _INV_2_53
        return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)
