"""splitmix64 and the 64-bit avalanche mix behind every hash and random draw.

Both the scalar (Python int) and the vectorized (numpy uint64) paths are
defined by the same constants and must stay bit-identical.
"""

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB

_U_GAMMA = np.uint64(GOLDEN_GAMMA)
_U_MUL1 = np.uint64(_MUL1)
_U_MUL2 = np.uint64(_MUL2)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV_2_53 = 2.0 ** -53


def mix64(z: int) -> int:
    """splitmix64 finalizer on a 64-bit unsigned int."""
    z = ((z ^ (z >> 30)) * _MUL1) & MASK64
    z = ((z ^ (z >> 27)) * _MUL2) & MASK64
    return z ^ (z >> 31)


def mix64_array(z: np.ndarray) -> np.ndarray:
    """Elementwise `mix64` over a uint64 array (wrapping multiply)."""
    z = np.asarray(z, dtype=np.uint64)
    z = (z ^ (z >> _S30)) * _U_MUL1
    z = (z ^ (z >> _S27)) * _U_MUL2
    return z ^ (z >> _S31)


class SplitMix64:
    """Sequential splitmix64 generator."""

    def __init__(self, seed: int) -> None:
        if not 0 <= seed <= MASK64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {seed}")
        self._state = seed

    def next(self) -> int:
        self._state = (self._state + GOLDEN_GAMMA) & MASK64
        return mix64(self._state)

    def next_double(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits of the next output."""
        return (self.next() >> 11) * _INV_2_53


def splitmix64_stream(seed: int, count: int, offset: int = 0) -> np.ndarray:
    """Outputs `offset .. offset+count-1` of `SplitMix64(seed)` as a uint64 array.

    The j-th state is seed + (j+1)·gamma mod 2**64, so the stream can be
    produced without a Python loop.
    """
    steps = np.arange(offset + 1, offset + count + 1, dtype=np.uint64)
    states = steps * _U_GAMMA + np.uint64(seed)
    return mix64_array(states)


def uniform_doubles(seed: int, count: int, offset: int = 0) -> np.ndarray:
    """Vectorized `SplitMix64.next_double` stream."""
    raw = splitmix64_stream(seed, count, offset)
    return (raw >> _S11).astype(np.float64) * _INV_2_53


def row_seeds(master_seed: int, depth: int) -> tuple[int, ...]:
    """Per-row seeds: the first `depth` outputs of `SplitMix64(master_seed)`.

    Row i's seed depends only on (master_seed, i), so sketches of different
    depth built from one master seed share their leading rows.
    """
    gen = SplitMix64(master_seed)
    return tuple(gen.next() for _ in range(depth))


def column(item: int, seed: int, width: int) -> int:
    return mix64((item ^ seed) & MASK64) % width


def columns_array(items: np.ndarray, seed: int, width: int) -> np.ndarray:
    items = np.asarray(items, dtype=np.uint64)
    return mix64_array(items ^ np.uint64(seed)) % np.uint64(width)
