"""Keyed deterministic noise: four LFSRs filtered by a biased 4-input Boolean table."""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InvalidParamsError, InvalidRangeError
from .gf2 import as_bits

TAPS = (0x47E07, 0x1772AF, 0x1C95269, 0x43E98841)
LENGTHS = (19, 23, 29, 31)
MASKS = tuple((1 << L) - 1 for L in LENGTHS)
KEY_BITS = sum(LENGTHS)

DEFAULT_PROBA_RANGE = (15, 35)
PROBA_LIMITS = (1, 49)

_TAPS = np.array(TAPS, dtype=np.int64)
_LENS = np.array(LENGTHS, dtype=np.int64)


@dataclass(frozen=True)
class NoiseKey:
    """Initial fills of the four registers (19, 23, 29 and 31 bits)."""

    init1: int
    init2: int
    init3: int
    init4: int

    def __post_init__(self):
        for i, (v, mask) in enumerate(zip(self.fills, MASKS), start=1):
            if not 0 < v <= mask:
                raise InvalidParamsError(
                    f"init{i} must be a nonzero {LENGTHS[i - 1]}-bit value, got {v:#x}"
                )

    @property
    def fills(self) -> tuple:
        return (self.init1, self.init2, self.init3, self.init4)

    @classmethod
    def generate(cls, rng: random.Random) -> "NoiseKey":
        fills = []
        for mask in MASKS:
            v = 0
            while v == 0:
                v = rng.getrandbits(32) & mask
            fills.append(v)
        return cls(*fills)


def validate_filter(bf) -> np.ndarray:
    bf = np.asarray(bf, dtype=np.uint8)
    if bf.shape != (16,) or bf.max(initial=0) > 1:
        raise InvalidParamsError("filter must have 16 entries in {0, 1}")
    return bf


def filter_to_int(bf) -> int:
    return sum(int(b) << w for w, b in enumerate(bf))


def filter_from_int(value: int) -> np.ndarray:
    return np.array([(value >> w) & 1 for w in range(16)], dtype=np.uint8)


def check_proba_range(lo: int, hi: int):
    if not PROBA_LIMITS[0] <= lo <= hi <= PROBA_LIMITS[1]:
        raise InvalidRangeError(
            f"noise probability range [{lo}, {hi}] must lie within [1, 49] percent"
        )


def gen_noise_config(rng: random.Random, proba_range=DEFAULT_PROBA_RANGE):
    """Draw a random (filter table, proba) pair.

    Each of the 16 entries is set when a uniform draw in [0, 99] falls below
    ``proba``; constant tables carry no noise (or no information) and are
    redrawn.
    """
    lo, hi = proba_range
    check_proba_range(lo, hi)
    proba = rng.randint(lo, hi)
    while True:
        bf = np.array([1 if rng.randrange(100) < proba else 0 for _ in range(16)],
                      dtype=np.uint8)
        if 0 < bf.sum() < 16:
            return bf, proba


def filter_with_weight(weight: int, rng: random.Random) -> np.ndarray:
    """Filter table with exactly ``weight`` ones at random positions."""
    if not 0 <= weight <= 16:
        raise InvalidRangeError("filter weight must lie in [0, 16]")
    bf = np.zeros(16, dtype=np.uint8)
    bf[rng.sample(range(16), weight)] = 1
    return bf


class NoiseGenerator:
    """Stateful keystream source; one instance per protected stream."""

    def __init__(self, key: NoiseKey, bf, proba: int | None = None):
        self.key = key
        self.bf = validate_filter(bf)
        self.proba = proba
        self.regs = np.array(key.fills, dtype=np.int64)

    @property
    def probability(self) -> float:
        """Realised flip probability weight(bf)/16."""
        return float(self.bf.sum()) / 16.0

    def stream(self, count: int) -> np.ndarray:
        return _kernels.lfsr_filter_stream(self.regs, _TAPS, _LENS, self.bf, int(count))

    def step(self) -> int:
        return int(self.stream(1)[0])


def apply_noise(gen: NoiseGenerator, bits) -> np.ndarray:
    bits = as_bits(bits)
    return bits ^ gen.stream(bits.size)


remove_noise = apply_noise


def register_period(index: int, state: int = 1, limit: int | None = None) -> int:
    """Cycle length of register ``index`` (0-based) started from ``state``; -1 if over ``limit``."""
    length = LENGTHS[index]
    if limit is None:
        limit = 1 << length
    return int(_kernels.lfsr_period(state, TAPS[index], length, limit))
