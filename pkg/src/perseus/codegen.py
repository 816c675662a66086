"""Random punctured-code generation within configurable parameter bounds."""

from __future__ import annotations

import random
import secrets
from dataclasses import dataclass

import numpy as np

from .code import ConvCode, PuncturedCode
from .decode import roundtrip_ok
from .errors import GenerationFailureError, InvalidBoundsError
from .gf2 import Gf2Poly

PROBE_BITS = 256
MAX_PROBE_FAILURES = 64


@dataclass(frozen=True)
class GenBounds:
    """Each parameter is drawn uniformly from ``[min, min + span]``."""

    k_min: int = 1
    k_span: int = 5
    n_min: int = 5
    n_span: int = 6
    mem_min: int = 10
    mem_span: int = 20
    mwidth_min: int = 6
    mwidth_span: int = 16
    puncture_divisor: int = 8

    def __post_init__(self):
        for name in ("k_min", "n_min", "mwidth_min", "puncture_divisor"):
            if getattr(self, name) < 1:
                raise InvalidBoundsError(f"{name} must be >= 1")
        for name in ("k_span", "n_span", "mem_span", "mwidth_span", "mem_min"):
            if getattr(self, name) < 0:
                raise InvalidBoundsError(f"{name} must be >= 0")
        if self.k_min >= self.n_max:
            raise InvalidBoundsError(
                f"k >= {self.k_min} and n <= {self.n_max} leave no rate below 1"
            )
        if not any(
            k < n and n * m - zero_count(n, m, self.puncture_divisor) >= k * m
            for k in range(self.k_min, self.k_max + 1)
            for n in range(self.n_min, self.n_max + 1)
            for m in range(self.mwidth_min, self.mwidth_max + 1)
        ):
            raise InvalidBoundsError("no (k, n, M) in bounds gives a punctured rate <= 1")

    @property
    def k_max(self) -> int:
        return self.k_min + self.k_span

    @property
    def n_max(self) -> int:
        return self.n_min + self.n_span

    @property
    def mem_max(self) -> int:
        return self.mem_min + self.mem_span

    @property
    def mwidth_max(self) -> int:
        return self.mwidth_min + self.mwidth_span


def default_rng(seed: int | None = None) -> random.Random:
    """Cryptographic entropy unless a test seed is given."""
    if seed is None:
        return secrets.SystemRandom()
    return random.Random(seed)


def zero_count(n: int, width: int, divisor: int = 8) -> int:
    return (n * width) // divisor


def draw_dimensions(bounds: GenBounds, rng: random.Random):
    """(k, n, mem, M) with k < n and a punctured rate of at most one."""
    while True:
        k = rng.randint(bounds.k_min, bounds.k_max)
        n = rng.randint(bounds.n_min, bounds.n_max)
        mem = rng.randint(bounds.mem_min, bounds.mem_max)
        width = rng.randint(bounds.mwidth_min, bounds.mwidth_max)
        weight = n * width - zero_count(n, width, bounds.puncture_divisor)
        if k < n and weight >= k * width:
            return k, n, mem, width


def random_pmatrix(n: int, width: int, nbzero: int, rng: random.Random) -> np.ndarray:
    while True:
        flat = np.ones(n * width, dtype=np.uint8)
        flat[rng.sample(range(n * width), nbzero)] = 0
        pm = flat.reshape(n, width)
        if pm.any(axis=0).all():
            return pm


def random_polys(k: int, n: int, mem: int, rng: random.Random):
    rows = []
    for _ in range(k):
        row = [0] * n
        while not any(row):
            row = [rng.getrandbits(mem + 1) for _ in range(n)]
        rows.append(tuple(Gf2Poly(b) for b in row))
    return tuple(rows)


def generate_code(bounds: GenBounds | None = None, rng: random.Random | None = None) -> PuncturedCode:
    bounds = bounds or GenBounds()
    rng = rng or default_rng()
    for _ in range(MAX_PROBE_FAILURES):
        k, n, mem, width = draw_dimensions(bounds, rng)
        pm = random_pmatrix(n, width, zero_count(n, width, bounds.puncture_divisor), rng)
        pc = PuncturedCode(ConvCode(k, n, mem, random_polys(k, n, mem, rng)), pm)
        probe_bits = k * -(-PROBE_BITS // k)
        if roundtrip_ok(pc, probe_bits, rng):
            return pc
    raise GenerationFailureError(
        f"{MAX_PROBE_FAILURES} consecutive candidates failed the decoding probe"
    )
