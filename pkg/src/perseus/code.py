"""Feedforward convolutional encoders, zero-tail encoding and puncturing."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import LengthMismatchError, PreconditionError
from .gf2 import Gf2Poly, as_bits

ERASED = -1

# the shift-register kernel keeps each register (mem + 1 bits) in an int64
_KERNEL_MAX_MEM = 61


@dataclass(frozen=True)
class ConvCode:
    """A (n, k, mem) feedforward encoder; ``polys[i][j]`` maps input i to output j."""

    k: int
    n: int
    mem: int
    polys: tuple

    def __post_init__(self):
        polys = tuple(
            tuple(p if isinstance(p, Gf2Poly) else Gf2Poly(int(p)) for p in row)
            for row in self.polys
        )
        object.__setattr__(self, "polys", polys)
        if not 1 <= self.k < self.n:
            raise PreconditionError(f"need 1 <= k < n, got k={self.k}, n={self.n}")
        if self.mem < 0:
            raise PreconditionError("memory must be non-negative")
        if len(polys) != self.k or any(len(row) != self.n for row in polys):
            raise PreconditionError("polynomial matrix must be k x n")
        for i, row in enumerate(polys):
            if any(p.degree > self.mem for p in row):
                raise PreconditionError(f"row {i} has a polynomial of degree > mem")
            if all(p.is_zero for p in row):
                raise PreconditionError(f"input {i} is not connected to any output")

    @classmethod
    def from_strings(cls, rows, mem=None) -> "ConvCode":
        """Build from nested lists of polynomial strings such as ``[["1+x^2", "1+x+x^2"]]``."""
        polys = tuple(tuple(Gf2Poly.parse(s) for s in row) for row in rows)
        if mem is None:
            mem = max(p.degree for row in polys for p in row)
        return cls(len(polys), len(polys[0]), mem, polys)

    @property
    def rate(self) -> float:
        return self.k / self.n

    @cached_property
    def poly_bits(self) -> np.ndarray:
        """(k, n) int64 matrix of polynomial bit masks (``mem`` <= 62 only)."""
        return np.array([[p.bits for p in row] for row in self.polys], dtype=np.int64)

    def coded_length(self, msg_bits: int) -> int:
        return self.n * (msg_bits // self.k + self.mem)


@dataclass(frozen=True)
class PuncturedCode:
    """A base code plus an n x M keep(1)/delete(0) puncturing matrix."""

    base: ConvCode
    pmatrix: tuple

    def __post_init__(self):
        pm = tuple(tuple(int(v) for v in row) for row in np.asarray(self.pmatrix))
        object.__setattr__(self, "pmatrix", pm)
        if len(pm) != self.base.n or not pm[0]:
            raise PreconditionError("puncturing matrix must have n rows and M >= 1 columns")
        if any(len(row) != len(pm[0]) for row in pm):
            raise PreconditionError("puncturing matrix rows differ in length")
        if any(v not in (0, 1) for row in pm for v in row):
            raise PreconditionError("puncturing matrix entries must be 0 or 1")
        pat = self.pattern
        if not pat.any(axis=0).all():
            raise PreconditionError("puncturing matrix has an all-zero column")
        if self.weight < self.base.k * self.width:
            raise PreconditionError(
                f"punctured rate {self.base.k * self.width}/{self.weight} exceeds 1"
            )

    @classmethod
    def unpunctured(cls, base: ConvCode) -> "PuncturedCode":
        return cls(base, np.ones((base.n, 1), dtype=np.uint8))

    @cached_property
    def pattern(self) -> np.ndarray:
        return np.array(self.pmatrix, dtype=bool)

    @property
    def width(self) -> int:
        return len(self.pmatrix[0])

    @property
    def weight(self) -> int:
        return int(self.pattern.sum())

    @property
    def k(self) -> int:
        return self.base.k

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def mem(self) -> int:
        return self.base.mem

    @property
    def rate(self) -> float:
        return self.k * self.width / self.weight

    def keep_mask(self, sections: int) -> np.ndarray:
        """Flat section-major mask of transmitted positions."""
        reps = -(-sections // self.width)
        return np.tile(self.pattern.T, (reps, 1))[:sections].ravel()

    def punctured_length(self, sections: int) -> int:
        full, rem = divmod(sections, self.width)
        colw = self.pattern.sum(axis=0)
        return int(full * self.weight + colw[:rem].sum())

    def coded_length(self, msg_bits: int) -> int:
        """Transmitted bit count for a message of ``msg_bits`` bits (multiple of k)."""
        return self.punctured_length(msg_bits // self.k + self.mem)


def pad_message(bits, k: int) -> np.ndarray:
    """Right-pad with zero bits to a multiple of k."""
    bits = as_bits(bits)
    extra = (-bits.size) % k
    if extra:
        bits = np.concatenate([bits, np.zeros(extra, dtype=np.uint8)])
    return bits


def encode(code: ConvCode, message) -> np.ndarray:
    """Zero-tail encode; output is section-major interleaved, n*(L/k + mem) bits."""
    msg = as_bits(message)
    if msg.size % code.k:
        raise PreconditionError(f"message length {msg.size} is not a multiple of k={code.k}")
    if code.mem <= _KERNEL_MAX_MEM:
        return _kernels.encode_shiftreg(msg, code.k, code.n, code.mem, code.poly_bits)
    return _encode_numpy(code, msg)


def _encode_numpy(code: ConvCode, msg: np.ndarray) -> np.ndarray:
    T = msg.size // code.k
    S = T + code.mem
    streams = msg.reshape(T, code.k).T
    out = np.zeros((S, code.n), dtype=np.uint8)
    for i in range(code.k):
        for j in range(code.n):
            bits = code.polys[i][j].bits
            while bits:
                d = (bits & -bits).bit_length() - 1
                out[d : d + T, j] ^= streams[i]
                bits &= bits - 1
    return out.ravel()


def puncture(pc: PuncturedCode, coded) -> np.ndarray:
    coded = as_bits(coded)
    if coded.size % pc.n:
        raise LengthMismatchError("coded stream is not a whole number of sections")
    return coded[pc.keep_mask(coded.size // pc.n)]


@dataclass(frozen=True, eq=False)
class ErasureStream:
    """Interleaved n-stream layout with ERASED (-1) at deleted positions."""

    symbols: np.ndarray
    n: int
    sections: int

    def __post_init__(self):
        if self.symbols.size != self.n * self.sections:
            raise LengthMismatchError("symbol count does not match the stream geometry")

    @property
    def erased(self) -> np.ndarray:
        return self.symbols < 0

    def __eq__(self, other):
        return (
            isinstance(other, ErasureStream)
            and self.n == other.n
            and self.sections == other.sections
            and np.array_equal(self.symbols, other.symbols)
        )


def sections_for_length(pc: PuncturedCode, length: int) -> int:
    """Number of trellis sections whose punctured length is exactly ``length``."""
    full, rem = divmod(length, pc.weight)
    cum = np.concatenate([[0], np.cumsum(pc.pattern.sum(axis=0))])
    hits = np.flatnonzero(cum[:-1] == rem)
    if hits.size == 0:
        raise LengthMismatchError(
            f"{length} symbols do not end on a trellis section boundary"
        )
    return full * pc.width + int(hits[0])


def unpuncture(pc: PuncturedCode, received, sections: int | None = None) -> ErasureStream:
    received = as_bits(received)
    if sections is None:
        sections = sections_for_length(pc, received.size)
    elif pc.punctured_length(sections) != received.size:
        raise LengthMismatchError(
            f"expected {pc.punctured_length(sections)} symbols for {sections} sections,"
            f" got {received.size}"
        )
    mask = pc.keep_mask(sections)
    symbols = np.full(mask.size, ERASED, dtype=np.int8)
    symbols[mask] = received
    return ErasureStream(symbols, pc.n, sections)
