"""GF(2) primitives: dense polynomials, bit streams and the hex-nibble transport.

Bit streams are plain ``numpy.uint8`` arrays holding one 0/1 symbol per
element.  Polynomials are immutable and stored bit-packed in a Python int,
bit ``d`` being the coefficient of ``x**d``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import LengthMismatchError, MalformedPayloadError, PreconditionError

MAX_DEGREE = (1 << 16) - 1

_HEX_RE = re.compile(r"[0-9a-fA-F]*")


def clmul(a: int, b: int) -> int:
    """Carry-less product of two non-negative ints."""
    if a.bit_length() < b.bit_length():
        a, b = b, a
    out = 0
    while b:
        low = b & -b
        out ^= a << (low.bit_length() - 1)
        b ^= low
    return out


@dataclass(frozen=True)
class Gf2Poly:
    """Polynomial over GF(2); ``bits`` bit d is the coefficient of x^d."""

    bits: int = 0

    def __post_init__(self):
        if self.bits < 0:
            raise PreconditionError("polynomial bit mask must be non-negative")
        if self.bits.bit_length() - 1 > MAX_DEGREE:
            raise PreconditionError(f"degree exceeds {MAX_DEGREE}")

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int]) -> "Gf2Poly":
        bits = 0
        for d, c in enumerate(coeffs):
            if c & 1:
                bits |= 1 << d
        return cls(bits)

    @classmethod
    def from_exponents(cls, exps: Iterable[int]) -> "Gf2Poly":
        bits = 0
        for e in exps:
            bits ^= 1 << e
        return cls(bits)

    @classmethod
    def parse(cls, text: str) -> "Gf2Poly":
        """Parse ``"1+x+x^3"`` style text (``x**3`` and ``0`` also accepted)."""
        text = text.replace(" ", "").replace("**", "^")
        if text in ("", "0"):
            return cls(0)
        exps = []
        for term in text.split("+"):
            if term == "1":
                exps.append(0)
            elif term == "x":
                exps.append(1)
            elif term.startswith("x^") and term[2:].isdigit():
                exps.append(int(term[2:]))
            else:
                raise PreconditionError(f"cannot parse polynomial term {term!r}")
        return cls.from_exponents(exps)

    @property
    def degree(self) -> int:
        """Degree, or -1 for the zero polynomial."""
        return self.bits.bit_length() - 1

    @property
    def is_zero(self) -> bool:
        return self.bits == 0

    def coeffs(self, length: int | None = None) -> np.ndarray:
        n = self.degree + 1 if length is None else length
        return np.array([(self.bits >> d) & 1 for d in range(n)], dtype=np.uint8)

    def weight(self) -> int:
        return bin(self.bits).count("1")

    def __add__(self, other: "Gf2Poly") -> "Gf2Poly":
        return Gf2Poly(self.bits ^ other.bits)

    __xor__ = __add__

    def __mul__(self, other: "Gf2Poly") -> "Gf2Poly":
        return poly_mul(self, other)

    def __call__(self, x: int) -> int:
        """Evaluate at x in GF(2)."""
        if x & 1:
            return self.weight() & 1
        return self.bits & 1

    def __str__(self) -> str:
        if self.bits == 0:
            return "0"
        terms = []
        for d in range(self.degree + 1):
            if (self.bits >> d) & 1:
                terms.append("1" if d == 0 else "x" if d == 1 else f"x^{d}")
        return "+".join(terms)


def poly_mul(a: Gf2Poly, b: Gf2Poly) -> Gf2Poly:
    return Gf2Poly(clmul(a.bits, b.bits))


def as_bits(seq) -> np.ndarray:
    """Coerce a 0/1 sequence (or a string of '0'/'1') to a bit stream."""
    if isinstance(seq, str):
        seq = [int(c) for c in seq if c in "01"]
    arr = np.asarray(seq, dtype=np.uint8)
    if arr.ndim != 1:
        arr = arr.ravel()
    if arr.size and arr.max() > 1:
        raise PreconditionError("bit stream symbols must be 0 or 1")
    return arr


def bytes_to_bits(data: bytes) -> np.ndarray:
    """MSB-first expansion of a byte string."""
    return np.unpackbits(np.frombuffer(bytes(data), dtype=np.uint8))


def bits_to_bytes(bits: np.ndarray) -> bytes:
    """MSB-first packing; a trailing partial byte is zero-padded."""
    return np.packbits(np.asarray(bits, dtype=np.uint8)).tobytes()


def bits_to_nibble_hex(bits) -> str:
    bits = np.asarray(bits, dtype=np.uint8)
    nchars = (bits.size + 3) // 4
    return bits_to_bytes(bits).hex()[:nchars]


def nibble_hex_to_bits(text: str, bit_len: int) -> np.ndarray:
    if not _HEX_RE.fullmatch(text):
        raise MalformedPayloadError("payload contains non-hex characters")
    if bit_len < 0 or bit_len > 4 * len(text):
        raise LengthMismatchError(
            f"bit length {bit_len} does not fit in {len(text)} hex nibbles"
        )
    padded = text if len(text) % 2 == 0 else text + "0"
    raw = np.frombuffer(bytes.fromhex(padded), dtype=np.uint8)
    return np.unpackbits(raw)[:bit_len].copy()
