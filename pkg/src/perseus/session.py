"""Secret parameter blob and framed payload wire formats.

Params blob (little-endian)::

    "PRSS" | version u8 | k u8 | n u8 | mem u16 | M u16 | proba u8 | bf u16
    | init1..init4 u32 | k*n polynomials, ceil((mem+1)/8) bytes each, row-major
    | puncturing matrix, row-major, bit-packed MSB-first | CRC32

Frame::

    flags u8 | chunk_index u32 | plain_len_bytes u32 | coded_bit_len u32 | payload

The low 7 bits of ``flags`` are the frame format (1 = hex nibble text,
2 = packed binary); bit 7 marks the final frame of a stream.
"""

from __future__ import annotations

import random
import struct
import zlib
from dataclasses import dataclass

import numpy as np

from .code import ConvCode, PuncturedCode, encode, pad_message, puncture, unpuncture
from .codegen import GenBounds, default_rng, generate_code
from .decode import decode_linear
from .errors import (
    AmbiguousDecodeError,
    CorruptionError,
    FormatError,
    IntegrityError,
    InvalidParamsError,
    LengthMismatchError,
    MalformedPayloadError,
    PerseusError,
    SequenceError,
)
from .gf2 import (
    Gf2Poly,
    bits_to_bytes,
    bits_to_nibble_hex,
    bytes_to_bits,
    nibble_hex_to_bits,
)
from .noise import (
    DEFAULT_PROBA_RANGE,
    NoiseGenerator,
    NoiseKey,
    check_proba_range,
    filter_from_int,
    filter_to_int,
    gen_noise_config,
)

MAGIC = b"PRSS"
PARAMS_VERSION = 1
_HEAD = struct.Struct("<4sBBBHHBH4I")

FRAME_HEX = 1
FRAME_BINARY = 2
FINAL_FLAG = 0x80
_FRAME = struct.Struct("<BIII")
FRAME_HEADER_SIZE = _FRAME.size

DEFAULT_CHUNK_BYTES = 2048


@dataclass(frozen=True)
class SessionParams:
    code: PuncturedCode
    key: NoiseKey
    bf: int
    proba: int

    def __post_init__(self):
        if not 0 <= self.bf < 1 << 16:
            raise InvalidParamsError("filter table must fit in 16 bits")
        if not 1 <= self.proba <= 49:
            raise InvalidParamsError("noise probability must lie in [1, 49] percent")

    @property
    def filter(self) -> np.ndarray:
        return filter_from_int(self.bf)

    @property
    def noise_probability(self) -> float:
        return bin(self.bf).count("1") / 16.0

    def noise_generator(self) -> NoiseGenerator:
        return NoiseGenerator(self.key, self.filter, self.proba)


def generate_params(bounds: GenBounds | None = None, proba_range=DEFAULT_PROBA_RANGE,
                    rng: random.Random | None = None) -> SessionParams:
    rng = rng or default_rng()
    check_proba_range(*proba_range)
    code = generate_code(bounds, rng)
    bf, proba = gen_noise_config(rng, proba_range)
    return SessionParams(code, NoiseKey.generate(rng), filter_to_int(bf), proba)


def params_size(k: int, n: int, mem: int, width: int) -> int:
    return _HEAD.size + k * n * ((mem + 8) // 8) + (n * width + 7) // 8 + 4


def serialize_params(sp: SessionParams) -> bytes:
    pc = sp.code
    k, n, mem, width = pc.k, pc.n, pc.mem, pc.width
    pbytes = (mem + 8) // 8
    out = bytearray(
        _HEAD.pack(MAGIC, PARAMS_VERSION, k, n, mem, width, sp.proba, sp.bf, *sp.key.fills)
    )
    for row in pc.base.polys:
        for p in row:
            out += p.bits.to_bytes(pbytes, "little")
    out += np.packbits(pc.pattern.astype(np.uint8).ravel()).tobytes()
    out += struct.pack("<I", zlib.crc32(out))
    return bytes(out)


def deserialize_params(blob: bytes) -> SessionParams:
    blob = bytes(blob)
    if len(blob) < _HEAD.size + 4:
        raise FormatError("params blob is truncated")
    magic, version, k, n, mem, width, proba, bf, *fills = _HEAD.unpack_from(blob)
    if magic != MAGIC:
        raise FormatError("bad magic, not a params blob")
    if version != PARAMS_VERSION:
        raise FormatError(f"unsupported params version {version}")
    expected = params_size(k, n, mem, width)
    if len(blob) != expected:
        raise FormatError(f"params blob has {len(blob)} bytes, header implies {expected}")
    (crc,) = struct.unpack_from("<I", blob, expected - 4)
    if zlib.crc32(blob[: expected - 4]) != crc:
        raise CorruptionError("params blob CRC mismatch")
    pbytes = (mem + 8) // 8
    pos = _HEAD.size
    rows = []
    for _ in range(k):
        row = []
        for _ in range(n):
            row.append(Gf2Poly(int.from_bytes(blob[pos : pos + pbytes], "little")))
            pos += pbytes
        rows.append(tuple(row))
    nbytes = (n * width + 7) // 8
    flat = np.unpackbits(np.frombuffer(blob[pos : pos + nbytes], dtype=np.uint8))
    try:
        code = PuncturedCode(ConvCode(k, n, mem, tuple(rows)),
                             flat[: n * width].reshape(n, width))
        return SessionParams(code, NoiseKey(*fills), bf, proba)
    except PerseusError as exc:
        raise InvalidParamsError(str(exc)) from exc


@dataclass(frozen=True)
class Frame:
    chunk_index: int
    plain_len_bytes: int
    coded_bit_len: int
    payload: str | bytes
    fmt: int = FRAME_HEX
    final: bool = False

    @property
    def flags(self) -> int:
        return self.fmt | (FINAL_FLAG if self.final else 0)

    def coded_bits(self) -> np.ndarray:
        if self.fmt == FRAME_HEX:
            return nibble_hex_to_bits(self.payload, self.coded_bit_len)
        if len(self.payload) * 8 < self.coded_bit_len:
            raise LengthMismatchError("binary payload shorter than its bit length")
        return bytes_to_bits(self.payload)[: self.coded_bit_len]

    def packed_payload(self) -> bytes:
        """Payload as packed binary bytes (hex nibbles paired)."""
        if self.fmt == FRAME_BINARY:
            return bytes(self.payload)
        return bits_to_bytes(self.coded_bits())

    def to_bytes(self) -> bytes:
        head = _FRAME.pack(self.flags, self.chunk_index, self.plain_len_bytes, self.coded_bit_len)
        body = self.payload.encode("ascii") if self.fmt == FRAME_HEX else bytes(self.payload)
        return head + body


def _payload_size(fmt: int, bits: int) -> int:
    return (bits + 3) // 4 if fmt == FRAME_HEX else (bits + 7) // 8


def write_frames(frames) -> bytes:
    return b"".join(f.to_bytes() for f in frames)


def read_frames(blob: bytes) -> list[Frame]:
    frames = []
    pos = 0
    blob = bytes(blob)
    while pos < len(blob):
        if len(blob) - pos < FRAME_HEADER_SIZE:
            raise SequenceError(f"container truncated inside frame {len(frames)} header")
        flags, idx, plain, bits = _FRAME.unpack_from(blob, pos)
        fmt = flags & 0x7F
        if fmt not in (FRAME_HEX, FRAME_BINARY):
            raise FormatError(f"unknown frame format {fmt}")
        pos += FRAME_HEADER_SIZE
        size = _payload_size(fmt, bits)
        if len(blob) - pos < size:
            raise SequenceError(f"container truncated inside frame {idx} payload")
        body = blob[pos : pos + size]
        if fmt == FRAME_HEX:
            try:
                body = body.decode("ascii")
            except UnicodeDecodeError as exc:
                raise MalformedPayloadError(f"chunk {idx}: payload is not ASCII hex") from exc
        frames.append(Frame(idx, plain, bits, body, fmt, bool(flags & FINAL_FLAG)))
        pos += size
    return frames


def protect(sp: SessionParams, data: bytes, chunk_bytes: int = DEFAULT_CHUNK_BYTES,
            mode: str = "hex") -> list[Frame]:
    if chunk_bytes < 1:
        raise ValueError("chunk_bytes must be >= 1")
    fmt = {"hex": FRAME_HEX, "binary": FRAME_BINARY}[mode]
    pc = sp.code
    gen = sp.noise_generator()
    frames = []
    nchunks = -(-len(data) // chunk_bytes)
    for idx in range(nchunks):
        chunk = data[idx * chunk_bytes : (idx + 1) * chunk_bytes]
        msg = pad_message(bytes_to_bits(chunk), pc.k)
        tx = puncture(pc, encode(pc.base, msg))
        tx ^= gen.stream(tx.size)
        payload = bits_to_nibble_hex(tx) if fmt == FRAME_HEX else bits_to_bytes(tx)
        frames.append(Frame(idx, len(chunk), int(tx.size), payload, fmt, idx == nchunks - 1))
    return frames


def expected_coded_bits(pc: PuncturedCode, plain_len_bytes: int) -> int:
    msg_bits = 8 * plain_len_bytes
    msg_bits += (-msg_bits) % pc.k
    return pc.coded_length(msg_bits)


def unprotect(sp: SessionParams, frames) -> bytes:
    frames = list(frames)
    pc = sp.code
    gen = sp.noise_generator()
    out = bytearray()
    for pos, fr in enumerate(frames):
        if fr.chunk_index != pos:
            raise SequenceError(f"expected chunk {pos}, got chunk {fr.chunk_index}")
        if fr.final != (pos == len(frames) - 1):
            raise SequenceError(
                f"chunk {pos}: stream ends early" if not fr.final
                else f"chunk {pos}: frames follow the final frame"
            )
        msg_bits = 8 * fr.plain_len_bytes
        msg_bits += (-msg_bits) % pc.k
        if fr.coded_bit_len != pc.coded_length(msg_bits):
            raise IntegrityError("coded length does not match the session code", pos)
        try:
            rx = fr.coded_bits()
        except (LengthMismatchError, MalformedPayloadError) as exc:
            raise IntegrityError(str(exc), pos) from exc
        rx ^= gen.stream(rx.size)
        es = unpuncture(pc, rx, msg_bits // pc.k + pc.mem)
        try:
            msg = decode_linear(pc, es, msg_bits).message
        except IntegrityError as exc:
            raise IntegrityError(str(exc), pos) from exc
        except AmbiguousDecodeError as exc:
            raise AmbiguousDecodeError(exc.deficit, pos) from exc
        out += bits_to_bytes(msg[: 8 * fr.plain_len_bytes])
    return bytes(out)
