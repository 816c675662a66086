"""Receiver-side decoders.

:func:`decode_linear` is the production path: once the keyed noise has been
stripped, every received symbol is an exact GF(2) equation in the message
bits, so decoding is banded elimination.  :func:`decode_viterbi` is the
classical maximum-likelihood decoder for small trellises and channels that
still carry errors; :func:`decode_dense` is a brute linear-algebra oracle.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .code import ErasureStream, PuncturedCode, encode, puncture, unpuncture
from .errors import (
    AmbiguousDecodeError,
    IntegrityError,
    LengthMismatchError,
    ParametersTooLargeError,
    PreconditionError,
)

log = logging.getLogger(__name__)

VITERBI_MAX_STATE_BITS = 16
DENSE_MAX_BITS = 8192


@dataclass(frozen=True, eq=False)
class DecodeReport:
    message: np.ndarray
    rank_deficit: int
    method: str


def _check_geometry(pc: PuncturedCode, es: ErasureStream, msg_bits: int) -> int:
    if msg_bits < 0 or msg_bits % pc.k:
        raise PreconditionError(f"message length {msg_bits} is not a multiple of k={pc.k}")
    T = msg_bits // pc.k
    if es.n != pc.n or es.sections != T + pc.mem:
        raise LengthMismatchError(
            f"stream has {es.sections} sections of {es.n}, expected"
            f" {T + pc.mem} sections of {pc.n}"
        )
    return T


def _templates(pc: PuncturedCode) -> tuple[np.ndarray, int]:
    # template bit (mem - d)*k + i of output j is f_ij[d]
    k, n, mem = pc.k, pc.n, pc.mem
    W = k * (mem + 1)
    nwords = (W + 63) // 64
    out = np.zeros((n, nwords), dtype=np.uint64)
    for j in range(n):
        acc = 0
        for i in range(k):
            bits = pc.base.polys[i][j].bits
            while bits:
                d = (bits & -bits).bit_length() - 1
                acc |= 1 << ((mem - d) * k + i)
                bits &= bits - 1
        for w in range(nwords):
            out[j, w] = (acc >> (64 * w)) & 0xFFFFFFFFFFFFFFFF
    return out, W


def _unpack_message(vals: np.ndarray, start: int, count: int) -> np.ndarray:
    bits = np.unpackbits(vals.astype("<u8").view(np.uint8), bitorder="little")
    return bits[start : start + count].copy()


def _window_cap(W: int) -> int:
    cap = 1024
    while cap < 4 * W + 128:
        cap *= 2
    return min(cap, 1 << 16)


def verify_codeword(pc: PuncturedCode, es: ErasureStream, message: np.ndarray) -> bool:
    """True iff ``message`` re-encodes to every non-erased symbol of ``es``."""
    coded = encode(pc.base, message)
    known = ~es.erased
    return bool(np.array_equal(coded[known], es.symbols[known].astype(np.uint8)))


def decode_linear(pc: PuncturedCode, es: ErasureStream, msg_bits: int,
                  strategy: str = "auto") -> DecodeReport:
    """Exact erasure decoding of a noise-free punctured codeword.

    ``strategy`` is ``"stream"`` (on-line substitution, fast when the code
    has a short decoding delay), ``"band"`` (bounded-width elimination for
    any code) or ``"auto"`` (stream, falling back to band when the unsolved
    window outgrows its buffer).
    """
    T = _check_geometry(pc, es, msg_bits)
    if T == 0:
        return DecodeReport(np.zeros(0, dtype=np.uint8), 0, "linear")
    tpl, W = _templates(pc)
    sym = np.ascontiguousarray(es.symbols, dtype=np.int8)
    status = _kernels.STATUS_OVERFLOW
    if strategy in ("auto", "stream"):
        status, vals, deficit = _kernels.solve_stream(
            sym, pc.k, pc.n, pc.mem, T, tpl, W, _window_cap(W)
        )
        if status == _kernels.STATUS_OVERFLOW:
            if strategy == "stream":
                raise PreconditionError("decoding delay exceeds the streaming window")
            log.debug("streaming window overflow, falling back to band elimination")
    if status == _kernels.STATUS_OVERFLOW:
        status, vals, deficit = _kernels.solve_band(sym, pc.k, pc.n, pc.mem, T, tpl, W)

    if status == _kernels.STATUS_INCONSISTENT:
        raise IntegrityError("received symbols are not a codeword")
    if status == _kernels.STATUS_DEFICIT:
        raise AmbiguousDecodeError(int(deficit))
    message = _unpack_message(vals, pc.mem * pc.k, msg_bits)
    # equations skipped once their unknowns were solved are checked here
    if not verify_codeword(pc, es, message):
        raise IntegrityError("decoded message does not re-encode to the received symbols")
    return DecodeReport(message, 0, "linear")


def generator_matrix(pc: PuncturedCode, msg_bits: int) -> np.ndarray:
    """Rows are the full (unpunctured) codewords of the unit messages."""
    k = pc.k
    T = msg_bits // k
    rows = np.zeros((msg_bits, pc.n * (T + pc.mem)), dtype=np.uint8)
    for u in range(msg_bits):
        e = np.zeros(msg_bits, dtype=np.uint8)
        e[u] = 1
        rows[u] = encode(pc.base, e)
    return rows


def gf2_solve(A: np.ndarray, b: np.ndarray):
    """Solve A x = b over GF(2) by dense Gauss-Jordan elimination.

    Returns ``(x, rank, consistent)``; free variables are set to zero.
    """
    A = np.array(A, dtype=np.uint8) & 1
    b = np.array(b, dtype=np.uint8) & 1
    rows, cols = A.shape
    M = np.concatenate([A, b[:, None]], axis=1)
    pivots = []
    r = 0
    for c in range(cols):
        hit = np.flatnonzero(M[r:, c])
        if hit.size == 0:
            continue
        p = r + hit[0]
        if p != r:
            M[[r, p]] = M[[p, r]]
        others = np.flatnonzero(M[:, c])
        others = others[others != r]
        M[others] ^= M[r]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    consistent = not M[r:, cols].any()
    x = np.zeros(cols, dtype=np.uint8)
    for i, c in enumerate(pivots):
        x[c] = M[i, cols]
    return x, len(pivots), consistent


def decode_dense(pc: PuncturedCode, es: ErasureStream, msg_bits: int) -> DecodeReport:
    """Oracle decoder: materialise the generator matrix and eliminate densely."""
    _check_geometry(pc, es, msg_bits)
    if msg_bits > DENSE_MAX_BITS:
        raise ParametersTooLargeError(f"dense oracle is limited to {DENSE_MAX_BITS} bits")
    G = generator_matrix(pc, msg_bits)
    known = ~es.erased
    A = G[:, known].T
    b = es.symbols[known].astype(np.uint8)
    x, rank, consistent = gf2_solve(A, b)
    if not consistent:
        raise IntegrityError("received symbols are not a codeword")
    if rank < msg_bits:
        raise AmbiguousDecodeError(msg_bits - rank)
    return DecodeReport(x, 0, "dense")


def decode_viterbi(pc: PuncturedCode, es: ErasureStream, msg_bits: int) -> DecodeReport:
    """Hard-decision ML decoding; erased symbols add nothing to path metrics."""
    if pc.k * pc.mem > VITERBI_MAX_STATE_BITS:
        raise ParametersTooLargeError(
            f"k*mem = {pc.k * pc.mem} > {VITERBI_MAX_STATE_BITS}; use decode_linear"
        )
    T = _check_geometry(pc, es, msg_bits)
    sym = np.ascontiguousarray(es.symbols, dtype=np.int8)
    msg, _ = _kernels.viterbi_hard(sym, pc.k, pc.n, pc.mem, T, pc.base.poly_bits)
    return DecodeReport(msg, 0, "viterbi")


def random_bits(rng, count: int) -> np.ndarray:
    """``count`` uniform bits from a :class:`random.Random`-style source."""
    if count == 0:
        return np.zeros(0, dtype=np.uint8)
    raw = rng.getrandbits(8 * ((count + 7) // 8)).to_bytes((count + 7) // 8, "little")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8))[:count].copy()


def roundtrip_ok(pc: PuncturedCode, msg_bits: int, rng) -> bool:
    """Encode, puncture and linearly decode a random message; True on exact recovery."""
    msg = random_bits(rng, msg_bits)
    rx = puncture(pc, encode(pc.base, msg))
    try:
        got = decode_linear(pc, unpuncture(pc, rx), msg_bits).message
    except (AmbiguousDecodeError, IntegrityError):
        return False
    return bool(np.array_equal(got, msg))
