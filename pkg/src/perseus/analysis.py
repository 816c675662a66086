"""Instruments for checking the scheme's claims.

* :func:`equivalent_code` rewrites a punctured code as the non-punctured code
  producing the same symbol stream (polyphase decomposition over one period).
* :func:`byte_entropy` profiles payloads the way a traffic classifier would.
* :func:`reconstruct_bruteforce` is a desk-scale eavesdropper: it searches all
  rate-1/2 encoders of small memory for the one whose parity check
  annihilates an intercepted stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .code import ConvCode, PuncturedCode, encode
from .errors import EmptyInputError, HypothesisSpaceTooLargeError, PreconditionError
from .gf2 import Gf2Poly, as_bits

MAX_RECON_MEM = 8
DEFAULT_THRESHOLD = 0.10


def equivalent_code(pc: PuncturedCode) -> ConvCode:
    """The (I, kM, m) code whose output equals the punctured stream.

    Input ``r*k + i`` is phase r of base input i (the message bit stream is
    unchanged, only grouped by kM), and the outputs are the surviving symbols
    of one period in transmission order.
    """
    k, M, mem = pc.k, pc.width, pc.mem
    base = pc.base
    outputs = [(r, j) for r in range(M) for j in range(pc.n) if pc.pmatrix[j][r]]
    if len(outputs) == k * M:
        raise PreconditionError("a rate-1 punctured code has no equivalent code of rate < 1")
    rows = []
    for rp in range(M):
        for i in range(k):
            row = []
            for r, j in outputs:
                bits = base.polys[i][j].bits
                acc = 0
                d = (r - rp) % M
                while d <= mem:
                    if (bits >> d) & 1:
                        acc ^= 1 << ((d - r + rp) // M)
                    d += M
                row.append(Gf2Poly(acc))
            rows.append(tuple(row))
    dmax = max(p.degree for row in rows for p in row)
    if any(all(p.is_zero for p in row) for row in rows):
        raise PreconditionError("puncturing disconnects an input phase; no equivalent code")
    return ConvCode(k * M, len(outputs), max(dmax, 0), tuple(rows))


def encode_equivalent(code: ConvCode, message, period_inputs: int) -> np.ndarray:
    """Encode with the equivalent code after zero-padding to whole periods."""
    msg = as_bits(message)
    extra = (-msg.size) % period_inputs
    if extra:
        msg = np.concatenate([msg, np.zeros(extra, dtype=np.uint8)])
    return encode(code, msg)


@dataclass(frozen=True, eq=False)
class EntropyReport:
    byte_entropy: float
    histogram: np.ndarray
    sample_bytes: int

    def as_text(self) -> str:
        return f"entropy={self.byte_entropy:.4f}\nsample_bytes={self.sample_bytes}"


def byte_entropy(data) -> EntropyReport:
    """Shannon entropy (bits per byte) of the byte histogram."""
    arr = np.frombuffer(bytes(data), dtype=np.uint8) if not isinstance(data, np.ndarray) else data
    if arr.size == 0:
        raise EmptyInputError("entropy of an empty sample is undefined")
    hist = np.bincount(arr, minlength=256)
    p = hist[hist > 0] / arr.size
    h = float(-(p * np.log2(p)).sum())
    return EntropyReport(min(max(h, 0.0), 8.0), hist, int(arr.size))


# --------------------------------------------------------------------------
# reconstruction demonstrator


@dataclass(eq=False)
class ReconstructionResult:
    candidates: list = field(default_factory=list)
    scores: list = field(default_factory=list)
    tested: int = 0
    success: bool = False
    true_score: float = math.nan
    noise_p: float = 0.0


def _bit_products(stream: np.ndarray, max_mem: int) -> np.ndarray:
    """Row g (an integer poly mask) holds stream * g, bit-packed."""
    L = stream.size
    npoly = 1 << (max_mem + 1)
    shifted = np.zeros((max_mem + 1, L + max_mem), dtype=np.uint8)
    for d in range(max_mem + 1):
        shifted[d, d : d + L] = stream
    prods = np.zeros((npoly, L + max_mem), dtype=np.uint8)
    for g in range(1, npoly):
        low = g & -g
        d = low.bit_length() - 1
        prods[g] = prods[g ^ low] ^ shifted[d]
    return prods


def syndrome_fractions(c1, c2, max_mem: int):
    """Fraction of ones of c1*g2 + c2*g1 for every ordered pair (g1, g2).

    Only the positions fully covered by both streams are scored, so a window
    cut out of a longer transmission behaves like a whole one.
    """
    c1 = as_bits(c1)
    c2 = as_bits(c2)
    if c1.size != c2.size:
        raise PreconditionError("streams must have equal length")
    L = c1.size
    if L <= max_mem:
        raise PreconditionError("intercept shorter than the hypothesis memory")
    p1 = np.packbits(_bit_products(c1, max_mem)[:, max_mem:L], axis=1)
    p2 = np.packbits(_bit_products(c2, max_mem)[:, max_mem:L], axis=1)
    npoly = p1.shape[0]
    count = L - max_mem
    frac = np.empty((npoly, npoly))
    for g1 in range(npoly):
        # row g1, column g2: syndrome c1*g2 + c2*g1
        frac[g1] = np.bitwise_count(p1 ^ p2[g1]).sum(axis=1) / count
    return frac


def reconstruct_bruteforce(intercepted, max_mem: int, noise_p: float = 0.0,
                           threshold: float = DEFAULT_THRESHOLD,
                           true_code: ConvCode | None = None) -> ReconstructionResult:
    """Exhaustive parity-check search over rate-1/2 encoders of memory <= max_mem.

    Hypotheses are unordered pairs g1 <= g2 (as coefficient integers), both
    nonzero, with g1(0) = 1 or g2(0) = 1.  Since the intercept does not say
    which stream came first, each pair is scored under both output orders
    and keeps the lower syndrome fraction of c1*g2 + c2*g1.  Candidates fall
    below ``threshold`` and are listed by score.  ``noise_p`` is the test
    condition, recorded on the result; the search itself never uses it.
    """
    if max_mem > MAX_RECON_MEM:
        raise HypothesisSpaceTooLargeError(
            f"max_mem={max_mem} > {MAX_RECON_MEM}: 2^{2 * (max_mem + 1)} hypotheses"
        )
    if max_mem < 0:
        raise PreconditionError("max_mem must be >= 0")
    bits = as_bits(intercepted)
    if bits.size % 2:
        raise PreconditionError("a rate-1/2 intercept has an even number of symbols")
    frac = syndrome_fractions(bits[0::2], bits[1::2], max_mem)
    npoly = frac.shape[0]
    g1, g2 = np.meshgrid(np.arange(npoly), np.arange(npoly), indexing="ij")
    valid = (g1 > 0) & (g1 <= g2) & (((g1 | g2) & 1) == 1)
    # a pair (a, b) read in swapped stream order scores frac[b, a]
    swapped = frac.T < frac
    score = np.minimum(frac, frac.T)
    result = ReconstructionResult(tested=int(valid.sum()), noise_p=float(noise_p))
    hits = np.argwhere(valid & (score < threshold))
    order = np.lexsort((hits[:, 1], hits[:, 0], score[hits[:, 0], hits[:, 1]]))
    for a, b in hits[order]:
        first, second = (b, a) if swapped[a, b] else (a, b)
        result.candidates.append(
            ConvCode(1, 2, max_mem, ((Gf2Poly(int(first)), Gf2Poly(int(second))),))
        )
        result.scores.append(float(score[a, b]))
    if true_code is not None:
        f1, f2 = (p.bits for p in true_code.polys[0])
        if f1 < npoly and f2 < npoly:
            result.true_score = float(frac[f1, f2])
        truth = sorted((f1, f2))
        result.success = any(
            sorted(p.bits for p in c.polys[0]) == truth for c in result.candidates
        )
    return result


def hypothesis_count(max_mem: int) -> int:
    """Size of the exhaustive hypothesis space for memory <= max_mem."""
    npoly = 1 << (max_mem + 1)
    g = np.arange(npoly)
    g1, g2 = np.meshgrid(g, g, indexing="ij")
    return int(((g1 > 0) & (g1 <= g2) & (((g1 | g2) & 1) == 1)).sum())


def bsc(bits, p: float, rng: np.random.Generator) -> np.ndarray:
    """Binary symmetric channel: flip each bit independently with probability p."""
    bits = as_bits(bits)
    return bits ^ (rng.random(bits.size) < p).astype(np.uint8)


# systematic, check weight 4: the true pair survives p = 0.02 and drowns by p = 0.03
DEMO_CODE = ConvCode.from_strings([["1", "1+x+x^2"]])
DEMO_NOISE_LEVELS = (0.0, 0.01, 0.02, 0.05, 0.15, 0.25)


def attack_sweep(noise_levels=DEMO_NOISE_LEVELS, trials: int = 100, intercept_bits: int = 10_000,
                 max_mem: int = 6, threshold: float = DEFAULT_THRESHOLD,
                 true_code: ConvCode = DEMO_CODE, seed: int | None = None):
    """Reconstruction success rate per noise level; yields one dict per level."""
    if true_code.k != 1 or true_code.n != 2 or true_code.mem > max_mem:
        raise PreconditionError("demo encoder must be rate 1/2 with memory <= max_mem")
    rng = np.random.default_rng(seed)
    msg_bits = intercept_bits // 2 - true_code.mem
    for p in noise_levels:
        wins = 0
        ncand = 0
        tested = 0
        for _ in range(trials):
            msg = rng.integers(0, 2, msg_bits, dtype=np.uint8)
            rx = bsc(encode(true_code, msg), p, rng)
            res = reconstruct_bruteforce(rx, max_mem, p, threshold, true_code)
            wins += res.success
            ncand += len(res.candidates)
            tested = res.tested
        yield {
            "p": p,
            "trials": trials,
            "intercept_bits": intercept_bits,
            "hypotheses": tested,
            "success_rate": wins / trials,
            "mean_candidates": ncand / trials,
        }


def format_record(rec: dict) -> str:
    return " ".join(f"{k}={v:.4g}" if isinstance(v, float) else f"{k}={v}" for k, v in rec.items())


def protected_entropy(sp, data: bytes, chunk_bytes: int = 2048) -> EntropyReport:
    """Entropy of the packed binary payload produced by :func:`protect`."""
    from .session import protect

    frames = protect(sp, data, chunk_bytes, mode="binary")
    return byte_entropy(b"".join(f.payload for f in frames))

