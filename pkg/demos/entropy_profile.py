# Byte entropy of protected text as the noise filter gets heavier.

import random
from pathlib import Path

from perseus.analysis import byte_entropy
from perseus.code import ConvCode, PuncturedCode
from perseus.noise import NoiseKey, filter_to_int, filter_with_weight
from perseus.session import SessionParams, generate_params, protect

CORPUS = Path(__file__).resolve().parents[1] / "tests" / "data" / "corpus_mixed.txt"
data = CORPUS.read_bytes()
print(f"plaintext  {byte_entropy(data).byte_entropy:.3f} bits/byte over {len(data)} bytes")

rng = random.Random(4)
key = NoiseKey.generate(rng)
small = PuncturedCode(ConvCode.from_strings([["1+x^2", "1+x+x^2"]]), [[1, 0], [1, 1]])


def payload_entropy(sp):
    frames = protect(sp, data, mode="binary")
    return byte_entropy(b"".join(f.payload for f in frames)).byte_entropy


# a short code leaves visible structure, so the noise level shows through
for pct in (5, 15, 25, 35):
    bf = filter_to_int(filter_with_weight(round(16 * pct / 100), rng))
    print(f"p={pct:>2}%  {payload_entropy(SessionParams(small, key, bf, pct)):.3f}")

# generated codes already scramble almost everything
for pct in (5, 35):
    sp = generate_params(proba_range=(pct, pct), rng=rng)
    print(f"generated code, p={pct}%  {payload_entropy(sp):.4f}")
