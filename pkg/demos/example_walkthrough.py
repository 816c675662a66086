# Encode a four-bit message with the small rate-1/2 code (1+x^2, 1+x+x^2),
# puncture it to rate 2/3 and look at the block code hiding underneath.

import numpy as np

from perseus.analysis import encode_equivalent, equivalent_code
from perseus.code import ConvCode, PuncturedCode, encode, puncture, unpuncture
from perseus.decode import decode_linear, decode_viterbi

code = ConvCode.from_strings([["1+x^2", "1+x+x^2"]])
msg = np.array([1, 0, 1, 1], dtype=np.uint8)

coded = encode(code, msg)
print("message  ", "".join(map(str, msg)))
print("codeword ", " ".join(f"{a}{b}" for a, b in coded.reshape(-1, 2)))

# drop the first output on every other step
pc = PuncturedCode(code, [[1, 0], [1, 1]])
sent = puncture(pc, coded)
print(f"punctured {''.join(map(str, sent))}  ({coded.size} -> {sent.size} bits, rate {pc.rate:.3f})")

# the receiver puts erasures back where bits were removed
es = unpuncture(pc, sent)
print("erasures at", np.flatnonzero(es.erased).tolist())
print("linear  ", decode_linear(pc, es, msg.size).message)
print("viterbi ", decode_viterbi(pc, es, msg.size).message)

# one period of the punctured code is an ordinary (2, 3) code
eq = equivalent_code(pc)
for i, row in enumerate(eq.polys, 1):
    print(f"row {i}:", "  ".join(str(p) for p in row))

longer = np.random.default_rng(0).integers(0, 2, 40, dtype=np.uint8)
a = puncture(pc, encode(code, longer))
b = encode_equivalent(eq, longer, pc.k * pc.width)
n = min(a.size, b.size)
assert np.array_equal(a[:n], b[:n])
print(f"both encoders agree on {n} bits")
