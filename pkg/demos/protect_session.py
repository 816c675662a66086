"""Protect and recover a file with freshly generated session parameters.

The parameter blob is the shared secret: code, puncturing pattern,
noise registers and filter.  Anyone holding it can undo the channel;
anyone without it sees a noisy, high-entropy bit stream.
"""

import random
import time
from pathlib import Path

from perseus.analysis import byte_entropy
from perseus.errors import IntegrityError
from perseus.session import (
    deserialize_params,
    generate_params,
    protect,
    read_frames,
    serialize_params,
    unprotect,
    write_frames,
)

CORPUS = Path(__file__).resolve().parents[1] / "tests" / "data" / "corpus_mixed.txt"

rng = random.Random(1)
sp = generate_params(rng=rng)
pc = sp.code
blob = serialize_params(sp)
print(f"code k={pc.k} n={pc.n} mem={pc.mem} period={pc.width} rate={pc.rate:.3f}")
print(f"noise weight={int(sp.filter.sum())}/16 ({sp.noise_probability:.3f})  blob={len(blob)} bytes")

data = CORPUS.read_bytes()[:200_000]
t0 = time.perf_counter()
container = write_frames(protect(sp, data, mode="binary"))
t1 = time.perf_counter()
print(f"{len(data)} bytes -> {len(container)} bytes in {t1 - t0:.2f}s")
print(f"entropy {byte_entropy(data).byte_entropy:.3f} -> {byte_entropy(container).byte_entropy:.3f} bits/byte")

# the receiver only has the blob and the container
back = unprotect(deserialize_params(blob), read_frames(container))
assert back == data
print(f"recovered in {time.perf_counter() - t1:.2f}s")

try:
    unprotect(generate_params(rng=rng), read_frames(container))
except IntegrityError as exc:
    print("wrong parameters:", exc)
