"""Regenerate the wire-format fixtures (run once; outputs are checked in).

    python tests/fixtures/make_fixtures.py
"""

import hashlib
import json
import random
from pathlib import Path

from perseus.analysis import equivalent_code
from perseus.code import ConvCode, PuncturedCode
from perseus.noise import NoiseKey
from perseus.session import SessionParams, generate_params, protect, serialize_params, write_frames

HERE = Path(__file__).parent
CORPUS = HERE.parent / "data" / "corpus_mixed.txt"


def sha(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def describe(sp):
    pc = sp.code
    return {
        "k": pc.k, "n": pc.n, "mem": pc.mem, "width": pc.width, "proba": sp.proba,
        "bf": sp.bf, "fills": list(sp.key.fills),
        "polys": [[str(p) for p in row] for row in pc.base.polys],
        "pmatrix": [list(r) for r in pc.pmatrix],
    }


def main():
    plain = CORPUS.read_bytes()[:6000]
    (HERE / "plaintext.bin").write_bytes(plain)
    sessions = {
        "default": generate_params(rng=random.Random(20240601)),
        "lowentropy": generate_params(proba_range=(5, 5), rng=random.Random(20240602)),
        "example1": SessionParams(
            PuncturedCode(ConvCode.from_strings([["1+x^2", "1+x+x^2"]]), [[1, 0], [1, 1]]),
            NoiseKey(0x2B1D7, 0x4C0FFE, 0x0BADCAFE, 0x5EED1234), 0b0000_0100_1000_0010, 20,
        ),
    }
    meta = {"plaintext": {"file": "plaintext.bin", "sha256": sha(plain), "bytes": len(plain)}}
    for name, sp in sessions.items():
        blob = serialize_params(sp)
        (HERE / f"params_{name}.bin").write_bytes(blob)
        entry = {"params": f"params_{name}.bin", "params_sha256": sha(blob), **describe(sp)}
        for mode in ("hex", "binary"):
            frames = write_frames(protect(sp, plain, chunk_bytes=2048, mode=mode))
            fname = f"frames_{name}_{mode}.bin"
            (HERE / fname).write_bytes(frames)
            entry[f"frames_{mode}"] = fname
            entry[f"frames_{mode}_sha256"] = sha(frames)
        if name == "example1":
            entry["equivalent"] = [[str(p) for p in row] for row in equivalent_code(sp.code).polys]
        meta[name] = entry
    (HERE / "fixtures.json").write_text(json.dumps(meta, indent=2) + "\n")


if __name__ == "__main__":
    main()
