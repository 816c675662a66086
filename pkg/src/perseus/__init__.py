"""Keyed obfuscation of data streams with secret punctured convolutional codes.

A session is a random punctured code plus a keyed LFSR noise generator.
Data is encoded, punctured and flipped by the keystream; the holder of the
parameters strips the noise and decodes exactly, while an eavesdropper
faces blind code reconstruction under noise.
"""

from .analysis import (
    EntropyReport,
    ReconstructionResult,
    byte_entropy,
    equivalent_code,
    reconstruct_bruteforce,
)
from .code import ERASED, ConvCode, ErasureStream, PuncturedCode, encode, puncture, unpuncture
from .codegen import GenBounds, generate_code
from .decode import DecodeReport, decode_dense, decode_linear, decode_viterbi
from .errors import *  # noqa: F401,F403
from .gf2 import Gf2Poly
from .noise import NoiseGenerator, NoiseKey, apply_noise, gen_noise_config, remove_noise
from .session import (
    Frame,
    SessionParams,
    deserialize_params,
    generate_params,
    protect,
    read_frames,
    serialize_params,
    unprotect,
    write_frames,
)

__version__ = "0.1.0"
