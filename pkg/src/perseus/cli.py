"""``perseus`` command line: generate, protect, unprotect, measure, attack.

Reports are ``key=value`` lines on stdout.  Exit status: 0 ok, 1 other
failure, 2 usage, 3 format, 4 corruption, 5 integrity, 6 sequence.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import analysis, codegen, session
from .code import ConvCode
from .errors import (
    AmbiguousDecodeError,
    CorruptionError,
    FormatError,
    IntegrityError,
    InvalidBoundsError,
    InvalidParamsError,
    InvalidRangeError,
    MalformedPayloadError,
    PerseusError,
    SequenceError,
)
from .noise import DEFAULT_PROBA_RANGE, check_proba_range

EXIT_OK = 0
EXIT_OTHER = 1
EXIT_USAGE = 2
EXIT_FORMAT = 3
EXIT_CORRUPTION = 4
EXIT_INTEGRITY = 5
EXIT_SEQUENCE = 6

_EXIT_MAP = (
    ((InvalidBoundsError, InvalidRangeError), EXIT_USAGE),
    ((FormatError, MalformedPayloadError, InvalidParamsError), EXIT_FORMAT),
    ((CorruptionError,), EXIT_CORRUPTION),
    ((IntegrityError, AmbiguousDecodeError), EXIT_INTEGRITY),
    ((SequenceError,), EXIT_SEQUENCE),
)


def exit_code_for(exc: BaseException) -> int:
    for types, code in _EXIT_MAP:
        if isinstance(exc, types):
            return code
    return EXIT_OTHER


def parse_proba(text: str) -> tuple[int, int]:
    """``"15..35"`` or ``"5"`` (percent)."""
    lo, sep, hi = str(text).partition("..")
    try:
        return int(lo), int(hi if sep else lo)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad probability range {text!r}, want LO..HI") from None


def emit(out, **fields):
    for key, value in fields.items():
        if isinstance(value, float):
            value = f"{value:.6g}"
        print(f"{key}={value}", file=out)


def _bounds(args) -> codegen.GenBounds:
    d = codegen.GenBounds()
    return codegen.GenBounds(
        k_min=args.k_min if args.k_min is not None else d.k_min,
        k_span=args.k_span if args.k_span is not None else d.k_span,
        n_min=args.n_min if args.n_min is not None else d.n_min,
        n_span=args.n_span if args.n_span is not None else d.n_span,
        mem_min=args.mem_min if args.mem_min is not None else d.mem_min,
        mem_span=args.mem_span if args.mem_span is not None else d.mem_span,
        mwidth_min=args.mwidth_min if args.mwidth_min is not None else d.mwidth_min,
        mwidth_span=args.mwidth_span if args.mwidth_span is not None else d.mwidth_span,
        puncture_divisor=(args.puncture_divisor if args.puncture_divisor is not None
                          else d.puncture_divisor),
    )


def _load_params(path) -> session.SessionParams:
    return session.deserialize_params(Path(path).read_bytes())


def cmd_gen(args, out) -> int:
    proba = args.proba
    check_proba_range(*proba)
    rng = codegen.default_rng(args.seed)
    sp = session.generate_params(_bounds(args), proba, rng)
    blob = session.serialize_params(sp)
    Path(args.out).write_bytes(blob)
    pc = sp.code
    emit(out, k=pc.k, n=pc.n, mem=pc.mem, width=pc.width, weight=pc.weight,
         rate=pc.rate, proba=sp.proba, noise_weight=bin(sp.bf).count("1"),
         noise_probability=sp.noise_probability, blob_bytes=len(blob),
         low_entropy_mode=int(proba[1] < DEFAULT_PROBA_RANGE[0]))
    return EXIT_OK


def cmd_encode(args, out) -> int:
    sp = _load_params(args.params)
    data = Path(args.input).read_bytes()
    t0 = time.perf_counter()
    frames = session.protect(sp, data, args.chunk_bytes, args.mode)
    elapsed = time.perf_counter() - t0
    container = session.write_frames(frames)
    Path(args.out).write_bytes(container)
    packed = b"".join(f.packed_payload() for f in frames)
    emit(out, frames=len(frames), plain_bytes=len(data), container_bytes=len(container),
         coded_bits=sum(f.coded_bit_len for f in frames))
    if data:
        emit(out, expansion=len(packed) / len(data),
             payload_entropy=analysis.byte_entropy(packed).byte_entropy)
    else:
        emit(out, expansion="nan", payload_entropy="nan")
    emit(out, seconds=elapsed)
    return EXIT_OK


def cmd_decode(args, out) -> int:
    sp = _load_params(args.params)
    frames = session.read_frames(Path(args.input).read_bytes())
    t0 = time.perf_counter()
    data = session.unprotect(sp, frames)
    elapsed = time.perf_counter() - t0
    Path(args.out).write_bytes(data)
    emit(out, frames=len(frames), plain_bytes=len(data), seconds=elapsed)
    return EXIT_OK


def cmd_entropy(args, out) -> int:
    rep = analysis.byte_entropy(Path(args.input).read_bytes())
    emit(out, entropy=rep.byte_entropy, sample_bytes=rep.sample_bytes)
    return EXIT_OK


def cmd_attack_demo(args, out) -> int:
    code = ConvCode.from_strings([args.code.split(",")]) if args.code else analysis.DEMO_CODE
    emit(out, true_code=",".join(str(p) for p in code.polys[0]), max_mem=args.max_mem,
         threshold=args.threshold)
    for rec in analysis.attack_sweep(args.levels, args.trials, args.bits, args.max_mem,
                                     args.threshold, code, args.seed):
        print(analysis.format_record(rec), file=out)
    return EXIT_OK


def cmd_equiv(args, out) -> int:
    sp = _load_params(args.params)
    eq = analysis.equivalent_code(sp.code)
    emit(out, k=eq.k, n=eq.n, mem=eq.mem)
    for i, row in enumerate(eq.polys, start=1):
        for j, p in enumerate(row, start=1):
            emit(out, **{f"f{i}_{j}": p})
    return EXIT_OK


def _add_bounds(p):
    g = p.add_argument_group("generation bounds (value = min + uniform[0, span])")
    for name in ("k", "n", "mem", "mwidth"):
        g.add_argument(f"--{name}-min", type=int)
        g.add_argument(f"--{name}-span", type=int)
    g.add_argument("--puncture-divisor", type=int)
    g.add_argument("--proba", type=parse_proba, default=DEFAULT_PROBA_RANGE,
                   help="noise probability range in percent, LO..HI (default 15..35)")


def build_parser(config: dict | None = None) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="perseus", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="JSON file of option defaults; flags override")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a secret parameter blob")
    _add_bounds(p)
    p.add_argument("--seed", type=int, help="deterministic test RNG (never for real keys)")
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("encode", help="protect a file into a frame container")
    p.add_argument("--params", required=True)
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--out", required=True)
    p.add_argument("--chunk-bytes", type=int, default=session.DEFAULT_CHUNK_BYTES)
    p.add_argument("--mode", choices=("hex", "binary"), default="hex")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="recover a file from a frame container")
    p.add_argument("--params", required=True)
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("entropy", help="byte entropy of a file")
    p.add_argument("input")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("attack-demo", help="brute-force encoder reconstruction sweep")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--bits", type=int, default=10_000, help="intercept length")
    p.add_argument("--max-mem", type=int, default=6)
    p.add_argument("--threshold", type=float, default=analysis.DEFAULT_THRESHOLD)
    p.add_argument("--levels", type=lambda s: tuple(float(v) for v in s.split(",")),
                   default=analysis.DEMO_NOISE_LEVELS, help="comma-separated noise levels")
    p.add_argument("--code", help='true encoder, e.g. "1,1+x+x^2"')
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_attack_demo)

    p = sub.add_parser("equiv", help="print the equivalent non-punctured code")
    p.add_argument("--params", required=True)
    p.set_defaults(func=cmd_equiv)
    if config:
        for p in sub.choices.values():
            p.set_defaults(**config)
    return parser


def load_config(argv) -> dict:
    """Option defaults from ``--config FILE`` (JSON, keys named like the flags)."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return {}
    cfg = {k.replace("-", "_"): v for k, v in json.loads(Path(known.config).read_text()).items()}
    if "proba" in cfg:
        p = cfg["proba"]
        cfg["proba"] = tuple(p) if isinstance(p, (list, tuple)) else parse_proba(p)
    return cfg


def main(argv=None, out=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    out = out or sys.stdout
    try:
        parser = build_parser(load_config(argv))
    except (OSError, ValueError, argparse.ArgumentTypeError) as exc:
        print(f"perseus: bad config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except PerseusError as exc:
        print(f"perseus: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    except OSError as exc:
        print(f"perseus: {exc}", file=sys.stderr)
        return EXIT_OTHER


if __name__ == "__main__":
    sys.exit(main())
