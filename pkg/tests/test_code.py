import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import coeffs_of, puncture_walk, shift_register_encode
from perseus.code import (
    ERASED,
    ConvCode,
    PuncturedCode,
    _encode_numpy,
    encode,
    pad_message,
    puncture,
    sections_for_length,
    unpuncture,
)
from perseus.errors import LengthMismatchError, PreconditionError
from perseus.gf2 import Gf2Poly, as_bits

EX1 = ConvCode.from_strings([["1+x^2", "1+x+x^2"]])
EX1_P = [[1, 0], [1, 1]]


@st.composite
def codes(draw, max_k=3, max_n=5, max_mem=6):
    k = draw(st.integers(1, max_k))
    n = draw(st.integers(k + 1, max_n))
    mem = draw(st.integers(0, max_mem))
    rows = []
    for _ in range(k):
        row = draw(st.lists(st.integers(0, (1 << (mem + 1)) - 1), min_size=n, max_size=n)
                   .filter(any))
        rows.append(tuple(Gf2Poly(b) for b in row))
    return ConvCode(k, n, mem, tuple(rows))


@st.composite
def punctured_codes(draw, **kw):
    base = draw(codes(**kw))
    width = draw(st.integers(1, 4))
    flat = draw(st.lists(st.integers(0, 1), min_size=base.n * width, max_size=base.n * width))
    pm = np.array(flat, dtype=np.uint8).reshape(base.n, width)
    if not pm.any(axis=0).all() or pm.sum() < base.k * width:
        pm[:] = 1
    return PuncturedCode(base, pm)


def test_example_codeword():
    # c1 = m_t + m_{t-2}, c2 = m_t + m_{t-1} + m_{t-2}; flush steps read 10 11
    out = encode(EX1, as_bits("1011"))
    assert "".join(map(str, out)) == "11" "01" "00" "10" "10" "11"
    assert out.tolist() == shift_register_encode([[[1, 0, 1], [1, 1, 1]]], [1, 0, 1, 1])


def test_zero_message_gives_zero_codeword():
    for L in (0, 2, 10):
        out = encode(EX1, np.zeros(L, dtype=np.uint8))
        assert out.size == 2 * (L + 2) and not out.any()


def test_length_must_be_multiple_of_k():
    code = ConvCode.from_strings([["1", "x", "1+x"], ["x", "1", "0"]])
    with pytest.raises(PreconditionError):
        encode(code, [1, 0, 1])


def test_example_against_shift_register_oracle():
    rng = np.random.default_rng(7)
    for _ in range(10_000):
        m = rng.integers(0, 2, rng.integers(1, 24), dtype=np.uint8)
        assert encode(EX1, m).tolist() == shift_register_encode([[[1, 0, 1], [1, 1, 1]]], m.tolist())


@settings(max_examples=200, deadline=None)
@given(codes(), st.data())
def test_encoder_matches_oracle(code, data):
    T = data.draw(st.integers(0, 12))
    m = np.array(data.draw(st.lists(st.integers(0, 1), min_size=T * code.k,
                                    max_size=T * code.k)), dtype=np.uint8)
    polys = [[p.coeffs(code.mem + 1).tolist() for p in row] for row in code.polys]
    assert encode(code, m).tolist() == shift_register_encode(polys, m.tolist())


@settings(max_examples=100, deadline=None)
@given(codes(), st.data())
def test_encoder_is_linear(code, data):
    L = code.k * data.draw(st.integers(0, 20))
    bits = st.lists(st.integers(0, 1), min_size=L, max_size=L)
    a = np.array(data.draw(bits), dtype=np.uint8)
    b = np.array(data.draw(bits), dtype=np.uint8)
    assert np.array_equal(encode(code, a ^ b), encode(code, a) ^ encode(code, b))


def test_numpy_path_agrees_with_kernel():
    rng = np.random.default_rng(3)
    for _ in range(20):
        k, n, mem = int(rng.integers(1, 4)), int(rng.integers(4, 7)), int(rng.integers(0, 30))
        rows = [[Gf2Poly(int(rng.integers(1, 1 << (mem + 1)))) for _ in range(n)]
                for _ in range(k)]
        code = ConvCode(k, n, mem, rows)
        m = rng.integers(0, 2, k * 50, dtype=np.uint8)
        assert np.array_equal(encode(code, m), _encode_numpy(code, m))


def test_long_memory_uses_numpy_path():
    code = ConvCode(1, 2, 70, ((Gf2Poly(1), Gf2Poly(1 | 1 << 70)),))
    m = np.array([1, 0, 1], dtype=np.uint8)
    out = encode(code, m).reshape(-1, 2)
    assert out.shape == (73, 2)
    assert out[:3, 0].tolist() == [1, 0, 1]
    assert out[70:, 1].tolist() == [1, 0, 1]


def test_code_invariants():
    with pytest.raises(PreconditionError):
        ConvCode.from_strings([["1", "x"], ["1", "1"]])  # k == n
    with pytest.raises(PreconditionError):
        ConvCode(1, 2, 1, ((Gf2Poly.parse("x^2"), Gf2Poly(1)),))
    with pytest.raises(PreconditionError):
        ConvCode(1, 2, 1, ((Gf2Poly(0), Gf2Poly(0)),))


def test_punctured_invariants():
    with pytest.raises(PreconditionError):
        PuncturedCode(EX1, [[1, 0], [1, 0]])  # zero column
    k2 = ConvCode.from_strings([["1", "x", "1"], ["x", "1", "1+x"]])
    with pytest.raises(PreconditionError):
        PuncturedCode(k2, [[1, 0], [0, 1], [1, 0]])  # 4 inputs, 3 outputs per period
    PuncturedCode(EX1, [[1, 0, 0], [0, 1, 1]])  # rate exactly 1 is allowed
    pc = PuncturedCode(EX1, EX1_P)
    assert pc.weight == 3 and pc.width == 2
    assert pc.rate == pytest.approx(2 / 3)


def test_all_ones_pattern_is_identity():
    pc = PuncturedCode(EX1, np.ones((2, 3)))
    coded = encode(EX1, as_bits("110101"))
    assert np.array_equal(puncture(pc, coded), coded)
    es = unpuncture(pc, coded)
    assert not es.erased.any()
    assert np.array_equal(es.symbols, coded)


def test_example_puncturing_order():
    # symbols named by (stream, time) so the output order is visible
    pc = PuncturedCode(EX1, EX1_P)
    names = [f"{s}{t}" for t in range(6) for s in "xy"]
    kept = [names[i] for i in np.flatnonzero(pc.keep_mask(6))]
    assert kept == ["x0", "y0", "y1", "x2", "y2", "y3", "x4", "y4", "y5"]


def test_single_zero_deletes_once_per_period():
    pc = PuncturedCode(EX1, [[0, 1], [1, 1]])
    assert puncture(pc, np.ones(4, dtype=np.uint8)).size == 3
    # 8 symbols span two periods
    assert puncture(pc, np.ones(8, dtype=np.uint8)).size == 6


def test_example_unpuncture_positions():
    pc = PuncturedCode(EX1, EX1_P)
    es = unpuncture(pc, as_bits("101101"))
    assert es.sections == 4
    assert np.flatnonzero(es.erased).tolist() == [2, 6]
    assert es.symbols.tolist() == [1, 0, ERASED, 1, 1, 0, ERASED, 1]


def test_unpuncture_length_checks():
    pc = PuncturedCode(EX1, EX1_P)
    with pytest.raises(LengthMismatchError):
        unpuncture(pc, as_bits("1"))  # x0 alone ends no section
    with pytest.raises(LengthMismatchError):
        unpuncture(pc, as_bits("101"), sections=4)
    with pytest.raises(LengthMismatchError):
        puncture(pc, as_bits("101"))


@settings(max_examples=200, deadline=None)
@given(punctured_codes(), st.data())
def test_puncture_unpuncture_roundtrip(pc, data):
    T = data.draw(st.integers(0, 15))
    m = np.array(data.draw(st.lists(st.integers(0, 1), min_size=T * pc.k,
                                    max_size=T * pc.k)), dtype=np.uint8)
    coded = encode(pc.base, m)
    tx = puncture(pc, coded)
    assert tx.tolist() == puncture_walk(pc.pmatrix, coded.tolist(), pc.n)
    assert tx.size == pc.coded_length(m.size)
    es = unpuncture(pc, tx, T + pc.mem)
    kept = ~es.erased
    assert np.array_equal(es.symbols[kept], coded[kept])
    assert np.array_equal(kept, pc.keep_mask(T + pc.mem))


def test_sections_for_length_inverts_punctured_length():
    pc = PuncturedCode(ConvCode.from_strings([["1+x", "x", "1"]]), [[1, 0, 0], [0, 1, 0], [1, 1, 1]])
    for s in range(40):
        assert sections_for_length(pc, pc.punctured_length(s)) == s


def test_coded_length_arithmetic():
    pc = PuncturedCode(EX1, EX1_P)
    # 10 message bits -> 12 sections -> 6 periods of weight 3
    assert pc.coded_length(10) == 18
    assert EX1.coded_length(10) == 24


def test_pad_message():
    assert pad_message(as_bits("101"), 2).tolist() == [1, 0, 1, 0]
    assert pad_message(as_bits("10"), 2).tolist() == [1, 0]
