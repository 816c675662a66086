import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import ref_noise
from perseus.errors import InvalidParamsError, InvalidRangeError
from perseus.noise import (
    KEY_BITS,
    MASKS,
    NoiseGenerator,
    NoiseKey,
    apply_noise,
    check_proba_range,
    filter_from_int,
    filter_to_int,
    filter_with_weight,
    gen_noise_config,
    register_period,
    remove_noise,
)

KEY = NoiseKey(0x5A5A5, 0x123456, 0x1ABCDEF1 & MASKS[2], 0x7EADBEEF)


def test_masks_follow_register_lengths():
    assert MASKS == (0x7FFFF, 0x7FFFFF, 0x1FFFFFFF, 0x7FFFFFFF)
    assert KEY_BITS == 102


def test_zero_or_oversized_fill_rejected():
    with pytest.raises(InvalidParamsError):
        NoiseKey(0, 1, 1, 1)
    with pytest.raises(InvalidParamsError):
        NoiseKey(1, 1 << 23, 1, 1)


def test_key_generation_in_range():
    rng = random.Random(1)
    for _ in range(200):
        key = NoiseKey.generate(rng)
        assert all(0 < v <= m for v, m in zip(key.fills, MASKS))


def test_stream_matches_reference_lfsr():
    bf = filter_from_int(0b0110_1001_0011_1100)
    got = NoiseGenerator(KEY, bf).stream(3000)
    assert got.tolist() == ref_noise(KEY.fills, bf.tolist(), 3000)


def test_frozen_keystream_prefix():
    # regression anchor for the bit-exact LFSR/filter convention
    bf = filter_from_int(0b0110_1001_0011_1100)
    prefix = NoiseGenerator(KEY, bf).stream(64)
    assert "".join(map(str, prefix)) == "".join(map(str, ref_noise(KEY.fills, bf.tolist(), 64)))
    assert int("".join(map(str, prefix)), 2) == 0xE5D77F933AEA7862


def test_stream_is_continuous_across_calls():
    bf = filter_with_weight(5, random.Random(2))
    g1 = NoiseGenerator(KEY, bf)
    g2 = NoiseGenerator(KEY, bf)
    joined = np.concatenate([g1.stream(17), g1.stream(1000), [g1.step()]])
    assert np.array_equal(joined, g2.stream(1018))


def test_equal_keys_equal_streams():
    bf = filter_with_weight(4, random.Random(3))
    a = NoiseGenerator(KEY, bf).stream(10_000)
    b = NoiseGenerator(NoiseKey(*KEY.fills), bf.copy()).stream(10_000)
    assert np.array_equal(a, b)


def test_zero_filter_is_identity():
    bits = np.random.default_rng(0).integers(0, 2, 500, dtype=np.uint8)
    gen = NoiseGenerator(KEY, np.zeros(16, dtype=np.uint8))
    assert np.array_equal(apply_noise(gen, bits), bits)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 1), max_size=400), st.integers(0, 0xFFFF))
def test_remove_inverts_apply(bits, bf):
    bits = np.array(bits, dtype=np.uint8)
    noisy = apply_noise(NoiseGenerator(KEY, filter_from_int(bf)), bits)
    assert np.array_equal(remove_noise(NoiseGenerator(KEY, filter_from_int(bf)), noisy), bits)


@pytest.mark.parametrize("index,period", [(0, (1 << 19) - 1), (1, (1 << 23) - 1)])
def test_register_has_maximal_period(index, period):
    assert register_period(index) == period


def test_flip_rate_matches_filter_weight():
    rng = random.Random(11)
    N = 1_000_000
    for weight in (1, 4, 6, 9, 15):
        bf = filter_with_weight(weight, rng)
        gen = NoiseGenerator(NoiseKey.generate(rng), bf)
        p = weight / 16
        ones = int(gen.stream(N).sum())
        assert abs(ones - N * p) <= 3 * np.sqrt(N * p * (1 - p))
        assert gen.probability == p


def test_filter_int_roundtrip():
    for v in (0, 1, 0x8000, 0xBEEF, 0xFFFF):
        assert filter_to_int(filter_from_int(v)) == v
    assert filter_from_int(1)[0] == 1 and filter_from_int(0x8000)[15] == 1


def test_default_proba_range():
    rng = random.Random(5)
    for _ in range(500):
        bf, proba = gen_noise_config(rng)
        assert 15 <= proba <= 35
        assert 0 < bf.sum() < 16


def test_mean_filter_weight_tracks_proba():
    rng = random.Random(6)
    weights = [gen_noise_config(rng, (25, 25))[0].sum() for _ in range(10_000)]
    # 16 * 0.25 = 4, nudged up ~1% by redrawing empty tables
    assert np.mean(weights) == pytest.approx(4.0, abs=0.1)


def test_low_entropy_mode_allowed():
    _, proba = gen_noise_config(random.Random(1), (5, 5))
    assert proba == 5


@pytest.mark.parametrize("lo,hi", [(0, 10), (10, 50), (30, 20), (-1, 5)])
def test_bad_ranges(lo, hi):
    with pytest.raises(InvalidRangeError):
        check_proba_range(lo, hi)
    with pytest.raises(InvalidRangeError):
        gen_noise_config(random.Random(0), (lo, hi))


def test_filter_validation():
    with pytest.raises(InvalidParamsError):
        NoiseGenerator(KEY, [0, 1, 2] + [0] * 13)
    with pytest.raises(InvalidParamsError):
        NoiseGenerator(KEY, [0] * 15)
