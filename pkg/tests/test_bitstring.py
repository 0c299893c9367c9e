from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from isl.bitstring import (
    BitString,
    EOperator,
    GeneratorWord,
    StructureError,
    apply_E,
    apply_generator,
    bit_reversal_order,
    invert_E,
    zero_frequency,
)
from isl.numkit import Dyadic


def _random_string(rng, n):
    return BitString(rng.integers(0, 2, 1 << n), n)


def _ref_i(bits):
    # list-based reference for i(u, v) = (v, not u)
    h = len(bits) // 2
    return bits[h:] + [1 - b for b in bits[:h]]


def test_generator_examples():
    s = BitString.from_bits([0, 0, 1, 1])
    assert apply_generator("i", s).bits.tolist() == [1, 1, 1, 1]
    assert apply_generator("-1", s).bits.tolist() == [1, 1, 0, 0]
    assert apply_generator("1", s) == s
    # j(u, v) = (i(v), i(u)) with u = [0, 0], v = [1, 1]
    assert apply_generator("j", s).bits.tolist() == [1, 0, 0, 1]
    z = BitString.zeros(3)
    assert apply_generator("ii", z) == BitString.ones(3)


def test_generator_matches_list_reference():
    rng = np.random.default_rng(7)
    for n in range(2, 8):
        s = _random_string(rng, n)
        bits = s.bits.tolist()
        assert apply_generator("i", s).bits.tolist() == _ref_i(bits)
        h = len(bits) // 2
        assert apply_generator("j", s).bits.tolist() == _ref_i(bits[h:]) + _ref_i(bits[:h])


def test_generator_word_parse():
    assert GeneratorWord.parse("ij").word == ("i", "j")
    assert GeneratorWord.parse("-1k").word == ("-1", "k")
    assert GeneratorWord.parse("-i").word == ("-1", "i")
    assert (GeneratorWord.parse("i") * GeneratorWord.parse("j")).word == ("i", "j")
    with pytest.raises(StructureError):
        GeneratorWord.parse("q")


def test_generator_rejects_short_strings():
    with pytest.raises(StructureError):
        BitString.from_bits([0, 1])
    with pytest.raises(StructureError):
        BitString.from_bits([0, 1, 1])


@pytest.mark.parametrize("n", range(2, 11))
def test_quaternion_identities(n):
    rng = np.random.default_rng(n)
    for _ in range(100):
        s = _random_string(rng, n)
        neg = apply_generator("-1", s)
        for g in ("ii", "jj", "kk"):
            assert apply_generator(g, s) == neg
        assert apply_generator("ij", s) == apply_generator("k", s)
        assert apply_generator("ji", s) == apply_generator("-1k", s)
        assert apply_generator("-1-1", s) == s


def test_bit_reversal_order_reference():
    for n in range(1, 9):
        ref = [int(format(i, f"0{n}b")[::-1], 2) for i in range(1 << n)]
        assert bit_reversal_order(n).tolist() == ref


def test_e_operator_examples():
    z = BitString.zeros(3)
    e = EOperator(Dyadic(1), Dyadic(0), 3)
    assert e.negations == 4
    assert apply_E(e, z).bits.tolist() == [1, 0, 1, 0, 1, 0, 1, 0]
    e = EOperator(Dyadic(1, 1), Dyadic(1), 3)      # alpha = 1/2, beta = 1
    assert e.negations == 2 and e.rotation == 2
    # negate positions 0 and 4, then roll by 2
    assert apply_E(e, z).bits.tolist() == [0, 0, 1, 0, 0, 0, 1, 0]
    assert zero_frequency(apply_E(e, z)) == Fraction(3, 4)


def test_e_operator_rejects():
    with pytest.raises(ValueError):
        EOperator(Dyadic(5, 1), Dyadic(0), 4)          # alpha > 2
    with pytest.raises(ValueError):
        EOperator(Dyadic(0), Dyadic(4), 4)             # beta >= 4
    with pytest.raises(ValueError):
        EOperator(Dyadic(1, 4), Dyadic(0), 4)          # alpha needs N bits, E needs N-1
    with pytest.raises(ValueError):
        EOperator(Dyadic(0), Dyadic(1, 5), 4)
    e = EOperator(Dyadic(1), Dyadic(0), 4)
    with pytest.raises(StructureError):
        apply_E(e, BitString.zeros(3))


@pytest.mark.parametrize("n", range(2, 9))
def test_e_zero_frequency_exhaustive(n):
    z = BitString.zeros(n)
    for m in range((1 << n) + 1):
        alpha = Dyadic(m, n - 1)
        e = EOperator(alpha, Dyadic(0), n)
        expected = abs(1 - alpha.to_fraction() / 2)
        assert zero_frequency(apply_E(e, z)) == expected


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 8).flatmap(lambda n: st.tuples(
    st.just(n), st.integers(0, 1 << n), st.integers(0, (4 << n) - 1), st.integers(0, (4 << n) - 1))))
def test_zero_frequency_independent_of_beta(case):
    n, m, b1, b2 = case
    z = BitString.zeros(n)
    f1 = zero_frequency(apply_E(EOperator(Dyadic(m, n - 1), Dyadic(b1, n), n), z))
    f2 = zero_frequency(apply_E(EOperator(Dyadic(m, n - 1), Dyadic(b2, n), n), z))
    assert f1 == f2


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 9).flatmap(lambda n: st.tuples(
    st.just(n), st.integers(0, 1 << n), st.integers(0, (4 << n) - 1), st.integers(0, 2 ** 32 - 1))))
def test_e_invertible(case):
    n, m, b, seed = case
    s = _random_string(np.random.default_rng(seed), n)
    e = EOperator(Dyadic(m, n - 1), Dyadic(b, n), n)
    assert invert_E(e, apply_E(e, s)) == s


@given(st.integers(2, 10).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, 2 ** 32 - 1))))
def test_hex_round_trip(case):
    n, seed = case
    s = _random_string(np.random.default_rng(seed), n)
    assert BitString.from_hex(s.to_hex(), n) == s


def test_hex_msb_first():
    s = BitString.from_bits([1, 0, 0, 0, 0, 0, 0, 1])
    assert s.to_hex() == "81"
    assert BitString.from_hex("0f", 3).bits.tolist() == [0, 0, 0, 0, 1, 1, 1, 1]
