import numpy as np
import pytest
from hypothesis import given, strategies as st

from navforge.parity import (
    CHECK_MATRIX,
    Word30,
    append_parity,
    check_matrix_columns_nonzero,
    compute_parity,
    from_bits,
    to_bits,
    verify_word,
)

# Independent transcription of the reference check matrix, one row per line.
PRINTED_H = """
111011000111110011010010
011101100011111001101001
101110110001111100110100
010111011000111110011010
101011101100011111001101
001011011110101000100111
"""
H = np.array([[int(c) for c in row] for row in PRINTED_H.split()], dtype=np.int64)

words24 = st.integers(0, (1 << 24) - 1)


def oracle_parity(data: int) -> int:
    d = np.array(to_bits(data, 24), dtype=np.int64)
    return from_bits((H @ d % 2).tolist())


def test_matrix_matches_printed():
    assert np.array_equal(np.array(CHECK_MATRIX), H)
    assert H.shape == (6, 24)
    assert check_matrix_columns_nonzero()


def test_column_check_detects_zero_column():
    bad = [list(r) for r in CHECK_MATRIX]
    for r in bad:
        r[5] = 0
    assert not check_matrix_columns_nonzero(bad)


@pytest.mark.parametrize("col", range(24))
def test_unit_vectors_give_printed_columns(col):
    data = 1 << (23 - col)
    assert to_bits(compute_parity(data), 6) == tuple(H[:, col])


def test_parity_examples():
    assert compute_parity(0) == 0
    assert to_bits(compute_parity(1 << 23), 6) == (1, 0, 1, 0, 1, 0)
    assert format(compute_parity((1 << 24) - 1), "06b") == "000011"


def test_accepts_bit_sequences():
    bits = [1] + [0] * 23
    assert compute_parity(bits) == compute_parity(1 << 23)
    with pytest.raises(ValueError):
        compute_parity([1, 0, 1])
    with pytest.raises(ValueError):
        compute_parity(1 << 24)


@given(words24)
def test_matches_matrix_oracle(d):
    assert compute_parity(d) == oracle_parity(d)


def test_tlm_word_parity():
    data = 0b10001011 << 16
    w = append_parity(data)
    assert w.data == data
    assert format(w.parity, "06b") == "010010"
    assert w.bitstring() == "100010110000000000000000010010"


@given(words24)
def test_round_trip(d):
    w = append_parity(d)
    assert w.data == d
    assert verify_word(w)
    assert Word30.from_int(w.value) == w


@given(words24, st.integers(1, 30))
def test_single_bit_flip_detected(d, k):
    assert not verify_word(append_parity(d).flip(k))


@given(words24, words24)
def test_linearity(d1, d2):
    assert compute_parity(d1 ^ d2) == compute_parity(d1) ^ compute_parity(d2)


def test_zero_word_valid():
    assert verify_word(Word30(0, 0))
    assert append_parity(0).value == 0


def test_word_bounds():
    with pytest.raises(ValueError):
        Word30(1 << 24, 0)
    with pytest.raises(ValueError):
        Word30(0, 64)
    with pytest.raises(ValueError):
        Word30(0, 0).flip(31)
