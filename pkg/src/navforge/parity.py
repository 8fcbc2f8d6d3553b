"""Six parity bits per 30-bit navigation word from a fixed 6x24 check matrix.

The scheme is stateless: bits 25-30 of a word depend only on its own 24
data bits.  It detects every single-bit error but is not the ICD parity
algorithm (no D29*/D30* chaining, no data complementing).

Words are handled as Python ints with bit 1 (first transmitted) as the most
significant bit.  :func:`to_bits` / :func:`from_bits` convert to and from
explicit 0/1 sequences.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Sequence, Union

DATA_BITS = 24
PARITY_BITS = 6
WORD_BITS = DATA_BITS + PARITY_BITS

DATA_MASK = (1 << DATA_BITS) - 1
PARITY_MASK = (1 << PARITY_BITS) - 1

CHECK_MATRIX = (
    (1, 1, 1, 0, 1, 1, 0, 0, 0, 1, 1, 1, 1, 1, 0, 0, 1, 1, 0, 1, 0, 0, 1, 0),
    (0, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1, 1, 1, 1, 1, 0, 0, 1, 1, 0, 1, 0, 0, 1),
    (1, 0, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1, 1, 1, 1, 1, 0, 0, 1, 1, 0, 1, 0, 0),
    (0, 1, 0, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1, 1, 1, 1, 1, 0, 0, 1, 1, 0, 1, 0),
    (1, 0, 1, 0, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1, 1, 1, 1, 1, 0, 0, 1, 1, 0, 1),
    (0, 0, 1, 0, 1, 1, 0, 1, 1, 1, 1, 0, 1, 0, 1, 0, 0, 0, 1, 0, 0, 1, 1, 1),
)

BitsLike = Union[int, Sequence[int]]


def to_bits(value: int, width: int) -> tuple[int, ...]:
    """MSB-first tuple of ``width`` bits."""
    return tuple((value >> (width - 1 - k)) & 1 for k in range(width))


def from_bits(bits: Sequence[int]) -> int:
    value = 0
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"bit values must be 0 or 1, got {b!r}")
        value = (value << 1) | b
    return value


def _row_masks(matrix) -> tuple[int, ...]:
    return tuple(from_bits(row) for row in matrix)


ROW_MASKS = _row_masks(CHECK_MATRIX)


def check_matrix_columns_nonzero(matrix=CHECK_MATRIX) -> bool:
    if len(matrix) != PARITY_BITS or any(len(r) != DATA_BITS for r in matrix):
        return False
    return all(any(row[c] for row in matrix) for c in range(DATA_BITS))


assert check_matrix_columns_nonzero(), "check matrix has an all-zero column"


def _as_data(data: BitsLike) -> int:
    if not hasattr(data, "__len__"):
        d = operator.index(data)
        if not 0 <= d <= DATA_MASK:
            raise ValueError(f"data word {d:#x} exceeds 24 bits")
        return d
    if len(data) != DATA_BITS:
        raise ValueError(f"data word must have 24 bits, got {len(data)}")
    return from_bits(data)


def compute_parity(data: BitsLike) -> int:
    """Return the 6 parity bits for 24 data bits, packed MSB-first (bit 25 high)."""
    d = _as_data(data)
    parity = 0
    for mask in ROW_MASKS:
        parity = (parity << 1) | ((d & mask).bit_count() & 1)
    return parity


@dataclass(frozen=True)
class Word30:
    data: int
    parity: int

    def __post_init__(self):
        if not 0 <= self.data <= DATA_MASK:
            raise ValueError(f"data {self.data:#x} exceeds 24 bits")
        if not 0 <= self.parity <= PARITY_MASK:
            raise ValueError(f"parity {self.parity:#x} exceeds 6 bits")

    @classmethod
    def from_int(cls, value: int) -> Word30:
        if not 0 <= value < 1 << WORD_BITS:
            raise ValueError(f"word {value:#x} exceeds 30 bits")
        return cls(value >> PARITY_BITS, value & PARITY_MASK)

    @property
    def value(self) -> int:
        return (self.data << PARITY_BITS) | self.parity

    def bits(self) -> tuple[int, ...]:
        return to_bits(self.value, WORD_BITS)

    def bitstring(self) -> str:
        return format(self.value, "030b")

    def flip(self, k: int) -> Word30:
        """Copy with bit ``k`` (1..30) inverted."""
        if not 1 <= k <= WORD_BITS:
            raise ValueError(f"bit index {k} outside 1..30")
        return Word30.from_int(self.value ^ (1 << (WORD_BITS - k)))


def append_parity(data: BitsLike) -> Word30:
    d = _as_data(data)
    return Word30(d, compute_parity(d))


def verify_word(word: Word30) -> bool:
    return compute_parity(word.data) == word.parity
