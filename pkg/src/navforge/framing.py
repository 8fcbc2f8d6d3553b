"""Navigation message framing: TLM/HOW words, field packing, subframes, superframes.

Bit numbering follows transmission order: bit 1 of a word is sent first and
is the most significant bit of its integer form.  A subframe is 10 words
(300 bits, 6 s), a frame is 5 subframes, and a superframe is 25 frames in
which subframes 1-3 repeat and subframes 4-5 page through 25 payloads.

Timing: a subframe whose HOW carries Z-count ``z`` starts ``6*(z - 1)``
seconds into the week and word ``n`` starts 0.6 s per word later, so
``6*z - 4.8`` is the start of word 3 (see :func:`word_start_time`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .clock import ClockPolynomial
from .ephemeris import BroadcastEphemeris
from .errors import FieldOverflow, InvalidSubframeId, MissingField, UnknownField
from .gpstime import SECONDS_PER_WEEK, SUBFRAME_SECONDS, ZCOUNT_MODULUS
from .parity import DATA_BITS, DATA_MASK, Word30, append_parity

PREAMBLE = 0b10001011
WORDS_PER_SUBFRAME = 10
SUBFRAME_BITS = 300
SUBFRAMES_PER_FRAME = 5
FRAME_BITS = SUBFRAME_BITS * SUBFRAMES_PER_FRAME
PAGES = 25
SUPERFRAME_BITS = FRAME_BITS * PAGES
WORD_SECONDS = 0.6

PAGE_WORDS = WORDS_PER_SUBFRAME - 2


def build_tlm(reserved: int = 0) -> Word30:
    if not 0 <= reserved < 1 << 16:
        raise ValueError(f"TLM reserved field {reserved:#x} exceeds 16 bits")
    return append_parity((PREAMBLE << 16) | reserved)


def build_how(z: int, subframe_id: int, flags: int = 0) -> Word30:
    """HOW: bits 1-17 Z-count, 18-19 flags, 20-22 subframe ID, 23-24 zero."""
    if subframe_id not in range(1, 6):
        raise InvalidSubframeId(f"subframe id {subframe_id} not in 1..5")
    if not 0 <= z < ZCOUNT_MODULUS:
        raise ValueError(f"Z-count {z} outside 0..100799")
    if not 0 <= flags < 4:
        raise ValueError(f"HOW flags {flags} exceed 2 bits")
    return append_parity((z << 7) | (flags << 5) | (subframe_id << 2))


def how_fields(word: Word30) -> tuple[int, int, int]:
    """Decode ``(z, flags, subframe_id)`` from a HOW word."""
    d = word.data
    return d >> 7, (d >> 5) & 0b11, (d >> 2) & 0b111


def word_start_time(z: int, word: int) -> float:
    """Seconds of week at which ``word`` (1..10) of the subframe with HOW ``z`` starts."""
    return (SUBFRAME_SECONDS * (z - 1) + WORD_SECONDS * (word - 1)) % SECONDS_PER_WEEK


# --- field layouts -----------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    word: int
    start_bit: int
    width: int

    def __post_init__(self):
        if not 3 <= self.word <= WORDS_PER_SUBFRAME:
            raise ValueError(f"field word {self.word} outside 3..10")
        if self.width < 1 or self.start_bit < 1:
            raise ValueError("segment start and width must be positive")
        if self.start_bit + self.width - 1 > DATA_BITS:
            raise ValueError(
                f"segment at word {self.word} bits {self.start_bit}.."
                f"{self.start_bit + self.width - 1} runs into parity bits"
            )

    @property
    def mask(self) -> int:
        return ((1 << self.width) - 1) << (DATA_BITS - self.start_bit - self.width + 1)


@dataclass(frozen=True)
class FieldLayout:
    """Where a parameter lives and how it is quantized.

    The stored integer is ``floor(value / scale)``.  ``signed`` selects two's
    complement; ``wrap`` reduces the integer modulo ``2**width`` instead of
    raising :class:`FieldOverflow` (used for periodic angles and for the
    data-age fields).  Fields wider than one word list several segments,
    filled MSB first.
    """

    name: str
    subframe: int
    segments: tuple[Segment, ...]
    scale: float = 1.0
    signed: bool = False
    wrap: bool = False

    @classmethod
    def single(cls, name, subframe, word, start_bit, width, scale=1.0, signed=False, wrap=False):
        return cls(name, subframe, (Segment(word, start_bit, width),), scale, signed, wrap)

    @property
    def word(self) -> int:
        return self.segments[0].word

    @property
    def start_bit(self) -> int:
        return self.segments[0].start_bit

    @property
    def width(self) -> int:
        return sum(s.width for s in self.segments)


def quantize(value: float, layout: FieldLayout) -> int:
    """Scaled integer for ``value``; signed fields return a negative int, not its bit pattern."""
    if not math.isfinite(value):
        raise FieldOverflow(layout.name, value)
    stored = math.floor(value / layout.scale)
    w = layout.width
    lo, hi = (-(1 << (w - 1)), (1 << (w - 1)) - 1) if layout.signed else (0, (1 << w) - 1)
    if lo <= stored <= hi:
        return stored
    if layout.wrap:
        stored %= 1 << w
        if layout.signed and stored > hi:
            stored -= 1 << w
        return stored
    raise FieldOverflow(layout.name, value, stored)


def encode_field(value: float, layout: FieldLayout) -> dict[int, int]:
    """Return ``{word: data bits}`` contributions of the encoded field."""
    pattern = quantize(value, layout) & ((1 << layout.width) - 1)
    out: dict[int, int] = {}
    remaining = layout.width
    for seg in layout.segments:
        remaining -= seg.width
        chunk = (pattern >> remaining) & ((1 << seg.width) - 1)
        shift = DATA_BITS - seg.start_bit - seg.width + 1
        out[seg.word] = out.get(seg.word, 0) | (chunk << shift)
    return out


def decode_field(words: Mapping[int, int] | Sequence[int], layout: FieldLayout) -> int:
    """Stored integer of a field from data words.

    ``words`` maps word number (1..10) to 24-bit data, or is a sequence of
    all 10 data words in order.
    """
    if not isinstance(words, Mapping):
        words = {k + 1: d for k, d in enumerate(words)}
    pattern = 0
    for seg in layout.segments:
        shift = DATA_BITS - seg.start_bit - seg.width + 1
        pattern = (pattern << seg.width) | ((words[seg.word] >> shift) & ((1 << seg.width) - 1))
    if layout.signed and pattern >> (layout.width - 1):
        pattern -= 1 << layout.width
    return pattern


def decode_value(words, layout: FieldLayout) -> float:
    return decode_field(words, layout) * layout.scale


class LayoutRegistry:
    """Field layouts indexed by subframe, checked for overlaps at construction."""

    def __init__(self, fields: Iterable[FieldLayout]):
        self._by_subframe: dict[int, dict[str, FieldLayout]] = {}
        used: dict[tuple[int, int], int] = {}
        for f in fields:
            if f.subframe not in range(1, 6):
                raise InvalidSubframeId(f"layout {f.name!r}: subframe {f.subframe}")
            names = self._by_subframe.setdefault(f.subframe, {})
            if f.name in names:
                raise ValueError(f"duplicate field {f.name!r} in subframe {f.subframe}")
            for seg in f.segments:
                key = (f.subframe, seg.word)
                if used.get(key, 0) & seg.mask:
                    raise ValueError(
                        f"field {f.name!r} overlaps another field in "
                        f"subframe {f.subframe} word {seg.word}"
                    )
                used[key] = used.get(key, 0) | seg.mask
            names[f.name] = f

    def fields(self, subframe_id: int) -> dict[str, FieldLayout]:
        return dict(self._by_subframe.get(subframe_id, {}))

    def __iter__(self) -> Iterator[FieldLayout]:
        for sf in sorted(self._by_subframe):
            yield from self._by_subframe[sf].values()


def _f(name, sf, word, start, width, scale=1.0, signed=False, wrap=False):
    return FieldLayout.single(name, sf, word, start, width, scale, signed, wrap)


def _split(name, sf, segs, scale=1.0, signed=False, wrap=False):
    return FieldLayout(name, sf, tuple(Segment(*s) for s in segs), scale, signed, wrap)


# Subframe 1 clock fields use the compact 8/16/22-bit layout; a1 ends at bit 24.
# Subframes 2-3 follow the conventional ICD positions, angles in semicircles.
PAPER_LAYOUT = LayoutRegistry([
    _split("iodc", 1, [(3, 23, 2), (8, 1, 8)], wrap=True),
    _f("toc", 1, 8, 9, 16, scale=16),
    _f("a0", 1, 9, 1, 8, scale=2.0**-31, signed=True),
    _f("a1", 1, 9, 9, 16, scale=2.0**-43, signed=True),
    _f("a2", 1, 10, 1, 22, scale=2.0**-55, signed=True),

    _f("iode", 2, 3, 1, 8, wrap=True),
    _f("crs", 2, 3, 9, 16, scale=2.0**-5, signed=True),
    _f("deltan", 2, 4, 1, 16, scale=2.0**-43, signed=True),
    _split("m0", 2, [(4, 17, 8), (5, 1, 24)], scale=2.0**-31, signed=True, wrap=True),
    _f("cuc", 2, 6, 1, 16, scale=2.0**-29, signed=True),
    _split("e", 2, [(6, 17, 8), (7, 1, 24)], scale=2.0**-33),
    _f("cus", 2, 8, 1, 16, scale=2.0**-29, signed=True),
    _split("sqrta", 2, [(8, 17, 8), (9, 1, 24)], scale=2.0**-19),
    _f("toe", 2, 10, 1, 16, scale=16),

    _f("cic", 3, 3, 1, 16, scale=2.0**-29, signed=True),
    _split("omega0", 3, [(3, 17, 8), (4, 1, 24)], scale=2.0**-31, signed=True, wrap=True),
    _f("cis", 3, 5, 1, 16, scale=2.0**-29, signed=True),
    _split("i0", 3, [(5, 17, 8), (6, 1, 24)], scale=2.0**-31, signed=True),
    _f("crc", 3, 7, 1, 16, scale=2.0**-5, signed=True),
    _split("omega", 3, [(7, 17, 8), (8, 1, 24)], scale=2.0**-31, signed=True, wrap=True),
    _f("omegadot", 3, 9, 1, 24, scale=2.0**-43, signed=True),
    _f("iode", 3, 10, 1, 8, wrap=True),
    _f("idot", 3, 10, 9, 14, scale=2.0**-43, signed=True),
])


def clock_payload(poly: ClockPolynomial, iodc: float = 0.0) -> dict[str, float]:
    return {"toc": poly.toc, "a0": poly.a0, "a1": poly.a1, "a2": poly.a2, "iodc": iodc}


def ephemeris_payloads(eph: BroadcastEphemeris, iode: float = 0.0) -> tuple[dict, dict]:
    """Subframe 2 and 3 payloads; radians are converted to semicircles."""
    sc = 1 / math.pi
    sf2 = {
        "iode": iode,
        "crs": eph.crs,
        "deltan": eph.delta_n * sc,
        "m0": eph.m0 * sc,
        "cuc": eph.cuc,
        "e": eph.e,
        "cus": eph.cus,
        "sqrta": math.sqrt(eph.a),
        "toe": eph.toe,
    }
    sf3 = {
        "cic": eph.cic,
        "omega0": eph.omega0 * sc,
        "cis": eph.cis,
        "i0": eph.i0 * sc,
        "crc": eph.crc,
        "omega": eph.omega * sc,
        "omegadot": eph.omega_dot * sc,
        "iode": iode,
        "idot": eph.idot * sc,
    }
    return sf2, sf3


# --- subframes -----------------------------------------------------------------

@dataclass(frozen=True)
class Subframe:
    id: int
    words: tuple[Word30, ...]

    def __post_init__(self):
        if len(self.words) != WORDS_PER_SUBFRAME:
            raise ValueError(f"subframe needs 10 words, got {len(self.words)}")

    @property
    def z(self) -> int:
        return how_fields(self.words[1])[0]

    def data_words(self) -> tuple[int, ...]:
        return tuple(w.data for w in self.words)

    def bitstring(self) -> str:
        return "".join(w.bitstring() for w in self.words)


def assemble_subframe(
    subframe_id: int,
    z: int,
    payload: Mapping[str, float] | None = None,
    *,
    registry: LayoutRegistry = PAPER_LAYOUT,
    raw_words: Sequence[int] | None = None,
    reserved: int = 0,
) -> Subframe:
    """Build one subframe: TLM, HOW, then words 3-10 from the layout registry.

    ``raw_words`` supplies words 3-10 verbatim (the opaque page content of
    subframes 4 and 5) and is only accepted when the registry has no fields
    for this subframe.
    """
    if subframe_id not in range(1, 6):
        raise InvalidSubframeId(f"subframe id {subframe_id} not in 1..5")
    layouts = registry.fields(subframe_id)
    payload = dict(payload or {})
    missing = sorted(set(layouts) - set(payload))
    if missing:
        raise MissingField(f"subframe {subframe_id} payload lacks {', '.join(missing)}")
    extra = sorted(set(payload) - set(layouts))
    if extra:
        raise UnknownField(f"subframe {subframe_id} has no field(s) {', '.join(extra)}")

    data = [0] * WORDS_PER_SUBFRAME
    if raw_words is not None:
        if layouts:
            raise ValueError(f"subframe {subframe_id} has registry fields; raw words not allowed")
        if len(raw_words) != PAGE_WORDS:
            raise ValueError(f"raw page needs {PAGE_WORDS} words, got {len(raw_words)}")
        for k, w in enumerate(raw_words):
            if not 0 <= w <= DATA_MASK:
                raise ValueError(f"raw word {k + 3} exceeds 24 bits")
            data[k + 2] = w
    for name, layout in layouts.items():
        for word, bits in encode_field(payload[name], layout).items():
            data[word - 1] |= bits

    words = [build_tlm(reserved), build_how(z, subframe_id)]
    words.extend(append_parity(d) for d in data[2:])
    return Subframe(subframe_id, tuple(words))


def decode_subframe(bits: str) -> Subframe:
    """Inverse of :meth:`Subframe.bitstring`; parity is not checked here."""
    if len(bits) != SUBFRAME_BITS:
        raise ValueError(f"subframe needs 300 bits, got {len(bits)}")
    words = tuple(Word30.from_int(int(bits[k:k + 30], 2)) for k in range(0, SUBFRAME_BITS, 30))
    return Subframe(how_fields(words[1])[2], words)


# --- frames and superframes -----------------------------------------------------

Frame = tuple[Subframe, ...]
Page = tuple[Sequence[int], Sequence[int]]


@dataclass(frozen=True)
class Superframe:
    frames: tuple[Frame, ...]

    def __post_init__(self):
        if len(self.frames) != PAGES:
            raise ValueError(f"superframe needs 25 frames, got {len(self.frames)}")
        for f in self.frames:
            if len(f) != SUBFRAMES_PER_FRAME:
                raise ValueError("every frame needs 5 subframes")

    def subframes(self) -> Iterator[Subframe]:
        for frame in self.frames:
            yield from frame

    def bitstring(self) -> str:
        return "".join(sf.bitstring() for sf in self.subframes())


def _zero_page() -> Page:
    return ((0,) * PAGE_WORDS, (0,) * PAGE_WORDS)


def assemble_frames(
    start_z: int,
    payloads: Mapping[int, Mapping[str, float]],
    n_frames: int,
    pages45: Sequence[Page] | None = None,
    *,
    registry: LayoutRegistry = PAPER_LAYOUT,
) -> list[Frame]:
    """Consecutive frames starting at ``start_z``; frame ``i`` uses page ``i mod 25``.

    ``payloads`` holds the field values for subframes 1-3.
    """
    if not 0 <= start_z < ZCOUNT_MODULUS:
        raise ValueError(f"start Z-count {start_z} outside 0..100799")
    if n_frames < 1:
        raise ValueError("need at least one frame")
    if pages45 is None:
        pages45 = [_zero_page()] * PAGES
    if len(pages45) != PAGES:
        raise ValueError(f"need 25 pages for subframes 4-5, got {len(pages45)}")

    frames = []
    z = start_z
    for i in range(n_frames):
        page = pages45[i % PAGES]
        subframes = []
        for sid in range(1, SUBFRAMES_PER_FRAME + 1):
            if sid <= 3:
                sf = assemble_subframe(sid, z, payloads.get(sid), registry=registry)
            else:
                sf = assemble_subframe(sid, z, registry=registry, raw_words=page[sid - 4])
            subframes.append(sf)
            z = (z + 1) % ZCOUNT_MODULUS
        frames.append(tuple(subframes))
    return frames


def assemble_superframe(
    start_z: int,
    payloads: Mapping[int, Mapping[str, float]],
    pages45: Sequence[Page] | None = None,
    *,
    registry: LayoutRegistry = PAPER_LAYOUT,
) -> Superframe:
    return Superframe(tuple(assemble_frames(start_z, payloads, PAGES, pages45, registry=registry)))


# --- serialization ---------------------------------------------------------------

Stream = Union[Superframe, Iterable[Subframe]]


def stream_bits(stream: Stream) -> str:
    subframes = stream.subframes() if isinstance(stream, Superframe) else stream
    return "".join(sf.bitstring() for sf in subframes)


def serialize_bits(stream: Stream, fmt: str = "text") -> Union[str, bytes]:
    """``text``: '0'/'1' with a newline after every subframe; ``packed``: MSB-first bytes."""
    bits = stream_bits(stream)
    if fmt == "text":
        return "".join(bits[k:k + SUBFRAME_BITS] + "\n" for k in range(0, len(bits), SUBFRAME_BITS))
    if fmt == "packed":
        pad = -len(bits) % 8
        padded = bits + "0" * pad
        return int(padded, 2).to_bytes(len(padded) // 8, "big") if padded else b""
    raise ValueError(f"unknown bit format {fmt!r}")


def parse_text_bits(text: str) -> str:
    bits = "".join(text.split())
    if set(bits) - {"0", "1"}:
        raise ValueError("bit text may only contain '0', '1' and whitespace")
    return bits


def unpack_bits(data: bytes, n_bits: int) -> str:
    if n_bits > len(data) * 8:
        raise ValueError("byte stream shorter than requested bit count")
    return "".join(format(b, "08b") for b in data)[:n_bits]
