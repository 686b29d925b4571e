"""Bit-level plumbing: bit arrays, fixed-width fields, seeded bit streams.

Bits travel as numpy uint8 arrays of 0/1 values, most significant bit first
within every multi-bit field.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def as_bits(values) -> np.ndarray:
    """Normalize a bit sequence to a uint8 array of 0/1."""
    arr = np.asarray(values, dtype=np.uint8).reshape(-1)
    if arr.size and arr.max() > 1:
        raise ValueError("bit values must be 0 or 1")
    return arr


def bits_from_bytes(data: bytes) -> np.ndarray:
    return np.unpackbits(np.frombuffer(data, dtype=np.uint8))


def bytes_from_bits(bits) -> bytes:
    """Pack bits into bytes, zero-padding the final partial byte."""
    bits = as_bits(bits)
    if bits.size == 0:
        return b""
    return np.packbits(bits).tobytes()


def uint_to_bits(value: int, width: int) -> np.ndarray:
    if not 0 <= value < (1 << width):
        raise ValueError(f"{value} does not fit in {width} unsigned bits")
    return np.array([(value >> (width - 1 - k)) & 1 for k in range(width)], dtype=np.uint8)


def bits_to_uint(bits) -> int:
    value = 0
    for b in np.asarray(bits).reshape(-1):
        value = (value << 1) | int(b)
    return value


def int_to_twos_bits(value: int, width: int) -> np.ndarray:
    lo, hi = -(1 << (width - 1)), (1 << (width - 1)) - 1
    if not lo <= value <= hi:
        raise ValueError(f"{value} does not fit in {width} signed bits")
    return uint_to_bits(value & ((1 << width) - 1), width)


def bits_to_twos_int(bits) -> int:
    width = len(bits)
    value = bits_to_uint(bits)
    if value >= 1 << (width - 1):
        value -= 1 << width
    return value


def uints_from_bit_matrix(bits: np.ndarray, width: int) -> np.ndarray:
    """Decode a flat bit array as consecutive width-bit unsigned fields."""
    if bits.size % width:
        raise ValueError("bit count is not a multiple of the field width")
    powers = (1 << np.arange(width - 1, -1, -1)).astype(np.int64)
    return bits.reshape(-1, width).astype(np.int64) @ powers


class XorShift64Star:
    """Seeded xorshift64* generator used for reproducible bit strings."""

    def __init__(self, seed: int):
        self._state = (seed & _MASK64) or 0x9E3779B97F4A7C15

    def next_word(self) -> int:
        x = self._state
        x ^= x >> 12
        x = (x ^ (x << 25)) & _MASK64
        x ^= x >> 27
        self._state = x
        return (x * 0x2545F4914F6CDD1D) & _MASK64

    def bits(self, count: int) -> np.ndarray:
        """The next ``count`` bits, 64 per word, most significant first."""
        words = [self.next_word() for _ in range((count + 63) // 64)]
        raw = np.array(words, dtype=">u8").view(np.uint8)
        return np.unpackbits(raw)[:count]
