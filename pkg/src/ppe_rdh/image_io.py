"""Binary PGM (P5) codec and fidelity metrics for 8-bit grayscale images."""

from __future__ import annotations

import math

import numpy as np

from .errors import DimensionMismatch, PgmError

_WHITESPACE = b" \t\n\r\x0b\x0c"


class GrayImage:
    """8-bit grayscale raster stored as a height x width uint8 array.

    Equality is bit-exact on dimensions and pixels. The pixel array is
    copied on construction, so instances never alias caller buffers.
    """

    __slots__ = ("pixels",)

    def __init__(self, pixels):
        arr = np.asarray(pixels)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError("pixels must be a nonempty 2-D array")
        if arr.dtype != np.uint8:
            if not np.issubdtype(arr.dtype, np.integer):
                raise ValueError("pixel values must be integers")
            if arr.size and (arr.min() < 0 or arr.max() > 255):
                raise ValueError("pixel values must lie in [0, 255]")
            arr = arr.astype(np.uint8)
        self.pixels = arr.copy()

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def copy(self) -> "GrayImage":
        return GrayImage(self.pixels)

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and np.array_equal(
            self.pixels, other.pixels
        )

    __hash__ = None

    def __repr__(self):
        return f"GrayImage({self.width}x{self.height})"


def _skip_separators(data: bytes, pos: int) -> int:
    # whitespace and '#' comments (to end of line) may separate header tokens
    n = len(data)
    while pos < n:
        c = data[pos]
        if c in _WHITESPACE:
            pos += 1
        elif c == ord("#"):
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
        else:
            break
    return pos


def _next_token(data: bytes, pos: int) -> tuple[bytes, int]:
    pos = _skip_separators(data, pos)
    start = pos
    n = len(data)
    while pos < n and data[pos] not in _WHITESPACE and data[pos] != ord("#"):
        pos += 1
    if start == pos:
        raise PgmError("truncated PGM header", code="pgm-header")
    return data[start:pos], pos


def load_pgm(data: bytes) -> GrayImage:
    """Parse a binary PGM (P5, maxval 255) byte string into a GrayImage."""
    magic, pos = _next_token(data, 0)
    if magic != b"P5":
        raise PgmError(f"not a binary PGM (P5) stream, magic {magic!r}", code="pgm-magic")
    fields = []
    for name in ("width", "height", "maxval"):
        token, pos = _next_token(data, pos)
        try:
            value = int(token)
        except ValueError:
            raise PgmError(f"invalid {name} field {token!r}", code="pgm-header") from None
        fields.append(value)
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise PgmError(f"invalid dimensions {width}x{height}", code="pgm-header")
    if maxval != 255:
        raise PgmError(f"unsupported maxval {maxval} (only 255)", code="pgm-maxval")
    if pos >= len(data) or data[pos] not in _WHITESPACE:
        raise PgmError("missing separator before raster", code="pgm-header")
    pos += 1  # exactly one whitespace byte before the raster
    raster = data[pos : pos + width * height]
    if len(raster) < width * height:
        raise PgmError(
            f"truncated raster: expected {width * height} bytes, got {len(raster)}",
            code="pgm-truncated",
        )
    pixels = np.frombuffer(raster, dtype=np.uint8).reshape(height, width)
    return GrayImage(pixels)


def save_pgm(img: GrayImage) -> bytes:
    """Serialize to the canonical header "P5\\n<w> <h>\\n255\\n" plus raster."""
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + img.pixels.tobytes()


def psnr(a: GrayImage, b: GrayImage) -> float:
    """Peak signal-to-noise ratio in dB; inf when the images are identical."""
    if a.pixels.shape != b.pixels.shape:
        raise DimensionMismatch(
            f"image dimensions differ: {a.width}x{a.height} vs {b.width}x{b.height}"
        )
    diff = a.pixels.astype(np.int64) - b.pixels.astype(np.int64)
    sq_sum = int(np.sum(diff * diff))
    if sq_sum == 0:
        return math.inf
    mse = sq_sum / diff.size
    return 10.0 * math.log10(255.0 * 255.0 / mse)
