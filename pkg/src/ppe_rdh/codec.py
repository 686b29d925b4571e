"""Blind-reversible embedding and extraction.

Wire format (normative, bit-exact; a marked image is portable across
implementations of this layout):

Header, stored in the LSBs of the first 14 + 72 * pass_count margin pixels
in raster order (margin pixels are never embedded; on images wider than the
header this is simply the start of row 0):

    magic        8 bits   0xA7
    version      4 bits   1
    pass_count   2 bits   1 or 2
    per pass:
        lp, lz, rp, rz   signed 12-bit two's complement, in that order
        pass bit count   24-bit unsigned

All fields are MSB first. While the passes run, on both sides, the header
pixels' LSBs are held at zero so border-site predictions agree between
embedder and extractor; the original LSBs travel inside the pass-1 stream
and are restored on extraction.

Pass-1 stream:
    carried header-pixel LSBs   (14 + 72 * pass_count bits)
    map bit length              (20-bit unsigned)
    location map entries        per entry: ceil(log2(w*h))-bit linear
                                index, then 1 flag bit (0 = original pixel
                                was 0, 1 = it was 255)
    first ceil(n/2) of the n secret bits (all of them when pass_count = 1)

Pass-2 stream: the remaining secret bits.

Pass 1 embeds into the CROSS parity, pass 2 into DOT. Extraction undoes the
passes in reverse order, then restores the carried LSBs and the swept
boundary pixels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import bitstream as bs
from .complexity_sort import PpePlane, build_ppe_plane
from .errors import (
    BoundaryMapError,
    CapacityError,
    CorruptStegoError,
    HistogramSaturated,
    InsufficientCapacity,
    NotStegoError,
    SelectionFailure,
)
from .histogram_params import SelectionConfig, ShiftParams, select_parameters
from .image_io import GrayImage, psnr
from .lattice import MARGIN, Parity, margin_indices

MAGIC = 0xA7
VERSION = 1
HEADER_PREFIX_BITS = 14
PASS_FIELD_BITS = 72
MAP_LEN_BITS = 20
MAP_MAX_BITS = (1 << MAP_LEN_BITS) - 1

# Params carried for a pass that embeds zero bits; any valid ordering works
# because a zero-bit pass touches no pixel on either side.
EMPTY_PASS_PARAMS = ShiftParams(lp=0, lz=-1, rp=1, rz=2)

_PASS_TARGETS = (Parity.CROSS, Parity.DOT)


@dataclass
class LocationMap:
    """Positions of boundary pixels nudged into [1, 254] before embedding."""

    entries: list[tuple[int, int]]  # (linear site index, flag); raster order

    def to_bits(self, index_bits: int) -> np.ndarray:
        out = np.zeros(len(self.entries) * (index_bits + 1), dtype=np.uint8)
        pos = 0
        for index, flag in self.entries:
            out[pos : pos + index_bits] = bs.uint_to_bits(index, index_bits)
            out[pos + index_bits] = flag
            pos += index_bits + 1
        return out


@dataclass(frozen=True)
class StegoHeader:
    """Decoded embedded metadata: per-pass shift parameters and bit counts."""

    pass_params: tuple[ShiftParams, ...]
    pass_bits: tuple[int, ...]

    @property
    def pass_count(self) -> int:
        return len(self.pass_params)

    @property
    def bit_length(self) -> int:
        return HEADER_PREFIX_BITS + PASS_FIELD_BITS * self.pass_count


@dataclass
class EmbedResult:
    marked: GrayImage
    pass_params: list[ShiftParams]
    pass_bits: list[int]
    pass_shifted: list[int]
    psnr_db: float = field(default=math.nan)


def map_index_bits(height: int, width: int) -> int:
    return max(1, (height * width - 1).bit_length())


def boundary_sweep(img: GrayImage) -> tuple[GrayImage, LocationMap]:
    """Nudge interior 0/255 pixels to 1/254 and record them.

    Both parities are swept because either may host a pass. The map must fit
    its 20-bit wire length field, otherwise the image is rejected.
    """
    pixels = img.pixels.copy()
    h, w = pixels.shape
    interior = np.zeros((h, w), dtype=bool)
    if h > 2 * MARGIN and w > 2 * MARGIN:
        interior[MARGIN : h - MARGIN, MARGIN : w - MARGIN] = True
    low = interior & (pixels == 0)
    high = interior & (pixels == 255)
    entries = []
    for idx in np.flatnonzero((low | high).reshape(-1)):
        entries.append((int(idx), 1 if high.reshape(-1)[idx] else 0))
    bit_len = len(entries) * (map_index_bits(h, w) + 1)
    if bit_len > MAP_MAX_BITS:
        raise BoundaryMapError(
            f"pathological boundary density: location map needs {bit_len} bits"
        )
    pixels[low] = 1
    pixels[high] = 254
    return GrayImage(pixels), LocationMap(entries)


def encode_header(header: StegoHeader) -> np.ndarray:
    if header.pass_count not in (1, 2):
        raise ValueError("pass count must be 1 or 2")
    parts = [
        bs.uint_to_bits(MAGIC, 8),
        bs.uint_to_bits(VERSION, 4),
        bs.uint_to_bits(header.pass_count, 2),
    ]
    for params, count in zip(header.pass_params, header.pass_bits):
        for value in (params.lp, params.lz, params.rp, params.rz):
            parts.append(bs.int_to_twos_bits(value, 12))
        parts.append(bs.uint_to_bits(count, 24))
    return np.concatenate(parts)


def decode_header(bits: np.ndarray) -> StegoHeader:
    bits = bs.as_bits(bits)
    if bits.size < HEADER_PREFIX_BITS:
        raise NotStegoError("not a PPE-RDH image: header shorter than its prefix")
    if bs.bits_to_uint(bits[0:8]) != MAGIC or bs.bits_to_uint(bits[8:12]) != VERSION:
        raise NotStegoError("not a PPE-RDH image")
    pass_count = bs.bits_to_uint(bits[12:14])
    if pass_count not in (1, 2):
        raise NotStegoError("not a PPE-RDH image: bad pass count")
    needed = HEADER_PREFIX_BITS + PASS_FIELD_BITS * pass_count
    if bits.size < needed:
        raise CorruptStegoError("truncated header")
    pass_params = []
    pass_bits = []
    pos = HEADER_PREFIX_BITS
    for _ in range(pass_count):
        fields = []
        for _ in range(4):
            fields.append(bs.bits_to_twos_int(bits[pos : pos + 12]))
            pos += 12
        count = bs.bits_to_uint(bits[pos : pos + 24])
        pos += 24
        lp, lz, rp, rz = fields
        try:
            pass_params.append(ShiftParams(lp=lp, lz=lz, rp=rp, rz=rz))
        except ValueError as exc:
            raise CorruptStegoError(f"invalid shift parameters in header: {exc}") from None
        pass_bits.append(count)
    return StegoHeader(tuple(pass_params), tuple(pass_bits))


def mark_ppe(ppe: int, params: ShiftParams, bit: int | None) -> int:
    """Shift one PPE for embedding; ``bit`` applies only to peak values."""
    sign = -1 if 2 * ppe < params.lp + params.rp else 1
    if ppe == params.lp or ppe == params.rp:
        if bit is None:
            raise ValueError("peak-bin PPE requires a payload bit")
        return ppe + sign * bit
    if params.lz <= ppe < params.lp or params.rp < ppe <= params.rz:
        return ppe + sign
    return ppe


def recover_ppe(marked: int, params: ShiftParams) -> tuple[int, int | None]:
    """Recover an original PPE and the carried bit, if any."""
    bit = None
    if marked == params.lp or marked == params.rp:
        bit = 0
    elif marked == params.lp - 1 or marked == params.rp + 1:
        bit = 1
    if params.lz <= marked < params.lp or params.rp < marked <= params.rz:
        return marked - (-1 if 2 * marked < params.lp + params.rp else 1), bit
    return marked, bit


def _embed_into_plane(
    flat: np.ndarray, plane: PpePlane, params: ShiftParams, bits: np.ndarray
) -> tuple[int, int]:
    """Apply the shift map along the plane order until bits run out.

    Returns (positions visited, pure-shift modifications). Mutates ``flat``.
    """
    ppe = plane.ppe
    is_data = (ppe == params.lp) | (ppe == params.rp)
    cum = np.cumsum(is_data)
    if plane.total == 0 or cum[-1] < bits.size:
        raise CapacityError("capacity exceeded while embedding a pass")
    last = int(np.searchsorted(cum, bits.size))
    n = last + 1
    ppe = ppe[:n]
    sign = np.where(2 * ppe < params.lp + params.rp, -1, 1).astype(np.int64)
    delta = np.zeros(n, dtype=np.int64)
    data_mask = is_data[:n]
    delta[data_mask] = sign[data_mask] * bits.astype(np.int64)
    shift_mask = ((ppe >= params.lz) & (ppe < params.lp)) | (
        (ppe > params.rp) & (ppe <= params.rz)
    )
    delta[shift_mask] = sign[shift_mask]
    flat[plane.sites[:n]] += delta
    return n, int(shift_mask.sum())


def _extract_from_plane(
    flat: np.ndarray, plane: PpePlane, params: ShiftParams, bit_count: int
) -> tuple[np.ndarray, int]:
    """Invert the shift map along the plane order until all bits are read.

    Returns (bits, positions visited). Mutates ``flat``.
    """
    if bit_count == 0:
        return np.zeros(0, dtype=np.uint8), 0
    marked = plane.ppe
    is_zero = (marked == params.lp) | (marked == params.rp)
    is_one = (marked == params.lp - 1) | (marked == params.rp + 1)
    cum = np.cumsum(is_zero | is_one)
    if plane.total == 0 or cum[-1] < bit_count:
        raise CorruptStegoError("corrupt or truncated stego image: payload ends early")
    last = int(np.searchsorted(cum, bit_count))
    n = last + 1
    marked = marked[:n]
    bits = is_one[:n][(is_zero | is_one)[:n]].astype(np.uint8)
    delta = np.zeros(n, dtype=np.int64)
    left = (marked >= params.lz) & (marked < params.lp)
    right = (marked > params.rp) & (marked <= params.rz)
    delta[left] = 1
    delta[right] = -1
    flat[plane.sites[:n]] += delta
    return bits, n


def embed_pass(
    img: GrayImage, target: Parity, params: ShiftParams, bits
) -> tuple[GrayImage, int]:
    """Run one embedding pass; returns the new image and positions visited."""
    bits = bs.as_bits(bits)
    if bits.size == 0:
        raise ValueError("embed_pass requires a nonempty bit stream")
    work = img.pixels.astype(np.int64)
    plane = build_ppe_plane(work, target)
    visited, _ = _embed_into_plane(work.reshape(-1), plane, params, bits)
    return GrayImage(work), visited


def extract_pass(
    img: GrayImage, target: Parity, params: ShiftParams, bit_count: int
) -> tuple[GrayImage, np.ndarray, int]:
    """Undo one pass; returns recovered image, bits, positions visited."""
    work = img.pixels.astype(np.int64)
    plane = build_ppe_plane(work, target)
    bits, visited = _extract_from_plane(work.reshape(-1), plane, params, bit_count)
    return GrayImage(work), bits, visited


def _scramble(bits: np.ndarray, key: int) -> np.ndarray:
    pad = bs.XorShift64Star(key).bits(bits.size)
    return bits ^ pad


def embed(
    cover: GrayImage,
    secret,
    passes: int = 2,
    step: int | None = None,
    key: int | None = None,
) -> EmbedResult:
    """Embed a secret bit stream, returning the marked image and stats.

    ``step`` overrides the selection prefix growth (default: the pass's own
    stream length). ``key`` XOR-scrambles the secret with a seeded pad.
    """
    if passes not in (1, 2):
        raise ValueError("passes must be 1 or 2")
    secret = bs.as_bits(secret)
    if key is not None:
        secret = _scramble(secret, key)
    if cover.height < 8 or cover.width < 8:
        raise CapacityError("image capacity too small for payload: need at least 8x8")

    adjusted, locmap = boundary_sweep(cover)
    h, w = adjusted.height, adjusted.width
    work = adjusted.pixels.astype(np.int64)
    flat = work.reshape(-1)

    header_len = HEADER_PREFIX_BITS + PASS_FIELD_BITS * passes
    margins = margin_indices(h, w)
    if margins.size < header_len:
        raise CapacityError("image capacity too small for payload: header does not fit")
    header_sites = margins[:header_len]
    carried = (flat[header_sites] & 1).astype(np.uint8)
    flat[header_sites] &= ~np.int64(1)  # held at zero until the passes finish

    map_bits = locmap.to_bits(map_index_bits(h, w))
    share1 = (secret.size + 1) // 2 if passes == 2 else secret.size
    streams = [
        np.concatenate(
            [carried, bs.uint_to_bits(map_bits.size, MAP_LEN_BITS), map_bits, secret[:share1]]
        ),
        secret[share1:],
    ][:passes]

    params_list: list[ShiftParams] = []
    bits_list: list[int] = []
    shifted_list: list[int] = []
    for target, stream in zip(_PASS_TARGETS, streams):
        if stream.size == 0:
            params_list.append(EMPTY_PASS_PARAMS)
            bits_list.append(0)
            shifted_list.append(0)
            continue
        plane = build_ppe_plane(work, target)
        if plane.total == 0:
            raise CapacityError("image capacity too small for payload: empty interior")
        pass_step = min(step if step is not None else stream.size, plane.total)
        cfg = SelectionConfig(payload_bits=int(stream.size), step=max(1, pass_step))
        try:
            params, _prefix = select_parameters(plane.ppe, cfg)
        except (SelectionFailure, HistogramSaturated, InsufficientCapacity) as exc:
            raise CapacityError(f"image capacity too small for payload: {exc}") from exc
        _, shifted = _embed_into_plane(flat, plane, params, stream)
        params_list.append(params)
        bits_list.append(int(stream.size))
        shifted_list.append(shifted)

    header = StegoHeader(tuple(params_list), tuple(bits_list))
    flat[header_sites] = (flat[header_sites] & ~np.int64(1)) | encode_header(header)
    marked = GrayImage(work)
    return EmbedResult(
        marked=marked,
        pass_params=params_list,
        pass_bits=bits_list,
        pass_shifted=shifted_list,
        psnr_db=psnr(cover, marked),
    )


def _restore_boundaries(flat: np.ndarray, map_bits: np.ndarray, index_bits: int) -> None:
    entry_bits = index_bits + 1
    if map_bits.size % entry_bits:
        raise CorruptStegoError("malformed location map length")
    if map_bits.size == 0:
        return
    entries = map_bits.reshape(-1, entry_bits)
    indices = bs.uints_from_bit_matrix(entries[:, :index_bits].reshape(-1), index_bits)
    flags = entries[:, index_bits].astype(np.int64)
    if indices.size and (indices.max() >= flat.size or np.any(np.diff(indices) <= 0)):
        raise CorruptStegoError("location map index out of range")
    expected = np.where(flags == 1, 254, 1)
    if not np.array_equal(flat[indices], expected):
        raise CorruptStegoError("location map does not match recovered pixels")
    flat[indices] = np.where(flags == 1, 255, 0)


def extract(marked: GrayImage, key: int | None = None) -> tuple[np.ndarray, GrayImage]:
    """Recover the secret bits and the bit-exact original image."""
    h, w = marked.height, marked.width
    margins = margin_indices(h, w)
    if margins.size < HEADER_PREFIX_BITS:
        raise NotStegoError("not a PPE-RDH image: too small to hold a header")
    flat_in = marked.pixels.reshape(-1)
    prefix = (flat_in[margins[:HEADER_PREFIX_BITS]] & 1).astype(np.uint8)
    pass_count = bs.bits_to_uint(prefix[12:14])
    header_len = HEADER_PREFIX_BITS + PASS_FIELD_BITS * (pass_count if pass_count in (1, 2) else 1)
    if bs.bits_to_uint(prefix[0:8]) != MAGIC or margins.size < header_len:
        raise NotStegoError("not a PPE-RDH image")
    header_sites = margins[:header_len]
    header = decode_header((flat_in[header_sites] & 1).astype(np.uint8))

    work = marked.pixels.astype(np.int64)
    flat = work.reshape(-1)
    flat[header_sites] &= ~np.int64(1)  # same zero-LSB state the passes saw

    pass_streams: list[np.ndarray] = [np.zeros(0, dtype=np.uint8)] * header.pass_count
    for pass_idx in range(header.pass_count - 1, -1, -1):
        plane = build_ppe_plane(work, _PASS_TARGETS[pass_idx])
        bits, _ = _extract_from_plane(
            flat, plane, header.pass_params[pass_idx], header.pass_bits[pass_idx]
        )
        pass_streams[pass_idx] = bits

    stream1 = pass_streams[0]
    fixed = header.bit_length + MAP_LEN_BITS
    if stream1.size < fixed:
        raise CorruptStegoError("pass-1 stream shorter than its fixed fields")
    carried = stream1[: header.bit_length]
    map_len = bs.bits_to_uint(stream1[header.bit_length : fixed])
    if fixed + map_len > stream1.size:
        raise CorruptStegoError("truncated location map stream")
    flat[header_sites] = (flat[header_sites] & ~np.int64(1)) | carried
    _restore_boundaries(flat, stream1[fixed : fixed + map_len], map_index_bits(h, w))

    if work.min() < 0 or work.max() > 255:
        raise CorruptStegoError("recovered pixel out of range")
    secret = np.concatenate([stream1[fixed + map_len :]] + pass_streams[1:])
    if key is not None:
        secret = _scramble(secret, key)
    return secret, GrayImage(work)
