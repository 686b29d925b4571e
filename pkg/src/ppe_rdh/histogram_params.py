"""PPE histogram bookkeeping and shift-parameter selection.

Embedding needs two peak-zero bin pairs (lp, lz) and (rp, rz) with
lz < lp < rp < rz and empty zero bins. The zero bins are the empty bins of
smallest magnitude (left side searched from -1 downward, right side from 2
upward). The peaks minimize an estimate of the modified-pixel count:
half the payload plus the mass of every bin that would be shifted, i.e.
bins in [lz, x_l) and (x_r, rz]. Selection runs over growing prefixes of
the complexity-ordered PPE sequence so that well-predicted sites are
preferred; the prefix grows by a fixed step until some pair can carry the
payload.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import HistogramSaturated, InsufficientCapacity, SelectionFailure

PPE_MIN = -510
PPE_MAX = 510
_NBINS = PPE_MAX - PPE_MIN + 1


@dataclass
class PpeHistogram:
    """Occurrence counts per PPE value, indexed over [-510, 510]."""

    counts: np.ndarray

    @classmethod
    def empty(cls) -> "PpeHistogram":
        return cls(np.zeros(_NBINS, dtype=np.int64))

    def bin(self, value: int) -> int:
        if not PPE_MIN <= value <= PPE_MAX:
            raise ValueError(f"PPE value {value} out of range")
        return int(self.counts[value - PPE_MIN])

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def build_histogram(ppes) -> PpeHistogram:
    values = np.asarray(ppes, dtype=np.int64).reshape(-1)
    if values.size and (values.min() < PPE_MIN or values.max() > PPE_MAX):
        raise ValueError("PPE value out of range")
    counts = np.bincount(values - PPE_MIN, minlength=_NBINS)
    return PpeHistogram(counts.astype(np.int64))


@dataclass(frozen=True)
class ShiftParams:
    """The two peak-zero bin pairs driving one embedding pass.

    lp/lz are the left (negative-side) peak and zero bins, rp/rz the right
    ones; lz < lp < rp < rz always.
    """

    lp: int
    lz: int
    rp: int
    rz: int

    def __post_init__(self):
        if not self.lz < self.lp < self.rp < self.rz:
            raise ValueError(f"shift parameters out of order: {self}")


@dataclass(frozen=True)
class SelectionConfig:
    """Payload size (bits) and prefix growth step for parameter selection."""

    payload_bits: int
    step: int

    def __post_init__(self):
        if self.payload_bits < 1:
            raise ValueError("payload must be at least one bit")
        if self.step < 1:
            raise ValueError("step must be positive")


def find_zero_bins(hist: PpeHistogram) -> tuple[int, int]:
    """Nearest empty bins: left side below 0, right side above 1."""
    counts = hist.counts
    lz = rz = None
    for x in range(-1, PPE_MIN - 1, -1):
        if counts[x - PPE_MIN] == 0:
            lz = x
            break
    for x in range(2, PPE_MAX + 1):
        if counts[x - PPE_MIN] == 0:
            rz = x
            break
    if lz is None or rz is None:
        side = "left" if lz is None else "right"
        raise HistogramSaturated(f"histogram saturated: no empty {side}-side bin")
    return lz, rz


def shifted_mass(hist: PpeHistogram, lz: int, rz: int, x_l: int, x_r: int) -> int:
    """Total count of bins that a (x_l, x_r) peak choice would shift."""
    counts = hist.counts
    left = int(counts[lz - PPE_MIN : x_l - PPE_MIN].sum())
    right = int(counts[x_r + 1 - PPE_MIN : rz + 1 - PPE_MIN].sum())
    return left + right


def pair_cost(hist: PpeHistogram, lz: int, rz: int, x_l: int, x_r: int, payload_bits: int) -> float:
    """Selection objective: payload/2 expected flips plus the shifted mass."""
    return payload_bits / 2.0 + shifted_mass(hist, lz, rz, x_l, x_r)


def select_peaks(hist: PpeHistogram, lz: int, rz: int, payload_bits: int) -> tuple[int, int]:
    """Best peak pair strictly inside (lz, rz) able to carry the payload.

    Minimizes the shifted mass (the payload/2 term is constant across
    pairs); ties prefer the largest x_l, then the smallest x_r. Plain pair
    enumeration, quadratic in rz - lz.
    """
    counts = hist.counts
    # prefix[i] = total count of bins lz .. lz+i-1
    width = rz - lz + 1
    prefix = np.zeros(width + 1, dtype=np.int64)
    prefix[1:] = np.cumsum(counts[lz - PPE_MIN : rz + 1 - PPE_MIN])
    total_inside = int(prefix[width])
    best = None  # (mass, -x_l, x_r)
    best_pair = None
    for x_l in range(lz + 1, rz - 1):
        h_l = int(counts[x_l - PPE_MIN])
        left = int(prefix[x_l - lz])
        for x_r in range(x_l + 1, rz):
            if h_l + int(counts[x_r - PPE_MIN]) < payload_bits:
                continue
            mass = left + total_inside - int(prefix[x_r + 1 - lz])
            ranked = (mass, -x_l, x_r)
            if best is None or ranked < best:
                best = ranked
                best_pair = (x_l, x_r)
    if best_pair is None:
        raise InsufficientCapacity(
            f"no peak pair inside ({lz}, {rz}) can carry {payload_bits} bits"
        )
    return best_pair


def select_peaks_oracle(hist: PpeHistogram, lz: int, rz: int, payload_bits: int) -> tuple[int, int]:
    """Reference enumeration of every feasible pair, for cross-checking."""
    candidates = []
    for x_l in range(lz + 1, rz):
        for x_r in range(lz + 1, rz):
            if not x_l < x_r:
                continue
            if hist.bin(x_l) + hist.bin(x_r) < payload_bits:
                continue
            mass = 0
            for k in range(lz, rz + 1):
                if lz <= k < x_l or x_r < k <= rz:
                    mass += hist.bin(k)
            candidates.append((mass, -x_l, x_r, (x_l, x_r)))
    if not candidates:
        raise InsufficientCapacity(
            f"no peak pair inside ({lz}, {rz}) can carry {payload_bits} bits"
        )
    return min(candidates)[3]


def select_parameters(ppes, cfg: SelectionConfig) -> tuple[ShiftParams, int]:
    """Grow a prefix of the ordered PPE sequence until parameters exist.

    Tallies the sequence step by step; at every multiple of the step (and at
    the end) checks whether any two bins could carry the payload and, if so,
    attempts the zero-bin and peak-pair computations. Returns the parameters
    and the prefix length that produced them.
    """
    values = np.asarray(ppes, dtype=np.int64).reshape(-1)
    total = values.size
    counts = np.zeros(_NBINS, dtype=np.int64)
    hist = PpeHistogram(counts)
    checkpoints = list(range(cfg.step, total + 1, cfg.step))
    if not checkpoints or checkpoints[-1] != total:
        checkpoints.append(total)
    prev = 0
    for k in checkpoints:
        counts += np.bincount(values[prev:k] - PPE_MIN, minlength=_NBINS)
        prev = k
        top_two = int(np.partition(counts, _NBINS - 2)[-2:].sum())
        if top_two < cfg.payload_bits:
            continue
        try:
            lz, rz = find_zero_bins(hist)
            lp, rp = select_peaks(hist, lz, rz, cfg.payload_bits)
        except (HistogramSaturated, InsufficientCapacity):
            continue
        return ShiftParams(lp=lp, lz=lz, rp=rp, rz=rz), k
    raise SelectionFailure(
        f"no usable histogram for {cfg.payload_bits} bits within {total} PPEs"
    )
