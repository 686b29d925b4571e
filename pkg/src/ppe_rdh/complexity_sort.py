"""Local-complexity keys and the shared embedding order.

Candidate sites are sorted by the spread of their four context neighbors:
the population standard deviation of the six pairwise absolute differences.
Sites whose neighborhood is flat predict well and are embedded first.

The comparator never touches floating point: sites compare by the exact
integer 6*sum(d^2) - sum(d)^2 over the six differences (36 times the
squared standard deviation), with raster order breaking ties. The key reads
only context-parity pixels, so the order survives any modification of the
target parity; that is what lets the receiver rebuild it blindly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .lattice import MARGIN, Parity, Site, interior_parity_mask
from .predictor import PeRecord, ppe_planes


def complexity_key(img, site) -> int:
    """Integer sort key: 36 times the squared local complexity."""
    row, col = site
    if not (MARGIN <= row < img.height - MARGIN and MARGIN <= col < img.width - MARGIN):
        raise ValueError(f"site {site} outside the embeddable interior")
    u = img.pixels
    neighbors = (
        int(u[row - 1, col]),
        int(u[row, col + 1]),
        int(u[row + 1, col]),
        int(u[row, col - 1]),
    )
    diffs = [abs(x - y) for x, y in combinations(neighbors, 2)]
    return 6 * sum(d * d for d in diffs) - sum(diffs) ** 2


def local_complexity(img, site) -> float:
    """Population standard deviation of the six neighbor differences."""
    return math.sqrt(complexity_key(img, site) / 36.0)


def complexity_key_plane(u: np.ndarray) -> np.ndarray:
    """Integer keys for every interior site, as a (h-4) x (w-4) grid."""
    h, w = u.shape
    up = u[1 : h - 3, 2 : w - 2]
    right = u[2 : h - 2, 3 : w - 1]
    down = u[3 : h - 1, 2 : w - 2]
    left = u[2 : h - 2, 1 : w - 3]
    total = np.zeros_like(up)
    total_sq = np.zeros_like(up)
    for x, y in combinations((up, right, down, left), 2):
        d = np.abs(x - y)
        total = total + d
        total_sq = total_sq + d * d
    return 6 * total_sq - total * total


@dataclass
class PpePlane:
    """One parity's embeddable sites in embedding order, with per-site data.

    ``sites`` holds linear raster indices into the image; all arrays are
    aligned to the sorted order. On a marked image the ``ppe`` column holds
    the marked values (same pipeline, pixel value minus context-only
    predictions), which is exactly what extraction needs.
    """

    parity: Parity
    height: int
    width: int
    sites: np.ndarray
    ppe: np.ndarray
    pe: np.ndarray
    pe_pred: np.ndarray
    pred: np.ndarray
    key: np.ndarray

    @property
    def total(self) -> int:
        return int(self.sites.size)


def build_ppe_plane(pixels: np.ndarray, parity: Parity) -> PpePlane:
    """Compute the ordered PPE sequence of one parity from a 2-D int array."""
    u = np.asarray(pixels, dtype=np.int64)
    h, w = u.shape
    if h < 2 * MARGIN + 1 or w < 2 * MARGIN + 1:
        empty = np.zeros(0, dtype=np.int64)
        return PpePlane(parity, h, w, empty, empty, empty, empty, empty, empty)
    pred, pe, pe_pred, ppe = ppe_planes(u)
    key = complexity_key_plane(u)
    mask = interior_parity_mask(h, w, parity).reshape(-1)
    sel = np.flatnonzero(mask)  # raster order within the interior grid
    keys = key.reshape(-1)[sel]
    order = np.argsort(keys, kind="stable")  # stable sort keeps raster ties
    sel = sel[order]
    grid_w = w - 2 * MARGIN
    rows = sel // grid_w + MARGIN
    cols = sel % grid_w + MARGIN
    return PpePlane(
        parity,
        h,
        w,
        sites=rows * w + cols,
        ppe=ppe.reshape(-1)[sel],
        pe=pe.reshape(-1)[sel],
        pe_pred=pe_pred.reshape(-1)[sel],
        pred=pred.reshape(-1)[sel],
        key=keys[order],
    )


def ordered_ppe_sequence(img, parity: Parity) -> list[PeRecord]:
    """Embeddable sites of one parity as PeRecords, in embedding order."""
    plane = build_ppe_plane(img.pixels, parity)
    records = []
    for k in range(plane.total):
        idx = int(plane.sites[k])
        records.append(
            PeRecord(
                Site(idx // plane.width, idx % plane.width),
                int(plane.pe[k]),
                int(plane.pe_pred[k]),
                int(plane.ppe[k]),
                math.sqrt(int(plane.key[k]) / 36.0),
            )
        )
    return records
