"""Checkerboard partition of the pixel grid and embeddable-site enumeration.

Sites split into two parities: CROSS where (row + col) is odd, DOT where it
is even. One parity hosts hidden bits while the other supplies untouched
prediction context; the roles swap between passes. Context lookups reach up
to Chebyshev distance 2 from a target, so only sites at least 2 away from
every border are embeddable. Everything here is a pure function of the
image dimensions, which is what lets sender and receiver enumerate the
same sites.
"""

from __future__ import annotations

import enum
from typing import NamedTuple

import numpy as np

MARGIN = 2


class Parity(enum.Enum):
    CROSS = "cross"  # (row + col) odd
    DOT = "dot"  # (row + col) even

    @property
    def other(self) -> "Parity":
        return Parity.DOT if self is Parity.CROSS else Parity.CROSS


class Site(NamedTuple):
    row: int
    col: int


def parity_of(site) -> Parity:
    row, col = site
    return Parity.CROSS if (row + col) % 2 == 1 else Parity.DOT


def interior_extent(height: int, width: int) -> tuple[int, int]:
    """Rows/cols of the embeddable interior; zero when the image is too small."""
    return max(0, height - 2 * MARGIN), max(0, width - 2 * MARGIN)


def interior_parity_mask(height: int, width: int, parity: Parity) -> np.ndarray:
    """Boolean mask over the interior grid selecting one parity.

    Grid position (r, c) maps to image site (r + MARGIN, c + MARGIN); the
    offset is even so the grid parity equals the site parity.
    """
    rows, cols = interior_extent(height, width)
    grid = (np.arange(rows)[:, None] + np.arange(cols)[None, :]) % 2
    return grid == (1 if parity is Parity.CROSS else 0)


def embeddable_sites(img, parity: Parity) -> list[Site]:
    """All interior sites of the given parity, in raster order."""
    mask = interior_parity_mask(img.height, img.width, parity)
    rows, cols = np.nonzero(mask)
    return [Site(int(r) + MARGIN, int(c) + MARGIN) for r, c in zip(rows, cols)]


def margin_indices(height: int, width: int) -> np.ndarray:
    """Linear indices (raster order) of sites never touched by embedding."""
    interior = np.zeros((height, width), dtype=bool)
    if height > 2 * MARGIN and width > 2 * MARGIN:
        interior[MARGIN : height - MARGIN, MARGIN : width - MARGIN] = True
    return np.flatnonzero(~interior.reshape(-1))
