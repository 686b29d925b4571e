"""Directional pixel predictors and the double prediction-error chain.

A target-parity pixel is predicted as a variance-weighted blend of its
horizontal and vertical neighbor means. Its prediction error is then itself
predicted from the errors of the four axial neighbors, each of which is
predicted along its two diagonals so that only context-parity pixels (plus
the neighbor itself) are ever read. The residual of that second prediction
is the value the histogram shifter operates on.

All shared quantities are evaluated in exact integer arithmetic. With
directional variance numerators s1, s2 (the 1/3 factors cancel) and
neighbor-pair sums a, b (twice the directional means), the blended
prediction is

    Round((s2 * a + s1 * b) / (2 * (s1 + s2)))

with ties rounding away from zero and an even split when s1 + s2 = 0.
This makes sender and receiver bit-identical on any platform.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .lattice import MARGIN, Site


@dataclass(frozen=True)
class SitePrediction:
    """Intermediates of one directional-blend prediction.

    ``dir1`` is horizontal for axial prediction and the NW-SE diagonal for
    diagonal prediction; ``dir2`` is vertical / NE-SW. ``weight`` is the
    share of ``dir1_mean`` in the blend.
    """

    dir1_mean: Fraction
    dir2_mean: Fraction
    dir1_var: Fraction
    dir2_var: Fraction
    weight: Fraction
    value: int


@dataclass(frozen=True)
class PeRecord:
    """Prediction-error chain of one embeddable site.

    ``pe`` is the pixel minus its prediction, ``pe_pred`` the rounded mean
    of the four neighbor prediction errors, and ``ppe`` their difference;
    pixel == prediction + pe_pred + ppe exactly. ``complexity`` is filled
    in by the ordering stage.
    """

    site: Site
    pe: int
    pe_pred: int
    ppe: int
    complexity: float = 0.0


def round_half_away(num: int, den: int) -> int:
    """Round num/den (den > 0) to the nearest integer, ties away from zero."""
    if num >= 0:
        return (2 * num + den) // (2 * den)
    return -((-2 * num + den) // (2 * den))


def _round_fraction(x: Fraction) -> int:
    return round_half_away(x.numerator, x.denominator)


def _blend(mean1: Fraction, mean2: Fraction, var1: Fraction, var2: Fraction) -> tuple[Fraction, int]:
    total = var1 + var2
    weight = Fraction(1, 2) if total == 0 else var2 / total
    return weight, _round_fraction(weight * mean1 + (1 - weight) * mean2)


def predict_axial(img, site) -> SitePrediction:
    """Predict a target-parity pixel from its four axial neighbors.

    Both directional variances are centered on the midpoint of the two
    directional means.
    """
    row, col = site
    if not (MARGIN <= row < img.height - MARGIN and MARGIN <= col < img.width - MARGIN):
        raise ValueError(f"site {site} outside the embeddable interior")
    u = img.pixels
    left, right = int(u[row, col - 1]), int(u[row, col + 1])
    up, down = int(u[row - 1, col]), int(u[row + 1, col])
    mean1 = Fraction(left + right, 2)
    mean2 = Fraction(up + down, 2)
    center = (mean1 + mean2) / 2
    var1 = ((left - center) ** 2 + (mean1 - center) ** 2 + (right - center) ** 2) / 3
    var2 = ((up - center) ** 2 + (mean2 - center) ** 2 + (down - center) ** 2) / 3
    weight, value = _blend(mean1, mean2, var1, var2)
    return SitePrediction(mean1, mean2, var1, var2, weight, value)


def predict_diagonal(img, site) -> SitePrediction:
    """Predict a context-parity pixel from its four diagonal neighbors.

    Unlike the axial flavor, both variances are centered on the pixel's
    current stored value, which is legitimate context because this parity
    is never modified during the pass.
    """
    row, col = site
    if not (1 <= row < img.height - 1 and 1 <= col < img.width - 1):
        raise ValueError(f"site {site} is missing diagonal context")
    u = img.pixels
    z = int(u[row, col])
    nw, se = int(u[row - 1, col - 1]), int(u[row + 1, col + 1])
    ne, sw = int(u[row - 1, col + 1]), int(u[row + 1, col - 1])
    mean1 = Fraction(nw + se, 2)
    mean2 = Fraction(ne + sw, 2)
    var1 = ((nw - z) ** 2 + (mean1 - z) ** 2 + (se - z) ** 2) / 3
    var2 = ((ne - z) ** 2 + (mean2 - z) ** 2 + (sw - z) ** 2) / 3
    weight, value = _blend(mean1, mean2, var1, var2)
    return SitePrediction(mean1, mean2, var1, var2, weight, value)


def ppe_of(img, site) -> PeRecord:
    """Full prediction-error chain of one embeddable target site."""
    row, col = site
    value = predict_axial(img, site).value
    pe = int(img.pixels[row, col]) - value
    neighbor_sum = 0
    for nr, nc in ((row - 1, col), (row, col + 1), (row + 1, col), (row, col - 1)):
        neighbor_sum += int(img.pixels[nr, nc]) - predict_diagonal(img, (nr, nc)).value
    pe_pred = round_half_away(neighbor_sum, 4)
    return PeRecord(Site(row, col), pe, pe_pred, pe - pe_pred)


# ---------------------------------------------------------------------------
# Vectorized planes. Same arithmetic as the scalar functions above, expressed
# on int64 slices of the whole image; the unit tests assert equivalence.
# ---------------------------------------------------------------------------


def _round_div_away(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    # elementwise round(num/den) with ties away from zero; den > 0
    mag = (2 * np.abs(num) + den) // (2 * den)
    return np.where(num < 0, -mag, mag)


def _blend_planes(sum1, sum2, s1, s2):
    # Round((s2*sum1 + s1*sum2) / (2*(s1+s2))), even split when s1+s2 == 0.
    den = s1 + s2
    safe = np.where(den > 0, den, 1)
    blended = (2 * (s2 * sum1 + s1 * sum2) + 2 * safe) // (4 * safe)
    even = (2 * (sum1 + sum2) + 4) // 8
    return np.where(den > 0, blended, even)


def axial_planes(u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Predictions and prediction errors for every interior site.

    Returns (prediction, pe) arrays over the (h-4) x (w-4) interior grid.
    """
    h, w = u.shape
    center = u[2 : h - 2, 2 : w - 2]
    left = u[2 : h - 2, 1 : w - 3]
    right = u[2 : h - 2, 3 : w - 1]
    up = u[1 : h - 3, 2 : w - 2]
    down = u[3 : h - 1, 2 : w - 2]
    a = left + right
    b = up + down
    t = a + b  # four times the variance center
    s1 = (4 * left - t) ** 2 + (a - b) ** 2 + (4 * right - t) ** 2
    s2 = (4 * up - t) ** 2 + (a - b) ** 2 + (4 * down - t) ** 2
    pred = _blend_planes(a, b, s1, s2)
    return pred, center - pred


def diagonal_pe_plane(u: np.ndarray) -> np.ndarray:
    """Prediction errors of every site with full diagonal context.

    Covers rows/cols 1..h-2 / 1..w-2; entry [r-1, c-1] belongs to site (r, c).
    """
    h, w = u.shape
    z = u[1 : h - 1, 1 : w - 1]
    nw = u[0 : h - 2, 0 : w - 2]
    se = u[2:h, 2:w]
    ne = u[0 : h - 2, 2:w]
    sw = u[2:h, 0 : w - 2]
    c = nw + se
    d = ne + sw
    s1 = 4 * (nw - z) ** 2 + (c - 2 * z) ** 2 + 4 * (se - z) ** 2
    s2 = 4 * (ne - z) ** 2 + (d - 2 * z) ** 2 + 4 * (sw - z) ** 2
    return z - _blend_planes(c, d, s1, s2)


def ppe_planes(u: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(prediction, pe, pe_pred, ppe) over the interior grid."""
    h, w = u.shape
    pred, pe = axial_planes(u)
    edia = diagonal_pe_plane(u)
    north = edia[0 : h - 4, 1 : w - 3]
    south = edia[2 : h - 2, 1 : w - 3]
    west = edia[1 : h - 3, 0 : w - 4]
    east = edia[1 : h - 3, 2 : w - 2]
    pe_pred = _round_div_away(north + east + south + west, np.int64(4))
    return pred, pe, pe_pred, pe - pe_pred
