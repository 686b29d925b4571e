"""Deterministic synthetic grayscale test images.

Stand-ins for the four classic 512x512 grayscale benchmark photos, with
texture energy rising from "airplane" (large smooth regions) through
"baboon" (dense high-frequency detail) so payload-distortion sweeps order
the same way as the canonical set. Real fixtures, when available as PGM
files, can be swapped in by the benchmark and test suites; these exist so
everything runs self-contained.
"""

from __future__ import annotations

import numpy as np

from .image_io import GrayImage

STANDARD_NAMES = ("airplane", "lena", "baboon", "boat")

# (texture noise sigma, edge count, seed) per stand-in; sigma drives the
# width of the PPE histogram and therefore the distortion ranking.
_PROFILES = {
    "airplane": (0.55, 3, 1021),
    "lena": (1.35, 5, 1022),
    "baboon": (6.0, 9, 1023),
    "boat": (2.6, 7, 1024),
}


def _box_blur(field: np.ndarray, radius: int) -> np.ndarray:
    """Separable box blur via padded cumulative sums."""
    for axis in (0, 1):
        padded = np.cumsum(np.moveaxis(field, axis, 0), axis=0)
        size = 2 * radius + 1
        head = padded[radius : radius + 1]
        total = np.concatenate([head * 0, padded], axis=0)
        lo = np.clip(np.arange(field.shape[axis]) - radius, 0, None)
        hi = np.minimum(np.arange(field.shape[axis]) + radius + 1, field.shape[axis])
        out = (total[hi] - total[lo]) / (hi - lo)[(...,) + (None,) * (field.ndim - 1)]
        field = np.moveaxis(out, 0, axis)
    return field


def _smooth_base(rng: np.random.Generator, height: int, width: int) -> np.ndarray:
    """Sum of a few low-frequency cosine ridges, scaled to mid-gray range."""
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    base = np.zeros((height, width))
    for _ in range(4):
        fy, fx = rng.uniform(0.3, 1.6, size=2)
        phase = rng.uniform(0, 2 * np.pi)
        amp = rng.uniform(18, 42)
        base += amp * np.cos(2 * np.pi * (fy * yy / height + fx * xx / width) + phase)
    base -= base.min()
    if base.max() > 0:
        base *= 150.0 / base.max()
    return base + 50.0


def _edges(rng: np.random.Generator, height: int, width: int, count: int) -> np.ndarray:
    """A few soft-edged rectangles, mimicking object boundaries."""
    field = np.zeros((height, width))
    for _ in range(count):
        r0, c0 = rng.integers(0, height // 2), rng.integers(0, width // 2)
        r1 = r0 + int(rng.integers(height // 8, height // 2))
        c1 = c0 + int(rng.integers(width // 8, width // 2))
        field[r0 : min(r1, height), c0 : min(c1, width)] += rng.uniform(-35, 35)
    return _box_blur(field, 2)


def synthetic_image(name: str, size: int = 512) -> GrayImage:
    """One of the four named stand-ins at the given square size."""
    if name not in _PROFILES:
        raise ValueError(f"unknown synthetic image {name!r}; choose from {STANDARD_NAMES}")
    sigma, edge_count, seed = _PROFILES[name]
    rng = np.random.default_rng(seed)
    base = _smooth_base(rng, size, size) + _edges(rng, size, size, edge_count)
    texture = rng.normal(0.0, sigma, size=(size, size))
    raster = np.clip(np.rint(base + texture), 0, 255).astype(np.uint8)
    return GrayImage(raster)


def standard_test_images(size: int = 512) -> dict[str, GrayImage]:
    return {name: synthetic_image(name, size) for name in STANDARD_NAMES}


def random_test_image(seed: int, min_size: int = 64, max_size: int = 128) -> GrayImage:
    """A random smooth-ish image with mild texture, deterministic per seed."""
    rng = np.random.default_rng(seed)
    height = int(rng.integers(min_size, max_size + 1))
    width = int(rng.integers(min_size, max_size + 1))
    base = _smooth_base(rng, height, width) + _edges(rng, height, width, 3)
    texture = rng.normal(0.0, rng.uniform(0.4, 2.5), size=(height, width))
    raster = np.clip(np.rint(base + texture), 0, 255).astype(np.uint8)
    return GrayImage(raster)
