"""Reversible data hiding for 8-bit grayscale images.

Secret bits ride on the histogram of double prediction errors over a
checkerboard pixel lattice; extraction recovers both the bits and the
original image bit-exactly.
"""

from .codec import EmbedResult, StegoHeader, boundary_sweep, embed, extract
from .errors import RdhError
from .histogram_params import ShiftParams
from .image_io import GrayImage, load_pgm, psnr, save_pgm
from .lattice import Parity, Site

__version__ = "0.1.0"

__all__ = [
    "EmbedResult",
    "GrayImage",
    "Parity",
    "RdhError",
    "ShiftParams",
    "Site",
    "StegoHeader",
    "boundary_sweep",
    "embed",
    "extract",
    "load_pgm",
    "psnr",
    "save_pgm",
    "__version__",
]
