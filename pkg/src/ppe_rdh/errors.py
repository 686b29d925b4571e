"""Error types shared across the toolkit.

Each error carries a short machine-readable ``code`` so the CLI can report
failures in a stable, scriptable form.
"""


class RdhError(Exception):
    """Base class for all toolkit errors."""

    code = "error"


class PgmError(RdhError):
    """Malformed or unsupported PGM payload."""

    code = "pgm"

    def __init__(self, message, code=None):
        super().__init__(message)
        if code is not None:
            self.code = code


class DimensionMismatch(RdhError):
    code = "dimension-mismatch"


class HistogramSaturated(RdhError):
    """No empty bin is available on one side of the histogram."""

    code = "histogram-saturated"


class InsufficientCapacity(RdhError):
    """No feasible peak pair can carry the requested payload."""

    code = "insufficient-capacity"


class SelectionFailure(RdhError):
    """Parameter selection exhausted the PPE sequence without success."""

    code = "selection-failure"


class CapacityError(RdhError):
    """The cover image cannot hold the requested payload."""

    code = "capacity"


class BoundaryMapError(RdhError):
    """The overflow location map would exceed its wire-format limit."""

    code = "boundary-density"


class NotStegoError(RdhError):
    """The image does not carry a recognizable embedded header."""

    code = "not-ppe-rdh"


class CorruptStegoError(RdhError):
    """The image carries a header but its streams do not parse cleanly."""

    code = "corrupt-stego"
