"""Exception types raised across the package."""


class UnsupportedShapeError(ValueError):
    """Grid shape is not supported (odd length, bad rank, size mismatch)."""


class MalformedSpectrumError(ValueError):
    """Complex spectrum is not conjugate-symmetric within tolerance."""


class InteriorViolationError(ValueError):
    """Slack or bound multiplier left the strictly positive interior."""


class NumericalBreakdownError(RuntimeError):
    """Krylov recurrence produced NaN/Inf or lost positive definiteness."""


class StalledError(RuntimeError):
    """Line search collapsed; no further progress possible."""


class IterationLimitError(RuntimeError):
    """An iterative reference method exceeded its iteration cap."""
