"""Matrix-free observation operators for signals with missing samples.

With ``A`` the orthogonal synthesis map of :mod:`fftlasso.fourier` and a set
of missing sample indices, the observation operator keeps only the observed
rows of ``A``.  Its transpose zero-fills the missing slots and applies the
analysis map.  The composition (the Gram operator of the observed rows) is
symmetric positive semidefinite with spectrum inside [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import UnsupportedShapeError
from .fourier import GridShape, analyze, synthesize

__all__ = ["Mask", "observe", "observe_adjoint", "gram", "embed"]


@dataclass(frozen=True)
class Mask:
    """Missing-sample index set on a grid.

    Attributes
    ----------
    missing : numpy.ndarray
        Strictly increasing linear (row-major) indices of missing samples.
        May be empty (pure denoising); must not cover the whole grid.
    shape : GridShape
        Grid geometry the indices refer to.
    """

    missing: np.ndarray
    shape: GridShape
    missing_bool: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        idx = np.asarray(self.missing, dtype=np.int64).reshape(-1)
        if idx.size:
            if idx[0] < 0 or idx[-1] >= self.shape.n:
                raise ValueError("missing indices out of range")
            if np.any(np.diff(idx) <= 0):
                raise ValueError("missing indices must be strictly increasing")
        if idx.size >= self.shape.n:
            raise ValueError("cannot mask every sample")
        flags = np.zeros(self.shape.n, dtype=bool)
        flags[idx] = True
        object.__setattr__(self, "missing", idx)
        object.__setattr__(self, "missing_bool", flags)

    @property
    def n_missing(self) -> int:
        return int(self.missing.size)

    @property
    def n_observed(self) -> int:
        return self.shape.n - self.n_missing

    @classmethod
    def from_bool(cls, flags, shape: GridShape) -> "Mask":
        """Build from a boolean/byte array with True/1 marking missing."""
        flags = np.asarray(flags).reshape(-1).astype(bool)
        if flags.size != shape.n:
            raise UnsupportedShapeError(
                f"mask has {flags.size} entries, grid expects {shape.n}"
            )
        return cls(np.flatnonzero(flags), shape)


def _check_spectrum(beta, mask: Mask) -> np.ndarray:
    beta = np.asarray(beta, dtype=np.float64).reshape(-1)
    if beta.size != mask.shape.n:
        raise UnsupportedShapeError(
            f"coefficient vector has {beta.size} entries, grid expects {mask.shape.n}"
        )
    return beta


def observe(beta, mask: Mask) -> np.ndarray:
    """Synthesize the signal and keep the observed samples, in index order."""
    beta = _check_spectrum(beta, mask)
    x = synthesize(beta, mask.shape)
    if mask.n_missing == 0:
        return x
    return x[~mask.missing_bool]


def embed(values, mask: Mask) -> np.ndarray:
    """Zero-fill observed values back onto the full grid."""
    values = np.asarray(values, dtype=np.float64).reshape(-1)
    if values.size != mask.n_observed:
        raise UnsupportedShapeError(
            f"observed vector has {values.size} entries, mask expects {mask.n_observed}"
        )
    full = np.zeros(mask.shape.n, dtype=np.float64)
    full[~mask.missing_bool] = values
    return full


def observe_adjoint(values, mask: Mask) -> np.ndarray:
    """Transpose of :func:`observe`: zero-fill, then analyze."""
    return analyze(embed(values, mask), mask.shape)


def gram(beta, mask: Mask) -> np.ndarray:
    """Apply the Gram operator of the observed rows in one pass.

    Equivalent to ``observe_adjoint(observe(beta, mask), mask)`` but zeroes
    the missing samples in place on the full grid instead of materializing
    the shorter observed vector.
    """
    beta = _check_spectrum(beta, mask)
    x = synthesize(beta, mask.shape)
    if mask.n_missing:
        x[mask.missing] = 0.0
    return analyze(x, mask.shape)
