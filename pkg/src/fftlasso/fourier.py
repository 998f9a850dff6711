"""Orthogonal real-packing Fourier transform.

A real signal ``x`` of even length ``m`` has a conjugate-symmetric unitary
DFT ``v`` (``v[0]`` and ``v[m/2]`` real, ``v[k] == conj(v[m-k])``).  Packing
the independent degrees of freedom of ``v`` into a real vector

    beta = [v[0], v[m/2], sqrt(2)*Re(v[1:m/2]), sqrt(2)*Im(v[1:m/2])]

defines a real orthogonal map between spectra and signals: the synthesis
operator takes ``beta`` to ``x`` and its transpose (= inverse) takes ``x``
back to ``beta``.  Everything is applied through FFTs; no matrix is ever
materialized.

Multi-dimensional grids apply the one-dimensional transform independently
along each axis in ascending axis order; the tensor product of orthogonal
maps is again orthogonal.  Arrays are linearized row-major (C order).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np
import scipy.fft

from .errors import MalformedSpectrumError, UnsupportedShapeError

__all__ = [
    "GridShape",
    "pack",
    "unpack",
    "synthesize",
    "analyze",
]

#: Relative tolerance for the conjugate-symmetry / realness check in pack().
SYMMETRY_RTOL = 1e-10

_SQRT2 = math.sqrt(2.0)


def _fft_workers() -> int:
    """Worker count for scipy.fft; capped by the FFTLASSO_THREADS env var."""
    cap = os.environ.get("FFTLASSO_THREADS")
    if cap is not None:
        return max(1, int(cap))
    return os.cpu_count() or 1


@dataclass(frozen=True)
class GridShape:
    """Geometry of the sample grid (1 to 3 axes, every extent even).

    Attributes
    ----------
    dims : tuple of int
        Grid extents per axis.  Each must be even and >= 2.
    """

    dims: tuple[int, ...]
    n: int = field(init=False)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not 1 <= len(dims) <= 3:
            raise UnsupportedShapeError(f"need 1 to 3 axes, got {len(dims)}")
        for d in dims:
            if d < 2 or d % 2 != 0:
                raise UnsupportedShapeError(f"every axis must be even and >= 2, got {d}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "n", int(np.prod(dims)))

    @property
    def ndim(self) -> int:
        return len(self.dims)


def _as_grid(values, shape: GridShape, dtype) -> np.ndarray:
    arr = np.asarray(values, dtype=dtype)
    if arr.size != shape.n:
        raise UnsupportedShapeError(
            f"array has {arr.size} elements, grid expects {shape.n}"
        )
    return arr.reshape(shape.dims)


def _pack_axis(v: np.ndarray, axis: int) -> np.ndarray:
    """Apply the unitary packing matrix along one axis of a complex array.

    On a conjugate-symmetric fiber the output fiber is real; on general
    complex input it is the plain unitary action, so any residual imaginary
    part downstream measures the symmetry violation.
    """
    m = v.shape[axis]
    v = np.moveaxis(v, axis, -1)
    out = np.empty_like(v)
    h = m // 2
    out[..., 0] = v[..., 0]
    out[..., 1] = v[..., h]
    if h > 1:
        fwd = v[..., 1:h]
        rev = v[..., :h:-1]  # v[m-1], v[m-2], ..., v[h+1]  == v[m-k] for k=1..h-1
        out[..., 2 : h + 1] = (fwd + rev) / _SQRT2
        out[..., h + 1 :] = 1j * (rev - fwd) / _SQRT2
    return np.moveaxis(out, -1, axis)


def _unpack_axis(b: np.ndarray, axis: int) -> np.ndarray:
    """Inverse (adjoint) of :func:`_pack_axis` along one axis."""
    m = b.shape[axis]
    b = np.moveaxis(b, axis, -1)
    out = np.empty_like(b)
    h = m // 2
    out[..., 0] = b[..., 0]
    out[..., h] = b[..., 1]
    if h > 1:
        re = b[..., 2 : h + 1]
        im = b[..., h + 1 :]
        out[..., 1:h] = (re + 1j * im) / _SQRT2
        out[..., :h:-1] = (re - 1j * im) / _SQRT2
    return np.moveaxis(out, -1, axis)


def pack(v, shape: GridShape) -> np.ndarray:
    """Pack a conjugate-symmetric spectrum into its real coefficient vector.

    Parameters
    ----------
    v : array_like, complex
        Spectrum on the grid, ``shape.n`` values.  Must be conjugate
        symmetric (the spectrum of a real signal) to within
        ``SYMMETRY_RTOL`` relative to ``max(abs(v))``.

    Returns
    -------
    numpy.ndarray
        Flat real vector of length ``shape.n``.  The map is unitary, so
        the 2-norm is preserved.

    Raises
    ------
    MalformedSpectrumError
        If the symmetry violation exceeds tolerance.
    """
    w = _as_grid(v, shape, np.complex128)
    scale = np.max(np.abs(w)) if w.size else 0.0
    for axis in range(w.ndim):
        w = _pack_axis(w, axis)
    residue = np.max(np.abs(w.imag)) if w.size else 0.0
    if residue > SYMMETRY_RTOL * max(scale, 1e-300):
        raise MalformedSpectrumError(
            f"spectrum is not conjugate-symmetric: residue {residue:.3e} "
            f"exceeds {SYMMETRY_RTOL:.0e} * {scale:.3e}"
        )
    return np.ascontiguousarray(w.real).reshape(-1)


def unpack(beta, shape: GridShape) -> np.ndarray:
    """Rebuild the full conjugate-symmetric spectrum from packed form.

    Exact inverse of :func:`pack`:  ``pack(unpack(beta)) == beta`` up to
    floating-point commutativity of the sqrt(2) scaling.
    """
    w = _as_grid(beta, shape, np.float64).astype(np.complex128)
    for axis in range(shape.ndim):
        w = _unpack_axis(w, axis)
    return w.reshape(-1)


def _synthesize_axis(b: np.ndarray, axis: int, workers: int) -> np.ndarray:
    """Real packed coefficients -> real samples along one axis (c2r FFT)."""
    m = b.shape[axis]
    b = np.moveaxis(b, axis, -1)
    h = m // 2
    half = np.zeros(b.shape[:-1] + (h + 1,), dtype=np.complex128)
    half[..., 0] = b[..., 0]
    half[..., h] = b[..., 1]
    if h > 1:
        half[..., 1:h] = (b[..., 2 : h + 1] + 1j * b[..., h + 1 :]) / _SQRT2
    x = scipy.fft.irfft(half, n=m, axis=-1, norm="ortho", workers=workers)
    return np.moveaxis(x, -1, axis)


def _analyze_axis(x: np.ndarray, axis: int, workers: int) -> np.ndarray:
    """Real samples -> real packed coefficients along one axis (r2c FFT)."""
    m = x.shape[axis]
    x = np.moveaxis(x, axis, -1)
    half = scipy.fft.rfft(x, axis=-1, norm="ortho", workers=workers)
    h = m // 2
    out = np.empty(x.shape, dtype=np.float64)
    out[..., 0] = half[..., 0].real
    out[..., 1] = half[..., h].real
    if h > 1:
        out[..., 2 : h + 1] = _SQRT2 * half[..., 1:h].real
        out[..., h + 1 :] = _SQRT2 * half[..., 1:h].imag
    return np.moveaxis(out, -1, axis)


def synthesize(beta, shape: GridShape) -> np.ndarray:
    """Map packed spectral coefficients to the real signal.

    The half-spectrum inverse real FFT makes the output real by
    construction, so the transform preserves the 2-norm exactly as the
    dense orthogonal matrix would.

    Parameters
    ----------
    beta : array_like
        Flat (or grid-shaped) real coefficient vector, ``shape.n`` values.

    Returns
    -------
    numpy.ndarray
        Flat real signal of length ``shape.n`` (row-major).
    """
    x = _as_grid(beta, shape, np.float64)
    workers = _fft_workers()
    for axis in range(shape.ndim):
        x = _synthesize_axis(x, axis, workers)
    return np.ascontiguousarray(x).reshape(-1)


def analyze(x, shape: GridShape) -> np.ndarray:
    """Map a real signal to packed spectral coefficients (transpose map).

    ``analyze(synthesize(beta)) == beta`` to machine precision because the
    underlying matrix is orthogonal.
    """
    b = _as_grid(x, shape, np.float64)
    workers = _fft_workers()
    for axis in range(shape.ndim):
        b = _analyze_axis(b, axis, workers)
    return np.ascontiguousarray(b).reshape(-1)
