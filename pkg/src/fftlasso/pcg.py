"""Preconditioned conjugate gradients for SPD operator equations.

Matrix-free: the operator and the preconditioner inverse are callables on
flat vectors.  Convergence is declared on the preconditioned residual norm
``sqrt(r' P^{-1} r)``, the natural quantity CG already carries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalBreakdownError

__all__ = ["PcgConfig", "PcgResult", "pcg_solve"]

MAX_ITERS_CAP = 5000


@dataclass(frozen=True)
class PcgConfig:
    """Stopping control for :func:`pcg_solve`.

    ``abs_tol``/``rel_tol`` bound the preconditioned residual norm; at
    least one must be positive.  ``max_iters`` defaults to 10x the system
    dimension, capped at 5000.
    """

    abs_tol: float = 1e-12
    rel_tol: float = 0.0
    max_iters: int | None = None
    record_history: bool = False

    def __post_init__(self):
        if self.abs_tol < 0 or self.rel_tol < 0:
            raise ValueError("tolerances must be nonnegative")
        if self.abs_tol == 0 and self.rel_tol == 0:
            raise ValueError("abs_tol and rel_tol cannot both be zero")

    def iteration_limit(self, dim: int) -> int:
        if self.max_iters is not None:
            return int(self.max_iters)
        return min(10 * dim, MAX_ITERS_CAP)


@dataclass
class PcgResult:
    solution: np.ndarray
    iterations: int
    converged: bool
    residual_norm: float
    residual_history: list[float] | None = field(default=None)


def pcg_solve(apply_op, apply_prec, rhs, config: PcgConfig = PcgConfig()) -> PcgResult:
    """Solve ``K x = rhs`` with preconditioned CG from a zero initial guess.

    Parameters
    ----------
    apply_op : callable
        ``v -> K v`` for a symmetric positive definite ``K``.
    apply_prec : callable
        ``v -> P^{-1} v`` for a symmetric positive definite ``P``.
    rhs : numpy.ndarray
        Right-hand side vector.
    config : PcgConfig
        Tolerances and iteration limit.

    Returns
    -------
    PcgResult
        ``converged`` is False when the iteration limit is hit; the caller
        decides how to react.

    Raises
    ------
    NumericalBreakdownError
        If the recurrence produces NaN/Inf or a direction of nonpositive
        curvature (the operator is not SPD, typically an interior
        violation upstream).
    """
    rhs = np.asarray(rhs, dtype=np.float64)
    dim = rhs.size
    limit = config.iteration_limit(dim)

    x = np.zeros_like(rhs)
    r = rhs.copy()
    z = apply_prec(r)
    rho = float(r @ z)
    if not math.isfinite(rho) or rho < 0:
        raise NumericalBreakdownError(f"preconditioner produced r'P^{{-1}}r = {rho}")
    norm0 = math.sqrt(rho)
    threshold = config.abs_tol + config.rel_tol * norm0
    history = [norm0] if config.record_history else None

    if norm0 <= threshold:
        return PcgResult(x, 0, True, norm0, history)

    p = z.copy()
    norm = norm0
    for k in range(1, limit + 1):
        kp = apply_op(p)
        curvature = float(p @ kp)
        if not math.isfinite(curvature) or curvature <= 0:
            raise NumericalBreakdownError(
                f"nonpositive curvature p'Kp = {curvature} at iteration {k}"
            )
        alpha = rho / curvature
        x += alpha * p
        r -= alpha * kp
        z = apply_prec(r)
        rho_next = float(r @ z)
        if not math.isfinite(rho_next) or rho_next < 0:
            raise NumericalBreakdownError(
                f"r'P^{{-1}}r = {rho_next} at iteration {k}"
            )
        norm = math.sqrt(rho_next)
        if history is not None:
            history.append(norm)
        if norm <= threshold:
            return PcgResult(x, k, True, norm, history)
        p = z + (rho_next / rho) * p
        rho = rho_next

    return PcgResult(x, limit, False, norm, history)
