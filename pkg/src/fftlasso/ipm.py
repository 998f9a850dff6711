"""Primal-dual interior-point driver for the spectral LASSO problem.

Solves

    min_beta  0.5*||b - observe(beta)||^2 + lam*||beta||_1

through the standard bound-constrained reformulation with auxiliary
variable ``z`` (|beta| <= z elementwise), slacks ``s1 = z + beta``,
``s2 = z - beta``, equality multipliers ``y1, y2`` and bound multipliers
``nu1, nu2``.  Each iteration takes one Newton step on the barrier KKT
system (no predictor-corrector), solving the condensed 2x2 system with
preconditioned CG, then applies separate primal and dual step lengths by
the fraction-to-boundary rule.  The barrier parameter follows a monotone
schedule with a superlinear tail once the iterate is centered.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import NumericalBreakdownError, StalledError
from .masking import Mask, observe, observe_adjoint
from .newton_system import (
    BarrierDiagonals,
    KktRhs,
    apply_kkt,
    apply_precond_inverse,
    barrier_diagonals,
    newton_rhs,
    recover_eliminated,
)
from .pcg import PcgConfig, pcg_solve

__all__ = [
    "IpmConfig",
    "IpmState",
    "IterationRecord",
    "SolveReport",
    "ConvergenceReport",
    "default_penalty",
    "lasso_objective",
    "initial_state",
    "newton_direction",
    "ipm_step",
    "next_barrier",
    "check_convergence",
    "solve",
]


@dataclass(frozen=True)
class IpmConfig:
    """Solver parameters.

    ``lam`` may be None, in which case the standard LASSO scaling
    ``0.1 * max|observe_adjoint(b)|`` is used and recorded in the report.
    """

    lam: float | None = None
    tol: float = 1e-8
    max_iters: int = 200
    mu_init: float | None = None  # defaults to lam / 2
    sigma_mu: float = 0.2
    mu_power: float = 1.5
    ftb_tau: float = 0.995
    gamma_centrality: float = 1e-4  # monitoring only, never enforced
    cg_tol: float = 1e-12
    cg_max_iters: int | None = None
    # a barrier stage counts as solved when the barrier residual <= this * mu
    inner_slack: float = 10.0

    def __post_init__(self):
        if not 0.0 < self.sigma_mu < 1.0:
            raise ValueError("sigma_mu must lie in (0, 1)")
        if not 0.0 < self.ftb_tau < 1.0:
            raise ValueError("ftb_tau must lie in (0, 1)")
        if self.tol <= 0.0:
            raise ValueError("tol must be positive")


@dataclass
class IpmState:
    """All primal-dual iterates plus the current barrier parameter."""

    beta: np.ndarray
    z: np.ndarray
    s1: np.ndarray
    s2: np.ndarray
    y1: np.ndarray
    y2: np.ndarray
    nu1: np.ndarray
    nu2: np.ndarray
    mu: float

    @property
    def n(self) -> int:
        return self.beta.size

    def duality_measure(self) -> float:
        """Average complementarity product (nu1's1 + nu2's2) / 2n."""
        return float(self.nu1 @ self.s1 + self.nu2 @ self.s2) / (2 * self.n)

    def assert_interior(self):
        for name in ("s1", "s2", "nu1", "nu2"):
            if np.any(getattr(self, name) <= 0.0):
                raise StalledError(f"{name} left the strict interior")


@dataclass(frozen=True)
class ConvergenceReport:
    """Residuals of the exact (mu = 0) KKT conditions at an iterate."""

    stationarity: float  # grad of the quadratic + multiplier split
    dual_equality: float  # lam - y1 - y2
    multiplier_gap: float  # y - nu
    primal: float  # z +/- beta - s
    complementarity: float  # max s_i nu_i
    max_residual: float
    converged: bool
    centrality_ok: bool  # min s_i nu_i >= gamma * duality measure
    duality_measure: float


@dataclass
class IterationRecord:
    iteration: int
    mu: float
    primal_inf: float
    dual_inf: float
    complementarity: float
    kkt_max: float
    krylov_iters: int
    alpha_primal: float
    alpha_dual: float
    pcg_residual: float
    centrality_ok: bool
    wall_time: float

    def to_dict(self) -> dict:
        return {
            "record": "iteration",
            "iteration": self.iteration,
            "mu": self.mu,
            "primal_inf": self.primal_inf,
            "dual_inf": self.dual_inf,
            "complementarity": self.complementarity,
            "kkt_max": self.kkt_max,
            "krylov_iters": self.krylov_iters,
            "alpha_primal": self.alpha_primal,
            "alpha_dual": self.alpha_dual,
            "pcg_residual": self.pcg_residual,
            "centrality_ok": self.centrality_ok,
            "wall_time": self.wall_time,
        }


@dataclass
class SolveReport:
    status: str  # "converged" or "max_iters"
    iterations: int
    lam: float
    tol: float
    records: list[IterationRecord]
    final_objective: float
    final_kkt: float
    final_mu: float
    wall_time: float

    @property
    def converged(self) -> bool:
        return self.status == "converged"

    @property
    def krylov_counts(self) -> list[int]:
        return [rec.krylov_iters for rec in self.records]

    @property
    def total_krylov(self) -> int:
        return sum(self.krylov_counts)

    def to_dict(self) -> dict:
        return {
            "record": "summary",
            "status": self.status,
            "iterations": self.iterations,
            "lambda": self.lam,
            "tol": self.tol,
            "final_objective": self.final_objective,
            "final_kkt": self.final_kkt,
            "final_mu": self.final_mu,
            "total_krylov": self.total_krylov,
            "wall_time": self.wall_time,
        }


def _inf_norm(v: np.ndarray) -> float:
    return float(np.max(np.abs(v))) if v.size else 0.0


def default_penalty(b, mask: Mask) -> float:
    """Standard LASSO heuristic: one tenth of the max correlation."""
    return 0.1 * float(np.max(np.abs(observe_adjoint(b, mask))))


def lasso_objective(beta, b, mask: Mask, lam: float) -> float:
    resid = b - observe(beta, mask)
    return 0.5 * float(resid @ resid) + lam * float(np.sum(np.abs(beta)))


def initial_state(b, mask: Mask, lam: float, mu_init: float | None = None) -> IpmState:
    """Well-centered starting point.

    ``beta = 0``, ``z = s1 = s2 = 1`` satisfies both slack equations
    exactly; ``y = nu = lam/2`` zeroes the dual equality and multiplier
    gaps; the only nonzero residual left is the data correlation.  The
    duality measure then equals ``lam/2``, taken as the initial barrier.
    """
    if lam <= 0:
        raise ValueError("penalty must be positive")
    n = mask.shape.n
    e = np.ones(n)
    half = 0.5 * lam * e
    mu = lam / 2.0 if mu_init is None else float(mu_init)
    return IpmState(
        beta=np.zeros(n),
        z=e.copy(),
        s1=e.copy(),
        s2=e.copy(),
        y1=half.copy(),
        y2=half.copy(),
        nu1=half.copy(),
        nu2=half.copy(),
        mu=mu,
    )


def check_convergence(state: IpmState, b, mask: Mask, lam: float,
                      tol: float, gamma: float = 1e-4) -> ConvergenceReport:
    """Evaluate the exact KKT residuals and the centrality monitor."""
    resid = b - observe(state.beta, mask)
    stationarity = observe_adjoint(resid, mask) + state.y1 - state.y2
    dual_eq = lam - state.y1 - state.y2
    gap1 = state.y1 - state.nu1
    gap2 = state.y2 - state.nu2
    primal1 = state.z + state.beta - state.s1
    primal2 = state.z - state.beta - state.s2
    prod1 = state.s1 * state.nu1
    prod2 = state.s2 * state.nu2

    stat = _inf_norm(stationarity)
    dual = _inf_norm(dual_eq)
    mgap = max(_inf_norm(gap1), _inf_norm(gap2))
    primal = max(_inf_norm(primal1), _inf_norm(primal2))
    comp = max(float(prod1.max()), float(prod2.max()))
    worst = max(stat, dual, mgap, primal, comp)

    measure = state.duality_measure()
    central = bool(min(prod1.min(), prod2.min()) >= gamma * measure)
    return ConvergenceReport(
        stationarity=stat,
        dual_equality=dual,
        multiplier_gap=mgap,
        primal=primal,
        complementarity=comp,
        max_residual=worst,
        converged=worst <= tol,
        centrality_ok=central,
        duality_measure=measure,
    )


def _barrier_residual(state: IpmState, rhs: KktRhs) -> float:
    """Max norm of the barrier (mu-shifted) KKT residuals."""
    comp1 = state.s1 * state.nu1 - state.mu
    comp2 = state.s2 * state.nu2 - state.mu
    pieces = [rhs.r1, rhs.r2, rhs.r5, rhs.r6, comp1, comp2,
              state.y1 - state.nu1, state.y2 - state.nu2]
    return max(float(np.max(np.abs(p))) for p in pieces)


@dataclass(frozen=True)
class NewtonDirection:
    """Physical step for every block, plus solve diagnostics."""

    d_beta: np.ndarray
    d_z: np.ndarray
    d_s1: np.ndarray
    d_s2: np.ndarray
    d_y1: np.ndarray
    d_y2: np.ndarray
    d_nu1: np.ndarray
    d_nu2: np.ndarray
    krylov_iters: int
    pcg_residual: float
    rhs: KktRhs
    diag: BarrierDiagonals


def newton_direction(state: IpmState, b, mask: Mask, lam: float,
                     config: IpmConfig) -> NewtonDirection:
    """One Newton direction on the barrier KKT system at the current mu.

    The condensed 2x2 system is solved matrix-free by PCG; eliminated
    blocks are back-substituted, the slack components are flipped to the
    physical sign convention, and the bound-multiplier step comes from the
    linearized complementarity rows:

        d_nu = (mu - s*nu)/s - sigma * d_s
    """
    n = state.n
    diag = barrier_diagonals(state.s1, state.s2, state.nu1, state.nu2)
    rhs = newton_rhs(state, b, mask, lam)

    def op(v):
        top, bottom = apply_kkt(v[:n], v[n:], diag, mask)
        return np.concatenate([top, bottom])

    def prec(v):
        top, bottom = apply_precond_inverse(v[:n], v[n:], diag)
        return np.concatenate([top, bottom])

    pcg_cfg = PcgConfig(abs_tol=config.cg_tol, max_iters=config.cg_max_iters)
    result = pcg_solve(op, prec, np.concatenate([rhs.r_beta, rhs.r_c]), pcg_cfg)
    if not result.converged:
        raise NumericalBreakdownError(
            f"PCG stalled at preconditioned residual {result.residual_norm:.3e} "
            f"after {result.iterations} iterations"
        )

    sol = recover_eliminated(result.solution[:n], result.solution[n:], rhs, diag)
    d_s1 = -sol.d_s1  # condensed system carries slacks with flipped sign
    d_s2 = -sol.d_s2
    d_nu1 = (state.mu - state.s1 * state.nu1) / state.s1 - diag.sigma1 * d_s1
    d_nu2 = (state.mu - state.s2 * state.nu2) / state.s2 - diag.sigma2 * d_s2
    return NewtonDirection(
        d_beta=sol.d_beta,
        d_z=sol.d_z,
        d_s1=d_s1,
        d_s2=d_s2,
        d_y1=sol.d_y1,
        d_y2=sol.d_y2,
        d_nu1=d_nu1,
        d_nu2=d_nu2,
        krylov_iters=result.iterations,
        pcg_residual=result.residual_norm,
        rhs=rhs,
        diag=diag,
    )


def fraction_to_boundary(v: np.ndarray, dv: np.ndarray, tau: float) -> float:
    """Largest step in (0, 1] keeping ``v + alpha*dv >= (1 - tau) * v``."""
    shrinking = dv < 0.0
    if not np.any(shrinking):
        return 1.0
    ratio = float(np.min(v[shrinking] / -dv[shrinking]))
    return min(1.0, tau * ratio)


def ipm_step(state: IpmState, b, mask: Mask, lam: float,
             config: IpmConfig) -> tuple[IpmState, NewtonDirection, float, float]:
    """Take one damped Newton step; returns the new state and step data."""
    direction = newton_direction(state, b, mask, lam, config)
    tau = max(config.ftb_tau, 1.0 - state.mu)
    alpha_p = min(
        fraction_to_boundary(state.s1, direction.d_s1, tau),
        fraction_to_boundary(state.s2, direction.d_s2, tau),
    )
    alpha_d = min(
        fraction_to_boundary(state.nu1, direction.d_nu1, tau),
        fraction_to_boundary(state.nu2, direction.d_nu2, tau),
    )
    if min(alpha_p, alpha_d) < 1e-12:
        raise StalledError(
            f"fraction-to-boundary step collapsed (alpha_p={alpha_p:.2e}, "
            f"alpha_d={alpha_d:.2e})"
        )
    new_state = IpmState(
        beta=state.beta + alpha_p * direction.d_beta,
        z=state.z + alpha_p * direction.d_z,
        s1=state.s1 + alpha_p * direction.d_s1,
        s2=state.s2 + alpha_p * direction.d_s2,
        y1=state.y1 + alpha_d * direction.d_y1,
        y2=state.y2 + alpha_d * direction.d_y2,
        nu1=state.nu1 + alpha_d * direction.d_nu1,
        nu2=state.nu2 + alpha_d * direction.d_nu2,
        mu=state.mu,
    )
    new_state.assert_interior()
    return new_state, direction, alpha_p, alpha_d


def next_barrier(mu: float, tol: float, config: IpmConfig) -> float:
    """Monotone barrier schedule with a superlinear tail near the floor."""
    return max(tol / 10.0, min(config.sigma_mu * mu, mu ** config.mu_power))


def solve(b, mask: Mask, config: IpmConfig = IpmConfig(),
          observer=None) -> tuple[np.ndarray, SolveReport]:
    """Run the interior-point method to the requested KKT tolerance.

    Parameters
    ----------
    b : numpy.ndarray
        Observed samples (length ``mask.n_observed``).
    mask : Mask
        Missing-sample set (empty mask = pure denoising).
    config : IpmConfig
        Parameters; ``config.lam=None`` picks the default penalty.
    observer : callable, optional
        Called as ``observer(state, record)`` after every iteration;
        used by the spectral diagnostics to record trajectories.

    Returns
    -------
    beta : numpy.ndarray
        Recovered packed spectrum.  The imputed signal on the full grid is
        ``fourier.synthesize(beta, mask.shape)``.
    report : SolveReport
        Per-iteration residuals, barrier values, Krylov counts, timings.
        On iteration exhaustion the best iterate seen is returned with
        status ``"max_iters"``.
    """
    b = np.asarray(b, dtype=np.float64).reshape(-1)
    lam = config.lam if config.lam is not None else default_penalty(b, mask)
    state = initial_state(b, mask, lam, config.mu_init)

    t0 = time.perf_counter()
    records: list[IterationRecord] = []
    best_beta = state.beta.copy()
    best_kkt = math.inf
    status = "max_iters"
    conv = check_convergence(state, b, mask, lam, config.tol, config.gamma_centrality)

    for iteration in range(1, config.max_iters + 1):
        if conv.converged:
            status = "converged"
            break
        rhs = newton_rhs(state, b, mask, lam)
        if _barrier_residual(state, rhs) <= config.inner_slack * state.mu:
            state.mu = next_barrier(state.mu, config.tol, config)

        t_iter = time.perf_counter()
        state, direction, alpha_p, alpha_d = ipm_step(state, b, mask, lam, config)
        conv = check_convergence(state, b, mask, lam, config.tol, config.gamma_centrality)
        record = IterationRecord(
            iteration=iteration,
            mu=state.mu,
            primal_inf=conv.primal,
            dual_inf=max(conv.dual_equality, conv.multiplier_gap, conv.stationarity),
            complementarity=conv.complementarity,
            kkt_max=conv.max_residual,
            krylov_iters=direction.krylov_iters,
            alpha_primal=alpha_p,
            alpha_dual=alpha_d,
            pcg_residual=direction.pcg_residual,
            centrality_ok=conv.centrality_ok,
            wall_time=time.perf_counter() - t_iter,
        )
        records.append(record)
        if conv.max_residual < best_kkt:
            best_kkt = conv.max_residual
            best_beta = state.beta.copy()
        if observer is not None:
            observer(state, record)
    else:
        if conv.converged:
            status = "converged"

    beta = state.beta if status == "converged" else best_beta
    report = SolveReport(
        status=status,
        iterations=len(records),
        lam=lam,
        tol=config.tol,
        records=records,
        final_objective=lasso_objective(beta, b, mask, lam),
        final_kkt=conv.max_residual if status == "converged" else best_kkt,
        final_mu=state.mu,
        wall_time=time.perf_counter() - t0,
    )
    return beta, report
