"""Shared dense oracles and instance builders for the test suite."""

from __future__ import annotations

import numpy as np
import pytest
from scipy.optimize import brentq

from fftlasso import GridShape, Mask
from fftlasso.diagnostics import dense_gram_matrix, dense_synthesis_matrix
from fftlasso.ipm import IpmState


def dense_observation_matrix(mask: Mask) -> np.ndarray:
    """Observed rows of the dense synthesis matrix."""
    a = dense_synthesis_matrix(mask.shape)
    return a[~mask.missing_bool, :]


def dense_augmented_system(state: IpmState, mask: Mask):
    """Dense 6n x 6n symmetrized Newton matrix in the packed block order.

    Variables ordered (d_beta, d_z, d_s1, d_s2, d_y1, d_y2); the slack
    columns carry the flipped sign convention of the condensed algebra.
    """
    n = state.n
    g = dense_gram_matrix(mask)
    i = np.eye(n)
    z = np.zeros((n, n))
    sig1 = np.diag(state.nu1 / state.s1)
    sig2 = np.diag(state.nu2 / state.s2)
    return np.block([
        [g, z, z, z, -i, i],
        [z, z, z, z, -i, -i],
        [z, z, sig1, z, -i, z],
        [z, z, z, sig2, z, -i],
        [-i, -i, -i, z, z, z],
        [i, -i, z, -i, z, z],
    ])


def random_interior_state(rng, n: int, mu: float = 0.05) -> IpmState:
    """Arbitrary strictly interior iterate (not centered, not feasible)."""
    return IpmState(
        beta=rng.standard_normal(n) * 0.4,
        z=rng.random(n) + 0.8,
        s1=rng.random(n) + 0.4,
        s2=rng.random(n) + 0.4,
        y1=rng.random(n) + 0.3,
        y2=rng.random(n) + 0.3,
        nu1=rng.random(n) + 0.3,
        nu2=rng.random(n) + 0.3,
        mu=mu,
    )


def central_path_state(xi: np.ndarray, lam: float, mu: float) -> IpmState:
    """Exact barrier-system solution for the empty-mask problem.

    With an orthogonal observation operator the barrier system separates
    per component: with t = z_i the scalar equations reduce to

        t * ((t + lam)^2 - xi_i^2) = (2 mu / lam) * (t + lam)^2

    whose unique positive root gives z, then beta = xi*z/(z+lam) and the
    slacks/multipliers follow.  Used as the ground-truth point where every
    barrier residual must vanish.
    """
    n = xi.size
    z = np.empty(n)
    for i, x in enumerate(xi):
        c = 2.0 * mu / lam

        def h(t, x=x, c=c):
            return t * ((t + lam) ** 2 - x * x) - c * (t + lam) ** 2

        hi = abs(x) + lam + c + 1.0
        while h(hi) <= 0.0:
            hi *= 2.0
        z[i] = brentq(h, 0.0, hi, xtol=1e-16, rtol=8.9e-16, maxiter=200)
    beta = xi * z / (z + lam)
    # the smaller slack is recovered from the product identity
    # s1*s2 = 2*mu*z/lam instead of the cancellation-prone difference
    s_plus = z + np.abs(beta)
    s_minus = (2.0 * mu / lam) * z / s_plus
    s1 = np.where(beta >= 0, s_plus, s_minus)
    s2 = np.where(beta >= 0, s_minus, s_plus)
    nu1 = mu / s1
    nu2 = mu / s2
    return IpmState(beta=beta, z=z, s1=s1, s2=s2, y1=nu1.copy(), y2=nu2.copy(),
                    nu1=nu1, nu2=nu2, mu=mu)


def sparse_instance(rng, n: int, n_missing: int, n_active: int,
                    amplitude=(1.0, 2.0), noise: float = 0.02):
    """Masked observations of a sparse spectrum plus small noise."""
    from fftlasso import observe

    shape = GridShape((n,))
    missing = np.sort(rng.choice(n, size=n_missing, replace=False))
    mask = Mask(missing, shape)
    beta_true = np.zeros(n)
    idx = rng.choice(n, size=n_active, replace=False)
    lo, hi = amplitude
    beta_true[idx] = (lo + (hi - lo) * rng.random(n_active)) * np.sign(
        rng.standard_normal(n_active)
    )
    b = observe(beta_true, mask) + noise * rng.standard_normal(mask.n_observed)
    return b, mask, beta_true


def penalty_at_widest_gap(xi, lo_frac=1 / 16, hi_frac=1 / 4):
    """Penalty centered in the widest gap of the sorted correlation sizes.

    Guarantees a strict-complementarity margin between the penalty and
    every |xi_i|, so the solution support is numerically unambiguous.
    Returns (penalty, margin).
    """
    a = np.sort(np.abs(xi))[::-1]
    lo = max(1, int(len(a) * lo_frac))
    hi = max(lo + 1, int(len(a) * hi_frac))
    gaps = a[lo - 1 : hi - 1] - a[lo:hi]
    k = lo + int(np.argmax(gaps))
    return 0.5 * (a[k - 1] + a[k]), 0.5 * (a[k - 1] - a[k])


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
