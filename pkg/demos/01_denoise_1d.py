#!/usr/bin/env python3
"""Denoising without missing samples: the solver vs. the closed form.

With every sample observed the observation operator is orthogonal and the
l1 problem has an exact solution: soft-threshold the analyzed signal.
This script builds a noisy signal with a 4-sparse spectrum, runs the
interior-point solver, and compares against that closed form.
"""

import numpy as np

from fftlasso import GridShape, IpmConfig, Mask, analyze, solve, synthesize
from fftlasso.diagnostics import soft_threshold

rng = np.random.default_rng(0)
n = 512
grid = GridShape((n,))
no_missing = Mask(np.array([], dtype=np.int64), grid)

# sparse truth: four active coefficients, moderate amplitudes
beta_true = np.zeros(n)
beta_true[[12, 40, 300, 450]] = [3.0, -2.0, 2.5, -1.5]
signal = synthesize(beta_true, grid)
noisy = signal + 0.05 * rng.standard_normal(n)

correlation = analyze(noisy, grid)
lam = 0.2 * np.max(np.abs(correlation))

beta, report = solve(noisy, no_missing, IpmConfig(lam=lam, tol=1e-8))
closed_form = soft_threshold(correlation, lam)

print(f"solver: {report.status} in {report.iterations} iterations, "
      f"lambda = {lam:.4f}")
print(f"PCG iterations per step: {report.krylov_counts} "
      "(preconditioner is exact without missing data)")
print(f"max |beta - soft_threshold| = {np.max(np.abs(beta - closed_form)):.2e}")

support = np.flatnonzero(np.abs(beta) > 1e-6 * np.max(np.abs(beta)))
print(f"recovered support: {support.tolist()}  (true: [12, 40, 300, 450])")
for j in support:
    print(f"  coefficient {j:4d}: recovered {beta[j]:+.4f}   "
          f"truth {beta_true[j]:+.4f}")
