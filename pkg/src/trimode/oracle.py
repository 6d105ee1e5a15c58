"""Independent verification paths for the analytic moment dynamics.

None of these share formulas with the closed-form propagators: rk4
integrates the equations of motion numerically, mc_moments samples the
zero-mean Gaussian quadrature statistics directly, and compare_moments
reduces two states to a structured error report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import MomentState, PropagatorPair, Quadrature
from .propagator import drift_matrices, propagator_analytic

__all__ = [
    "MC_SHARD_SIZE",
    "ComparisonReport",
    "rk4_propagator",
    "mc_moments",
    "compare_moments",
]

#: Samples per Monte Carlo shard.  Each shard draws from its own jumped
#: counter-based stream, so the result depends only on (seed, n) and never
#: on how many workers execute the shards.
MC_SHARD_SIZE = 1 << 17


@dataclass(frozen=True)
class ComparisonReport:
    """Worst-case agreement between two moment states (or grids of them).

    The combined metric is |a - b| / max(1, |a|) per entry, with the first
    state as reference; the report passes when its maximum stays within
    tolerance.  worst_entry is (block, i, j, t) for the worst offender.
    """

    max_abs_err: float
    max_rel_err: float
    worst_entry: tuple
    passed: bool
    tolerance: float


def _rk4_step_matrix(a, h):
    """One classical RK4 step for dM/dt = a @ M, applied to the identity."""
    eye = np.eye(3)
    k1 = a @ eye
    k2 = a @ (eye + 0.5 * h * k1)
    k3 = a @ (eye + 0.5 * h * k2)
    k4 = a @ (eye + h * k3)
    return eye + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def rk4_propagator(c, t, steps):
    """Integrate both quadrature blocks from the identity with classical RK4.

    The step operator is constant for this linear system, so composing the
    steps reduces to a matrix power; the result is the standard fixed-step
    RK4 solution with global error O((t/steps)^4).
    """
    if not isinstance(steps, (int, np.integer)) or steps < 1:
        raise ValueError(f"steps must be a positive integer, got {steps!r}")
    if not (math.isfinite(t) and t >= 0):
        raise ValueError(f"t must be finite and >= 0, got {t!r}")
    d = drift_matrices(c)
    h = t / steps
    mx = np.linalg.matrix_power(_rk4_step_matrix(d.ax, h), steps)
    my = np.linalg.matrix_power(_rk4_step_matrix(d.ay, h), steps)
    return PropagatorPair(mx, my, t)


def mc_moments(c, t, n, seed):
    """Sample second moments of the evolved quadratures.

    Draws n independent 6-vectors of unit-variance normals (the vacuum
    statistics of X1..X3, Y1..Y3), pushes them through the analytic
    propagator blocks and averages the outer products.  Reproducible for a
    fixed seed; sharded over jumped Philox streams of MC_SHARD_SIZE samples
    so the sum is independent of any parallel execution layout.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    pair = propagator_analytic(c, t)
    base = np.random.Philox(key=int(seed))
    sxx = np.zeros((3, 3))
    syy = np.zeros((3, 3))
    drawn = 0
    shard = 0
    while drawn < n:
        m = min(MC_SHARD_SIZE, n - drawn)
        rng = np.random.Generator(base.jumped(shard))
        z = rng.standard_normal((m, 6))
        xs = z[:, :3] @ pair.mx.T
        ys = z[:, 3:] @ pair.my.T
        sxx += xs.T @ xs
        syy += ys.T @ ys
        drawn += m
        shard += 1
    sxx = 0.5 * (sxx + sxx.T) / n
    syy = 0.5 * (syy + syy.T) / n
    return MomentState(sxx, syy)


def compare_moments(a, b, tol, t=math.nan):
    """Entrywise error report between two moment states.

    Records the maximum absolute error and the maximum combined error
    |a - b| / max(1, |a|); passes when the combined maximum is within tol.
    t only labels the worst entry (useful when scanning a grid).
    """
    max_abs = 0.0
    max_rel = 0.0
    worst = (Quadrature.X, 0, 0, t)
    for quad, ma, mb in ((Quadrature.X, a.cx, b.cx), (Quadrature.Y, a.cy, b.cy)):
        diff = np.abs(ma - mb)
        rel = diff / np.maximum(1.0, np.abs(ma))
        max_abs = max(max_abs, float(diff.max()))
        if float(rel.max()) > max_rel:
            max_rel = float(rel.max())
            i, j = np.unravel_index(int(np.argmax(rel)), rel.shape)
            worst = (quad, int(i), int(j), t)
    return ComparisonReport(
        max_abs_err=max_abs,
        max_rel_err=max_rel,
        worst_entry=worst,
        passed=max_rel <= tol,
        tolerance=tol,
    )
