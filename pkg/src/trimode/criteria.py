"""Entanglement criteria evaluated on a second-moment state.

Two families are implemented:

* pairwise variance sums v_ij = V(X_i - X_j) + V(Y_i + Y_j + g_k Y_k),
  bounded below by 4 for separable states, either with unit gains ("raw")
  or with the variance-minimising gains ("optimised");
* inference products obr_i = Vinf(X_i) * Vinf(Y_i) (bound 1) and
  obr_jk = Vinf(X_j + X_k) * Vinf(Y_j + Y_k) (bound 4), built from optimal
  linear estimates of one quadrature combination from another.

All mode indices in this module are 1-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    CombinationError,
    CriteriaReport,
    MomentState,
    ObrPairs,
    ObrSingles,
    Quadrature,
    Sign,
    VlfGains,
    VlfTriple,
)

__all__ = [
    "DENOMINATOR_FLOOR",
    "UNIT_GAINS",
    "QuadCombo",
    "combo_variance",
    "combo_covariance",
    "inferred_variance_single",
    "obr_single",
    "inferred_variance_pair",
    "obr_pair",
    "vlf_gains",
    "vlf_value",
    "evaluate_all",
]

#: Below this, a variance carries no usable information for inference and
#: the corresponding correction term is dropped instead of divided by.
DENOMINATOR_FLOOR = 1e-12

#: Gains of the unoptimised ("raw") pairwise sums.
UNIT_GAINS = VlfGains(1.0, 1.0, 1.0)

_VALID_PAIRS = ((1, 2), (1, 3), (2, 3))


@dataclass(frozen=True)
class QuadCombo:
    """A linear combination sum_i weights[i] * quad_i of one quadrature type."""

    quad: Quadrature
    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.shape != (3,):
            raise ValueError(f"weights must be a 3-vector, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        if np.all(w == 0):
            raise ValueError("at least one weight must be nonzero")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)


def _check_mode(i):
    if i not in (1, 2, 3):
        raise ValueError(f"mode index must be 1, 2 or 3, got {i!r}")


def _other_modes(i):
    return tuple(m for m in (1, 2, 3) if m != i)


def _pair_weights(j, k, sign):
    w = np.zeros(3)
    w[j - 1] = 1.0
    w[k - 1] = 1.0 if sign is Sign.PLUS else -1.0
    return w


def _mode_weight(i):
    w = np.zeros(3)
    w[i - 1] = 1.0
    return w


def combo_variance(m, a):
    """Variance of a quadrature combination (means vanish identically)."""
    c = m.block(a.quad)
    return float(a.weights @ c @ a.weights)


def combo_covariance(m, a, b):
    """Covariance of two combinations of the same quadrature type.

    X and Y never mix under this dynamics, so cross-quadrature moments are
    identically zero and are not stored; requesting one is an error.
    """
    if a.quad is not b.quad:
        raise CombinationError(
            "cross-quadrature covariances are not stored (they vanish "
            "identically for this dynamics)"
        )
    c = m.block(a.quad)
    return float(a.weights @ c @ b.weights)


def _inferred_single(c, i, sign):
    j, k = _other_modes(i)
    wi = _mode_weight(i)
    wjk = _pair_weights(j, k, sign)
    own = float(wi @ c @ wi)
    denom = float(wjk @ c @ wjk)
    if denom < DENOMINATOR_FLOOR:
        return own
    num = float(wi @ c @ wjk)
    return max(0.0, own - num * num / denom)


def inferred_variance_single(m, quad, i, sign=Sign.PLUS):
    """Residual variance of quad_i after the optimal estimate from quad_j +/- quad_k.

    Vinf(X_i) = V(X_i) - V(X_i, X_j +/- X_k)^2 / V(X_j +/- X_k), with j < k
    the other two modes.  A combination variance below DENOMINATOR_FLOOR
    yields no information and leaves V(quad_i) unchanged.
    """
    _check_mode(i)
    return _inferred_single(m.block(quad), i, sign)


def obr_single(m, i, sign=Sign.PLUS):
    """Inference product Vinf(X_i) * Vinf(Y_i); EPR evidence when below 1."""
    _check_mode(i)
    return _inferred_single(m.cx, i, sign) * _inferred_single(m.cy, i, sign)


def _inferred_pair(c, j, k, sign):
    i = ({1, 2, 3} - {j, k}).pop()
    wi = _mode_weight(i)
    wjk = _pair_weights(j, k, sign)
    own = float(wjk @ c @ wjk)
    denom = float(wi @ c @ wi)
    if denom < DENOMINATOR_FLOOR:
        return own
    num = float(wi @ c @ wjk)
    return max(0.0, own - num * num / denom)


def inferred_variance_pair(m, quad, j, k, sign=Sign.PLUS):
    """Residual variance of quad_j +/- quad_k after the estimate from quad_i.

    Vinf(X_j +/- X_k) = V(X_j +/- X_k) - V(X_i, X_j +/- X_k)^2 / V(X_i)
    where i is the remaining mode.
    """
    _check_mode(j)
    _check_mode(k)
    if j == k:
        raise ValueError("pair modes must differ")
    return _inferred_pair(m.block(quad), j, k, sign)


def obr_pair(m, j, k, sign=Sign.PLUS):
    """Inference product for the combined mode j, k; EPR evidence when below 4."""
    _check_mode(j)
    _check_mode(k)
    if j == k:
        raise ValueError("pair modes must differ")
    return _inferred_pair(m.cx, j, k, sign) * _inferred_pair(m.cy, j, k, sign)


def vlf_gains(m):
    """Gains minimising each pairwise sum.

    g_i = -(sum of mode-i Y covariances with the other two modes) / <Y_i^2>;
    each enters the sum whose Y part excludes mode i's unit weight.
    """
    cy = m.cy
    g1 = -(cy[0, 1] + cy[0, 2]) / cy[0, 0] + 0.0
    g2 = -(cy[0, 1] + cy[1, 2]) / cy[1, 1] + 0.0
    g3 = -(cy[0, 2] + cy[1, 2]) / cy[2, 2] + 0.0
    gains = VlfGains(float(g1), float(g2), float(g3))
    if not all(math.isfinite(g) for g in gains):
        raise ValueError(f"gains are not finite: {gains}")
    return gains


def vlf_value(m, pair, gains=UNIT_GAINS):
    """Pairwise sum V(X_i - X_j) + V(Y_i + Y_j + g_k Y_k) for pair = (i, j).

    The gain applied is the one indexed by the mode absent from the pair.
    With the optimal gains this equals V(X_i - X_j) plus the inferred
    variance of Y_i + Y_j estimated from Y_k.
    """
    if tuple(pair) not in _VALID_PAIRS:
        raise ValueError(f"pair must be one of {_VALID_PAIRS}, got {pair!r}")
    i, j = pair
    k = ({1, 2, 3} - {i, j}).pop()
    wx = _mode_weight(i) - _mode_weight(j)
    wy = _mode_weight(i) + _mode_weight(j) + gains[k - 1] * _mode_weight(k)
    return float(wx @ m.cx @ wx) + float(wy @ m.cy @ wy)


def evaluate_all(m, t, sign=Sign.PLUS):
    """All criteria for one moment state, as a CriteriaReport.

    Raw pairwise sums use unit gains, optimised ones the gains from
    vlf_gains; the obr entries use the requested two-mode combination sign,
    which the report records.
    """
    gains = vlf_gains(m)
    raw = VlfTriple(*(vlf_value(m, p, UNIT_GAINS) for p in _VALID_PAIRS))
    opt = VlfTriple(*(vlf_value(m, p, gains) for p in _VALID_PAIRS))
    singles = ObrSingles(*(obr_single(m, i, sign) for i in (1, 2, 3)))
    pairs = ObrPairs(
        obr_pair(m, 2, 3, sign), obr_pair(m, 1, 3, sign), obr_pair(m, 1, 2, sign)
    )
    return CriteriaReport(
        t=float(t),
        sign=sign,
        vlf_raw=raw,
        vlf_opt=opt,
        gains=gains,
        obr_single=singles,
        obr_pair=pairs,
    )
