"""Shared data model: couplings, regimes, propagators, moments and criteria records.

Conventions used throughout the package:

* quadratures X = a + a^dag, Y = -i(a - a^dag), so a vacuum mode has
  V(X) = V(Y) = 1 and the uncertainty product saturates at 1;
* three modes, indexed 1..3 in all public interfaces;
* means vanish identically (vacuum inputs, linear dynamics), so every
  second moment is already a variance or covariance;
* X and Y blocks never mix, hence moments are stored as two symmetric
  3x3 blocks and no X-Y cross block exists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

__all__ = [
    "REGIME_TOL",
    "FLAG_MARGIN",
    "InvalidCouplingError",
    "RegimeError",
    "CombinationError",
    "RegimeKind",
    "Quadrature",
    "Sign",
    "TauConvention",
    "MomentMethod",
    "Couplings",
    "PumpConfig",
    "Regime",
    "PropagatorPair",
    "MomentState",
    "VlfTriple",
    "VlfGains",
    "ObrSingles",
    "ObrPairs",
    "CriteriaReport",
    "SweepMeta",
    "SweepResult",
    "classify_regime",
    "kappa_from_pump",
    "vacuum_moments",
    "validate_moment_state",
]

#: Relative tolerance on |kappa1^2 - kappa2^2| below which the dynamics is
#: treated as degenerate.  Near-degenerate couplings are routed to the
#: polynomial propagator because the non-degenerate closed forms divide by
#: rate^2 and rate^4.
REGIME_TOL = 1e-9

#: Margin below a criterion threshold before a violation counts as evidence.
#: Some products sit exactly on their threshold analytically, so rounding
#: noise of order 1e-14 must not flip an entanglement flag.
FLAG_MARGIN = 1e-10


class InvalidCouplingError(ValueError):
    """Couplings or pump parameters outside the valid domain."""


class RegimeError(ValueError):
    """Operation invoked for a coupling regime it does not support."""


class CombinationError(ValueError):
    """Quadrature combination that has no stored moments (X-Y cross terms)."""


class RegimeKind(Enum):
    HYPERBOLIC = "hyperbolic"
    PERIODIC = "periodic"
    DEGENERATE = "degenerate"


class Quadrature(Enum):
    X = "x"
    Y = "y"


class Sign(Enum):
    """Relative sign of the two-mode combination used in inference criteria."""

    PLUS = "plus"
    MINUS = "minus"


class TauConvention(Enum):
    """How the dimensionless sweep time tau maps to raw time t.

    RATE uses tau = rate * t where rate is Omega (hyperbolic) or xi
    (periodic); MAX_KAPPA uses tau = max(kappa1, kappa2) * t.  Degenerate
    couplings have rate 0, so RATE falls back to the MAX_KAPPA scale there.
    """

    RATE = "rate"
    MAX_KAPPA = "maxkappa"


class MomentMethod(Enum):
    ANALYTIC = "analytic"
    EXPM = "expm"


def _require_finite(name, value):
    if not math.isfinite(value):
        raise InvalidCouplingError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class Couplings:
    """Effective interaction strengths (inverse time units), both positive."""

    kappa1: float
    kappa2: float

    def __post_init__(self):
        for name, value in (("kappa1", self.kappa1), ("kappa2", self.kappa2)):
            _require_finite(name, value)
            if value <= 0:
                raise InvalidCouplingError(f"{name} must be positive, got {value!r}")

    @property
    def kappa_max(self):
        return max(self.kappa1, self.kappa2)


@dataclass(frozen=True)
class PumpConfig:
    """Nonlinear couplings chi1, chi2 and classical pump amplitudes."""

    chi1: float
    chi2: float
    pump4: float
    pump5: float

    def __post_init__(self):
        for name in ("chi1", "chi2", "pump4", "pump5"):
            _require_finite(name, getattr(self, name))


@dataclass(frozen=True)
class Regime:
    """Classified dynamical regime with its characteristic rate.

    rate is Omega = sqrt(kappa1^2 - kappa2^2) in the hyperbolic regime,
    xi = sqrt(kappa2^2 - kappa1^2) in the periodic one and 0 when degenerate.
    """

    kind: RegimeKind
    rate: float


def _frozen_matrix(value, name):
    arr = np.array(value, dtype=float)
    if arr.shape != (3, 3):
        raise ValueError(f"{name} must be a 3x3 matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PropagatorPair:
    """Linear maps taking initial X and Y quadrature vectors to time t.

    The X block mx and Y block my of any exact propagator satisfy
    mx @ my.T = identity (canonical commutators are preserved); numerical
    integrators only approach that identity at their accuracy level, so it
    is checked by the verification paths rather than enforced here.
    """

    mx: np.ndarray
    my: np.ndarray
    t: float

    def __post_init__(self):
        object.__setattr__(self, "mx", _frozen_matrix(self.mx, "mx"))
        object.__setattr__(self, "my", _frozen_matrix(self.my, "my"))
        if not (math.isfinite(self.t) and self.t >= 0):
            raise ValueError(f"t must be finite and >= 0, got {self.t!r}")

    def symplectic_defect(self):
        """Max-abs deviation of mx @ my.T from the identity."""
        return float(np.max(np.abs(self.mx @ self.my.T - np.eye(3))))


@dataclass(frozen=True)
class MomentState:
    """Symmetric second-moment blocks cx[i][j] = <X_i X_j>, cy[i][j] = <Y_i Y_j>."""

    cx: np.ndarray
    cy: np.ndarray

    def __post_init__(self):
        cx = _frozen_matrix(self.cx, "cx")
        cy = _frozen_matrix(self.cy, "cy")
        for name, arr in (("cx", cx), ("cy", cy)):
            if np.max(np.abs(arr - arr.T)) > 1e-14:
                raise ValueError(f"{name} is not symmetric")
        object.__setattr__(self, "cx", cx)
        object.__setattr__(self, "cy", cy)

    def block(self, quad):
        return self.cx if quad is Quadrature.X else self.cy


class VlfTriple(NamedTuple):
    """Values of the three pairwise sum criteria (threshold 4 each)."""

    v12: float
    v13: float
    v23: float


class VlfGains(NamedTuple):
    """Gains weighting the third mode in each pairwise sum criterion."""

    g1: float
    g2: float
    g3: float


class ObrSingles(NamedTuple):
    """Single-mode inference products obr_i (EPR evidence when < 1)."""

    obr1: float
    obr2: float
    obr3: float


class ObrPairs(NamedTuple):
    """Combined-mode inference products obr_jk (EPR evidence when < 4)."""

    obr23: float
    obr13: float
    obr12: float


@dataclass(frozen=True)
class CriteriaReport:
    """Every criterion value at one instant.

    vlf_raw uses unit gains, vlf_opt the variance-minimising gains; the obr
    entries are the inference products for single modes (threshold 1) and
    mode pairs (threshold 4).  sign records which two-mode combination
    (j + k or j - k) the inference used.  The flags require violations
    beyond FLAG_MARGIN so that products sitting exactly on a threshold
    never certify entanglement through rounding noise.
    """

    t: float
    sign: Sign
    vlf_raw: VlfTriple
    vlf_opt: VlfTriple
    gains: VlfGains
    obr_single: ObrSingles
    obr_pair: ObrPairs

    @property
    def vlf_flag(self):
        """Tripartite entanglement: at least two optimised sums below 4."""
        return sum(v < 4.0 - FLAG_MARGIN for v in self.vlf_opt) >= 2

    @property
    def obr_single_flag(self):
        """Tripartite entanglement: all three single-mode products below 1."""
        return all(v < 1.0 - FLAG_MARGIN for v in self.obr_single)

    @property
    def obr_pair_flag(self):
        """Tripartite entanglement: all three pair products below 4."""
        return all(v < 4.0 - FLAG_MARGIN for v in self.obr_pair)


@dataclass(frozen=True)
class SweepMeta:
    kappa1: float
    kappa2: float
    tau_convention: TauConvention


@dataclass(frozen=True)
class SweepResult:
    """Criteria reports on a strictly increasing dimensionless time grid."""

    taus: np.ndarray
    reports: tuple
    meta: SweepMeta

    def __post_init__(self):
        taus = np.array(self.taus, dtype=float)
        if taus.ndim != 1 or len(taus) != len(self.reports):
            raise ValueError("taus and reports must have matching lengths")
        if np.any(np.diff(taus) <= 0):
            raise ValueError("taus must be strictly increasing")
        taus.setflags(write=False)
        object.__setattr__(self, "taus", taus)
        object.__setattr__(self, "reports", tuple(self.reports))


def classify_regime(c, tol=REGIME_TOL):
    """Classify couplings as hyperbolic, periodic or degenerate.

    Degenerate means |kappa1^2 - kappa2^2| <= tol * max(kappa1^2, kappa2^2);
    the returned rate is 0 there and sqrt(|kappa1^2 - kappa2^2|) otherwise.
    """
    if not (math.isfinite(tol) and tol >= 0):
        raise ValueError(f"tol must be finite and >= 0, got {tol!r}")
    gap = c.kappa1 * c.kappa1 - c.kappa2 * c.kappa2
    scale = max(c.kappa1 * c.kappa1, c.kappa2 * c.kappa2)
    if abs(gap) <= tol * scale:
        return Regime(RegimeKind.DEGENERATE, 0.0)
    if gap > 0:
        return Regime(RegimeKind.HYPERBOLIC, math.sqrt(gap))
    return Regime(RegimeKind.PERIODIC, math.sqrt(-gap))


def kappa_from_pump(p):
    """Effective couplings kappa_i from nonlinearities and classical pumps.

    kappa1 = chi1 * pump4 and kappa2 = chi2 * pump5; both products must be
    strictly positive.
    """
    kappa1 = p.chi1 * p.pump4
    kappa2 = p.chi2 * p.pump5
    if kappa1 <= 0 or kappa2 <= 0:
        raise InvalidCouplingError(
            "chi1*pump4 and chi2*pump5 must both be positive, got "
            f"{kappa1!r} and {kappa2!r}"
        )
    return Couplings(kappa1, kappa2)


def vacuum_moments():
    """Initial vacuum state: identity moment blocks."""
    return MomentState(np.eye(3), np.eye(3))


def validate_moment_state(m, *, floor_tol=1e-12, parity_tol=1e-10, psd_tol=1e-10):
    """Check the physical invariants an exactly propagated state must satisfy.

    Raises ValueError when a diagonal drops below the vacuum floor, the X
    and Y variances disagree, or a block has an eigenvalue below -psd_tol.
    Statistical estimates (finite Monte Carlo samples) fluctuate around
    these properties and should not be passed through this check.
    """
    for name, arr in (("cx", m.cx), ("cy", m.cy)):
        if np.min(np.diag(arr)) < 1.0 - floor_tol:
            raise ValueError(f"{name} diagonal below the vacuum floor: {np.diag(arr)}")
        if np.min(np.linalg.eigvalsh(arr)) < -psd_tol:
            raise ValueError(f"{name} is not positive semidefinite")
    if np.max(np.abs(np.diag(m.cx) - np.diag(m.cy))) > parity_tol:
        raise ValueError("cx and cy diagonals disagree")
