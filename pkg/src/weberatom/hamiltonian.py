"""Physical models of the planar two-charge problem in atomic units.

Atomic units throughout: electron mass, elementary charge, reduced Planck
constant and Coulomb force constant are all 1; the speed of light is
c = 1/alpha with alpha the fine structure constant.

For an electron attracted by a proton at the origin, Weber's velocity-dependent
correction to the Coulomb interaction turns the kinetic energy into one for the
non-flat metric g_rr = 1 + alpha^2/r, g_phiphi = r^2 on the punctured plane.
The Hamiltonian in polar coordinates (r, phi) reads

    H(r, phi, p_r, p_phi) = (1/2) * r/(r + alpha^2) * p_r^2
                            + p_phi^2 / (2 r^2) - 1/r.

For two protons the interaction is repulsive (+1/r) and the metric flips to
g_rr = 1 - alpha^2/r, which degenerates at Weber's critical radius
rho = alpha^2: Riemannian outside, Minkowski inside.

Setting alpha = 0 (or selecting the Coulomb model) recovers the Kepler
problem exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ForbiddenRegionError, NoCriticalRadiusError, SingularMetricError

__all__ = [
    "Pair",
    "Model",
    "ModelParams",
    "PhaseState",
    "RadialCoefficients",
    "eval_hamiltonian",
    "metric_components",
    "critical_radius",
    "radial_momentum",
    "flow_field",
    "neumann_potential",
]

# Radicand values in [-RADICAND_TOL * scale, 0) clamp to zero: turning points
# are exact zeros hit inexactly in floating point.
RADICAND_TOL = 1e-12


class Pair(Enum):
    """Charge pair: attractive electron-proton or repulsive proton-proton."""

    ELECTRON_PROTON = "electron-proton"
    PROTON_PROTON = "proton-proton"


class Model(Enum):
    """Interaction model. Coulomb behaves identically to Weber at alpha = 0."""

    COULOMB = "coulomb"
    WEBER = "weber"


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters selecting the model.

    alpha: fine structure constant (alpha >= 0; alpha = 1/c in atomic units).
    pair:  which charges interact (sign of the potential and of the metric
           correction).
    model: Weber (velocity-dependent correction on) or Coulomb (flat metric).
    """

    alpha: float
    pair: Pair = Pair.ELECTRON_PROTON
    model: Model = Model.WEBER

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        if self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")

    @property
    def kinetic_alpha2(self) -> float:
        """alpha^2 entering the kinetic metric; zero for the Coulomb model."""
        if self.model is Model.COULOMB:
            return 0.0
        return self.alpha * self.alpha

    @property
    def sign(self) -> float:
        """+1 for electron-proton, -1 for proton-proton.

        With s = sign, g_rr = 1 + s*alpha^2/r and the potential is -s/r,
        so one formula covers both pairs.
        """
        return 1.0 if self.pair is Pair.ELECTRON_PROTON else -1.0


@dataclass(frozen=True)
class PhaseState:
    """Point (t, r, phi, p_r, p_phi) in extended phase space, atomic units.

    The angle phi is stored unwrapped (never reduced mod 2*pi) so that total
    winding, and with it the periproton shift, stays measurable.
    """

    t: float
    r: float
    phi: float
    p_r: float
    p_phi: float

    def __post_init__(self):
        for name in ("t", "r", "phi", "p_r", "p_phi"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not self.r > 0:
            raise ValueError(f"r must be positive, got {self.r}")


@dataclass(frozen=True)
class RadialCoefficients:
    """Coefficients (A, B, C, D1) of the squared radial momentum.

    p_r^2 = A + 2B/r + C/r^2 + D1/r^3 with

        A = 2E,  B = 1 + alpha^2 E,  C = -ell^2 + 2 alpha^2,
        D1 = -ell^2 alpha^2.

    For a bound electron-proton orbit A < 0, B > 0 and (for ell >= 1,
    alpha < 1/sqrt(2)) C < 0.
    """

    A: float
    B: float
    C: float
    D1: float

    @classmethod
    def from_orbit(cls, energy: float, ell: float, alpha: float) -> "RadialCoefficients":
        a2 = alpha * alpha
        return cls(
            A=2.0 * energy,
            B=1.0 + a2 * energy,
            C=-ell * ell + 2.0 * a2,
            D1=-ell * ell * a2,
        )

    def radicand(self, r):
        return self.A + 2.0 * self.B / r + self.C / r**2 + self.D1 / r**3

    def radicand_scale(self, r):
        """Magnitude scale of the radicand terms, for the clamping tolerance."""
        return abs(self.A) + 2.0 * abs(self.B) / r + abs(self.C) / r**2 + abs(self.D1) / r**3

    def cubic(self) -> tuple[float, float, float, float]:
        """Coefficients of r^3 * radicand = A r^3 + 2B r^2 + C r + D1."""
        return (self.A, 2.0 * self.B, self.C, self.D1)


def eval_hamiltonian(state: PhaseState, params: ModelParams) -> float:
    """Energy of a phase-space point.

    Electron-proton Weber:  (1/2) (r/(r+alpha^2)) p_r^2 + p_phi^2/(2r^2) - 1/r.
    Proton-proton Weber:    (1/2) (r/(r-alpha^2)) p_r^2 + p_phi^2/(2r^2) + 1/r.
    Coulomb: kinetic factor 1 (same as alpha = 0).

    Inside the proton-proton critical radius the kinetic factor is negative;
    the value is still returned (the Minkowski region is dynamically
    meaningful).  Exactly at r = alpha^2 the metric is singular and a
    SingularMetricError is raised.
    """
    s = params.sign
    a2 = params.kinetic_alpha2
    r = state.r
    denom = r + s * a2
    if denom == 0.0:
        raise SingularMetricError(
            f"proton-proton Hamiltonian undefined at the critical radius r = alpha^2 = {a2}"
        )
    kinetic = 0.5 * (r / denom) * state.p_r**2 + state.p_phi**2 / (2.0 * r * r)
    return kinetic - s / r


def metric_components(r: float, params: ModelParams) -> tuple[float, float]:
    """Kinetic-metric components (g_rr, g_phiphi) at radius r.

    Electron-proton: g_rr = 1 + alpha^2/r.  Proton-proton: g_rr = 1 - alpha^2/r,
    which may be negative (Minkowski region); classifying the signature is the
    caller's job.  g_phiphi = r^2 in both cases.
    """
    if not r > 0:
        raise ValueError(f"r must be positive, got {r}")
    g_rr = 1.0 + params.sign * params.kinetic_alpha2 / r
    return g_rr, r * r


def critical_radius(params: ModelParams) -> float:
    """Weber's critical radius rho = alpha^2 for the proton-proton pair.

    Raises NoCriticalRadiusError for the electron-proton pair (g_rr > 0
    everywhere) and for alpha = 0 (flat metric).
    """
    if params.pair is not Pair.PROTON_PROTON:
        raise NoCriticalRadiusError(
            "electron-proton metric g_rr = 1 + alpha^2/r is positive everywhere"
        )
    if params.kinetic_alpha2 == 0.0:
        raise NoCriticalRadiusError("no critical radius for alpha = 0 (flat metric)")
    return params.alpha * params.alpha


def radial_momentum(r: float, energy: float, ell: float, alpha: float) -> float:
    """Non-negative radial momentum sqrt(A + 2B/r + C/r^2 + D1/r^3).

    Radicand values in [-RADICAND_TOL*scale, 0) are clamped to zero
    (turning-point grace); more negative values raise ForbiddenRegionError.
    """
    coeffs = RadialCoefficients.from_orbit(energy, ell, alpha)
    radicand = coeffs.radicand(r)
    if radicand < 0.0:
        if radicand >= -RADICAND_TOL * coeffs.radicand_scale(r):
            return 0.0
        raise ForbiddenRegionError(
            f"radicand {radicand} negative at r = {r}: classically forbidden"
        )
    return math.sqrt(radicand)


def flow_field(state: PhaseState, params: ModelParams) -> np.ndarray:
    """Hamiltonian vector field (dr/dt, dphi/dt, dp_r/dt, dp_phi/dt).

    Electron-proton Weber:

        dr/dt    = r/(r + alpha^2) * p_r
        dphi/dt  = p_phi / r^2
        dp_r/dt  = -alpha^2 p_r^2 / (2 (r + alpha^2)^2) + p_phi^2/r^3 - 1/r^2
        dp_phi/dt = 0          (rotation invariance)

    Proton-proton replaces alpha^2 -> -alpha^2 in the kinetic factor and flips
    the potential sign.
    """
    s = params.sign
    a2 = params.kinetic_alpha2
    r, p_r, p_phi = state.r, state.p_r, state.p_phi
    denom = r + s * a2
    if denom == 0.0:
        raise SingularMetricError(
            f"flow undefined at the critical radius r = alpha^2 = {a2}"
        )
    dr = (r / denom) * p_r
    dphi = p_phi / (r * r)
    dp_r = -s * a2 * p_r * p_r / (2.0 * denom * denom) + p_phi * p_phi / r**3 - s / (r * r)
    return np.array([dr, dphi, dp_r, 0.0])


def neumann_potential(r: float, v_r: float, alpha: float):
    """Velocity-dependent radial potential -(1/r)(1 + v_r^2/(2 c^2)), c = 1/alpha.

    This is the interaction term of the Lagrangian restricted to radial motion;
    it coincides with the integrand of the second-order truncation of the
    retarded Coulomb action (see the delay module).
    """
    return -(1.0 / r) * (1.0 + alpha * alpha * v_r * v_r / 2.0)
