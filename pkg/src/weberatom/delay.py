"""Retarded Coulomb action on loops and its Taylor expansion in the delay.

For a 1-periodic radial loop r(t) > 0 the retarded action is

    S_pot(a) = integral_0^1 V(r(t - a r(t))) dt,     V(r) = -1/r,

where a = 1/c_W = alpha/sqrt(2) and c_W = sqrt(2) c is the transmission
constant of the interaction.  Its Taylor coefficients at a = 0 satisfy

    S^0 = integral of -1/r dt,
    S^1 = 0 identically (the integrand -V'(r) r' r is an exact derivative of
          a primitive of r V'(r), and the loop is periodic),
    S^2 = -integral of r'^2 / r dt         (Coulomb potential),

so the second-order truncation S^0 + a S^1 + a^2 S^2 equals the loop integral
of the velocity-dependent potential -(1/r)(1 + r'^2/(2 c^2)) -- exactly the
interaction term of the Weber Lagrangian restricted to radial motion.  The
remainder is O(a^3) whenever the loop's cubic coefficient is nonzero (it
vanishes by parity for time-even loops).

For a general radial potential the derivative formulas are

    d/da   V(r(t - a r(t))) = -V'(r(u)) r'(u) r(t),          u = t - a r(t),
    d^2/da^2 V(r(t - a r(t))) = V''(r(u)) r'(u)^2 r(t)^2
                                + V'(r(u)) r''(u) r(t)^2;

only the Coulomb specialization is implemented.

Loops are represented by uniform samples interpolated with a periodic cubic
spline; integrals use composite Gauss-Legendre with a fixed number of points
per spline segment, so the quadrature nodes are identical across delay values
and quadrature error cancels in finite differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import UnsupportedOrderError

__all__ = [
    "DelayParams",
    "LoopSamples",
    "eval_loop",
    "retarded_action",
    "taylor_coefficient_numeric",
    "taylor_coefficient_analytic",
    "neumann_integrand",
    "neumann_action",
    "truncation_error",
    "kinetic_action",
    "load_loop_csv",
    "random_loop_corpus",
    "truncation_check_loop",
]

DEFAULT_FD_STEP = 1e-3
QUAD_POINTS_PER_SEGMENT = 8
MIN_SAMPLES = 64


@dataclass(frozen=True)
class DelayParams:
    """Delay coefficient a = 1/c_W and the transmission constant c_W = sqrt(2) c."""

    a: float
    c_w: float

    def __post_init__(self):
        if self.a < 0:
            raise ValueError(f"delay coefficient a must be >= 0, got {self.a}")

    @classmethod
    def from_alpha(cls, alpha: float) -> "DelayParams":
        if alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {alpha}")
        a = alpha / math.sqrt(2.0)
        c_w = math.sqrt(2.0) / alpha if alpha > 0 else math.inf
        return cls(a=a, c_w=c_w)


class LoopSamples:
    """Uniform samples r(k/N), k = 0..N-1, of a smooth positive 1-periodic loop.

    N must be a power of two >= 64.  Evaluation anywhere uses a periodic cubic
    spline with analytically differentiated first and second derivatives.
    """

    def __init__(self, values):
        values = np.asarray(values, dtype=float)
        if values.ndim != 1:
            raise ValueError("values must be a 1-d sequence")
        n = len(values)
        if n < MIN_SAMPLES or n & (n - 1) != 0:
            raise ValueError(f"sample count must be a power of two >= {MIN_SAMPLES}, got {n}")
        if not np.all(values > 0):
            raise ValueError("loop values must all be positive")
        self.values = values.copy()
        self.values.flags.writeable = False

    @property
    def n(self) -> int:
        return len(self.values)

    @classmethod
    def from_function(cls, fn, n: int = 1024) -> "LoopSamples":
        t = np.arange(n) / n
        return cls(fn(t))

    @classmethod
    def constant(cls, value: float, n: int = 64) -> "LoopSamples":
        return cls(np.full(n, float(value)))

    @cached_property
    def _spline(self) -> CubicSpline:
        x = np.linspace(0.0, 1.0, self.n + 1)
        y = np.append(self.values, self.values[0])
        return CubicSpline(x, y, bc_type="periodic")

    @cached_property
    def _dspline(self):
        return self._spline.derivative(1)

    @cached_property
    def _ddspline(self):
        return self._spline.derivative(2)

    def radius(self, t):
        return self._spline(np.mod(t, 1.0))

    def eval(self, t):
        """(r, r', r'') at t (reduced mod 1); accepts scalars or arrays."""
        u = np.mod(t, 1.0)
        return self._spline(u), self._dspline(u), self._ddspline(u)


def eval_loop(loop: LoopSamples, t):
    """Loop value and first two derivatives at time t (reduced mod 1)."""
    return loop.eval(t)


@lru_cache(maxsize=64)
def _gl_nodes(n_segments: int, pts: int):
    """Composite Gauss-Legendre nodes/weights on [0, 1], pts per segment."""
    xg, wg = np.polynomial.legendre.leggauss(pts)
    edges = np.linspace(0.0, 1.0, n_segments + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])[:, None]
    half = 0.5 * (edges[1:] - edges[:-1])[:, None]
    nodes = (mid + half * xg[None, :]).ravel()
    weights = (half * wg[None, :]).ravel()
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


def _loop_quadrature(loop: LoopSamples, integrand, quad_points: int):
    nodes, weights = _gl_nodes(loop.n, quad_points)
    return float(np.dot(weights, integrand(nodes)))


def retarded_action(loop: LoopSamples, a: float,
                    quad_points: int = QUAD_POINTS_PER_SEGMENT) -> float:
    """S_pot(a) = integral of V(r(t - a r(t))) dt with V = -1/r.

    Negative a (advanced time) is accepted: the loop is 1-periodic, and the
    central difference stencils of taylor_coefficient_numeric need it.
    For a constant loop the value is independent of a.
    """
    spline = loop._spline

    def integrand(t):
        r_now = spline(t)  # quadrature nodes already lie in [0, 1)
        return -1.0 / spline(np.mod(t - a * r_now, 1.0))

    return _loop_quadrature(loop, integrand, quad_points)


def taylor_coefficient_numeric(loop: LoopSamples, k: int,
                               h: float = DEFAULT_FD_STEP) -> float:
    """k-th Taylor coefficient of a -> S_pot(a) at a = 0, k in {0, 1, 2, 3}.

    Fourth-order central finite-difference stencils in the delay, divided
    by k!.
    """
    if k not in (0, 1, 2, 3):
        raise ValueError(f"k must be in {{0, 1, 2, 3}}, got {k}")
    if not h > 0:
        raise ValueError(f"h must be positive, got {h}")
    f = lambda a: retarded_action(loop, a)
    if k == 0:
        return f(0.0)
    if k == 1:
        return (-f(2 * h) + 8 * f(h) - 8 * f(-h) + f(-2 * h)) / (12.0 * h)
    if k == 2:
        second = (-f(2 * h) + 16 * f(h) - 30 * f(0.0) + 16 * f(-h) - f(-2 * h)) / (
            12.0 * h * h
        )
        return second / 2.0
    third = (
        -13.0 / 8.0 * (f(h) - f(-h))
        + (f(2 * h) - f(-2 * h))
        - 1.0 / 8.0 * (f(3 * h) - f(-3 * h))
    ) / h**3
    return third / 6.0


def taylor_coefficient_analytic(loop: LoopSamples, k: int) -> float:
    """Closed-form Taylor coefficients: S^0, S^1 = 0, S^2 = -int r'^2/r dt.

    S^1 is returned as exact zero without computation (it is an integral of a
    total derivative over a period).  Orders k >= 3 raise
    UnsupportedOrderError.
    """
    if k == 0:
        return _loop_quadrature(
            loop, lambda t: -1.0 / loop._spline(t), QUAD_POINTS_PER_SEGMENT
        )
    if k == 1:
        return 0.0
    if k == 2:
        spline, dspline = loop._spline, loop._dspline
        return _loop_quadrature(
            loop, lambda t: -dspline(t) ** 2 / spline(t), QUAD_POINTS_PER_SEGMENT
        )
    raise UnsupportedOrderError(
        f"analytic Taylor coefficients are available for k <= 2, got k = {k}"
    )


def neumann_integrand(r, rp, alpha: float):
    """Velocity-dependent potential -(1/r)(1 + r'^2 alpha^2 / 2) at one point.

    Pointwise equal to the radial restriction of the Weber Lagrangian's
    interaction term (hamiltonian.neumann_potential).
    """
    return -(1.0 / r) * (1.0 + alpha * alpha * rp * rp / 2.0)


def neumann_action(loop: LoopSamples, alpha: float) -> float:
    """Loop integral of the velocity-dependent potential
    -(1/r)(1 + r'^2 alpha^2 / 2).

    Equals S^0 + (1/c_W) S^1 + (1/c_W^2) S^2 with c_W^2 = 2 c^2 = 2/alpha^2:
    the second-order truncation of the retarded action.
    """
    spline, dspline = loop._spline, loop._dspline
    return _loop_quadrature(
        loop,
        lambda t: neumann_integrand(spline(t), dspline(t), alpha),
        QUAD_POINTS_PER_SEGMENT,
    )


def truncation_error(loop: LoopSamples, alpha: float) -> float:
    """|S_pot(alpha/sqrt(2)) - neumann_action(loop, alpha)|.

    O(alpha^3) when the loop's cubic delay coefficient is nonzero; exactly 0
    for constant loops and at alpha = 0.
    """
    return abs(retarded_action(loop, alpha / math.sqrt(2.0)) - neumann_action(loop, alpha))


def kinetic_action(loop: LoopSamples) -> float:
    """Kinetic loop action (1/2) integral of r'^2 dt for a radial loop."""
    dspline = loop._dspline
    return _loop_quadrature(
        loop, lambda t: 0.5 * dspline(t) ** 2, QUAD_POINTS_PER_SEGMENT
    )


def load_loop_csv(path) -> LoopSamples:
    """Load a loop from a CSV file holding one column of radial samples."""
    values = np.loadtxt(path, delimiter=",", ndmin=1)
    if values.ndim != 1:
        raise ValueError(f"{path}: expected a single column of samples")
    return LoopSamples(values)


def random_loop_corpus(size: int, n_samples: int = 1024, seed: int = 42) -> list[LoopSamples]:
    """Randomized smooth positive loops: trigonometric polynomials of degree
    <= 5 with 1/m^2-decaying harmonic amplitudes, values within (1, 5)."""
    rng = np.random.default_rng(seed)
    t = np.arange(n_samples) / n_samples
    loops = []
    while len(loops) < size:
        values = np.full(n_samples, rng.uniform(2.4, 3.4))
        for m in range(1, 6):
            scale = 0.45 / (m * m)
            values += rng.normal(0.0, scale) * np.cos(2 * np.pi * m * t)
            values += rng.normal(0.0, scale) * np.sin(2 * np.pi * m * t)
        if values.min() > 1.0 and values.max() < 5.0:
            loops.append(LoopSamples(values))
    return loops


def truncation_check_loop(n_samples: int = 1024) -> LoopSamples:
    """Designated loop for the truncation-order study.

    Deliberately asymmetric in time (2 + 0.8 cos(2 pi t) + 0.2 sin(4 pi t))
    so the cubic delay coefficient dominates: for time-even loops it vanishes
    by parity and the truncation error degenerates to O(alpha^4).
    """
    return LoopSamples.from_function(
        lambda t: 2.0 + 0.8 * np.cos(2 * np.pi * t) + 0.2 * np.sin(4 * np.pi * t),
        n_samples,
    )
