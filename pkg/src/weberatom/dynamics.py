"""Orbit integration, apsis detection and periproton-shift measurement.

Bound non-circular orbits of the rotation-invariant models are rosettes: the
radius oscillates between periproton and apoproton while the angle advances.
Whether a rosette closes is decided by the periproton shift: a rational
multiple of 2 pi gives a periodic orbit (rational torus flow), an irrational
one a quasiperiodic rosette that fills the invariant torus.

Integration uses fixed-step implicit Gauss collocation (implicit midpoint or
2-stage Gauss-Legendre), which is symplectic for the non-separable Weber
kinetic term; long-time energy behavior is the primary validation target.
Angular momentum is conserved exactly by construction (the flow's p_phi
component is identically zero).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import _integrator as _ker
from .errors import (
    CollisionError,
    InsufficientDataError,
    NewtonError,
    SignatureCrossingError,
    SingularMetricError,
    StepSizeError,
)
from .hamiltonian import Model, ModelParams, Pair, PhaseState

__all__ = [
    "Scheme",
    "IntegratorConfig",
    "ApsisKind",
    "Apsis",
    "OrbitTrace",
    "ShiftMeasurement",
    "Closure",
    "PPProbeReport",
    "integrate",
    "detect_apsides",
    "measure_periproton_shift",
    "rosette_closure",
    "pp_probe",
]

# Sign changes of p_r below this magnitude are integrator round-off jitter
# (e.g. along a circular orbit), not apsides.
APSIS_P_TOL = 1e-12


class Scheme(Enum):
    IMPLICIT_MIDPOINT = "implicit-midpoint"
    GAUSS_LEGENDRE4 = "gauss-legendre4"


_TABLEAUS = {
    Scheme.IMPLICIT_MIDPOINT: (_ker.MIDPOINT_A, _ker.MIDPOINT_B, _ker.MIDPOINT_C),
    Scheme.GAUSS_LEGENDRE4: (_ker.GL4_A, _ker.GL4_B, _ker.GL4_C),
}


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step integrator settings.

    store_stride keeps every k-th state in the trace (drift monitors still see
    every step); the default 1 stores everything.
    """

    step: float = 1e-3
    scheme: Scheme = Scheme.GAUSS_LEGENDRE4
    newton_tol: float = 1e-12
    max_newton_iters: int = 25
    store_stride: int = 1
    r_floor: float = 1e-6

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError(f"step must be positive, got {self.step}")
        if not self.newton_tol > 0:
            raise ValueError(f"newton_tol must be positive, got {self.newton_tol}")
        if self.max_newton_iters < 1:
            raise ValueError("max_newton_iters must be >= 1")
        if self.store_stride < 1:
            raise ValueError("store_stride must be >= 1")


class ApsisKind(Enum):
    PERIPROTON = "periproton"
    APOPROTON = "apoproton"


@dataclass(frozen=True)
class Apsis:
    """A refined radial extremum event along a trace."""

    t: float
    r: float
    phi: float
    kind: ApsisKind


@dataclass
class OrbitTrace:
    """Time-ordered orbit samples plus conservation diagnostics.

    energy_drift and p_phi_drift are maxima of |H(t) - H(0)| and
    |p_phi(t) - p_phi(0)| over every integration step (not just stored ones).
    """

    t: np.ndarray
    r: np.ndarray
    phi: np.ndarray
    p_r: np.ndarray
    p_phi: np.ndarray
    energy_drift: float
    p_phi_drift: float
    params: ModelParams
    config: IntegratorConfig
    apsides: list[Apsis] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.t)

    def state(self, i: int) -> PhaseState:
        return PhaseState(
            t=float(self.t[i]), r=float(self.r[i]), phi=float(self.phi[i]),
            p_r=float(self.p_r[i]), p_phi=float(self.p_phi[i]),
        )

    def final_state(self) -> PhaseState:
        return self.state(len(self) - 1)

    def energies(self) -> np.ndarray:
        """Hamiltonian evaluated at the stored states."""
        s = self.params.sign
        a2 = self.params.kinetic_alpha2
        return (
            0.5 * (self.r / (self.r + s * a2)) * self.p_r**2
            + self.p_phi**2 / (2.0 * self.r**2)
            - s / self.r
        )


def _run_kernel(initial: PhaseState, params: ModelParams, duration: float,
                config: IntegratorConfig):
    a2 = params.kinetic_alpha2
    s = params.sign
    rho = params.alpha * params.alpha
    check_crossing = params.pair is Pair.PROTON_PROTON and a2 > 0.0
    if check_crossing and abs(initial.r - rho) <= 1e-12 * rho:
        raise SingularMetricError(
            f"initial radius {initial.r} is at the critical radius rho = {rho}"
        )
    n_steps = max(1, int(round(abs(duration) / config.step)))
    h = duration / n_steps
    y0 = np.array([initial.r, initial.phi, initial.p_r, initial.p_phi], dtype=np.float64)
    tab_a, tab_b, tab_c = _TABLEAUS[config.scheme]
    ts, ys, max_de, max_dpphi, status, t_fail = _ker._integrate(
        y0, a2, s, h, n_steps, tab_a, tab_b, tab_c,
        config.newton_tol, config.max_newton_iters,
        config.store_stride, config.r_floor, rho, check_crossing,
    )
    return ts, ys, max_de, max_dpphi, status, t_fail


def _build_trace(initial, params, config, ts, ys, max_de, max_dpphi) -> OrbitTrace:
    trace = OrbitTrace(
        t=initial.t + ts,
        r=ys[:, 0].copy(),
        phi=ys[:, 1].copy(),
        p_r=ys[:, 2].copy(),
        p_phi=ys[:, 3].copy(),
        energy_drift=float(max_de),
        p_phi_drift=float(max_dpphi),
        params=params,
        config=config,
    )
    if len(trace) >= 3:
        trace.apsides = detect_apsides(trace)
    return trace


def integrate(initial: PhaseState, params: ModelParams, duration: float,
              config: IntegratorConfig = IntegratorConfig()) -> OrbitTrace:
    """Integrate the flow for the given (signed) duration.

    Raises NewtonError on stage-solve failure, CollisionError when r falls
    below config.r_floor, StepSizeError when a step advances phi by pi or
    more, and SignatureCrossingError (with the partial trace attached) when a
    proton-proton trajectory crosses the critical radius.
    """
    if duration == 0.0:
        raise ValueError("duration must be nonzero")
    ts, ys, max_de, max_dpphi, status, t_fail = _run_kernel(
        initial, params, duration, config
    )
    if status == _ker.STATUS_NEWTON_FAIL:
        raise NewtonError(f"implicit stage Newton iteration failed at t = {initial.t + t_fail}")
    if status == _ker.STATUS_COLLISION:
        raise CollisionError(
            f"collision: r <= {config.r_floor} at t = {initial.t + t_fail}",
            time=initial.t + t_fail,
        )
    if status == _ker.STATUS_STEP_TOO_LARGE:
        raise StepSizeError(
            f"|delta phi| >= pi in one step at t = {initial.t + t_fail}; reduce config.step"
        )
    trace = _build_trace(initial, params, config, ts, ys, max_de, max_dpphi)
    if status == _ker.STATUS_CROSSING:
        raise SignatureCrossingError(
            f"trajectory crossed the critical radius at t = {initial.t + t_fail}",
            time=initial.t + t_fail,
            trace=trace,
        )
    return trace


def _refine_event(t, values, i, t_root):
    """Cubic interpolation of values(t) on a 4-point stencil around sample i,
    evaluated at t_root."""
    n = len(t)
    j0 = min(max(i - 1, 0), n - 4)
    sl = slice(j0, j0 + 4)
    coeff = np.polyfit(t[sl] - t[i], values[sl], 3)
    return float(np.polyval(coeff, t_root - t[i]))


def _root_in_bracket(t, p_r, i):
    """Zero of the local cubic interpolant of p_r(t) inside [t_i, t_{i+1}]."""
    n = len(t)
    j0 = min(max(i - 1, 0), n - 4)
    sl = slice(j0, j0 + 4)
    coeff = np.polyfit(t[sl] - t[i], p_r[sl], 3)
    lo, hi = 0.0, t[i + 1] - t[i]
    candidates = [
        float(z.real)
        for z in np.roots(coeff)
        if abs(z.imag) < 1e-12 and lo - 1e-12 <= z.real <= hi + 1e-12
    ]
    if candidates:
        # linear-interpolation guess selects among multiple cubic roots
        guess = -p_r[i] * (t[i + 1] - t[i]) / (p_r[i + 1] - p_r[i])
        tau = min(candidates, key=lambda z: abs(z - guess))
    else:
        tau = -p_r[i] * (t[i + 1] - t[i]) / (p_r[i + 1] - p_r[i])
    return t[i] + min(max(tau, lo), hi)


def detect_apsides(trace: OrbitTrace) -> list[Apsis]:
    """Sign changes of p_r along the trace, refined by local cubic interpolation.

    Periproton: p_r crosses - to + (radius at a minimum); apoproton: + to -.
    Exact zeros (e.g. a trace started at an apsis) are kept as events;
    round-off jitter below APSIS_P_TOL is ignored, so a circular orbit yields
    an empty list.
    """
    if len(trace) < 3:
        raise ValueError("apsis detection needs at least 3 trace states")
    t, r, phi, p_r = trace.t, trace.r, trace.phi, trace.p_r
    events: list[Apsis] = []

    significant = np.abs(p_r) > APSIS_P_TOL
    for i in np.nonzero(p_r == 0.0)[0]:
        after = np.nonzero(significant[i + 1:])[0]
        if len(after) == 0:
            continue
        kind = ApsisKind.PERIPROTON if p_r[i + 1 + after[0]] > 0 else ApsisKind.APOPROTON
        events.append(Apsis(float(t[i]), float(r[i]), float(phi[i]), kind))

    crossing = (p_r[:-1] * p_r[1:] < 0.0) & (significant[:-1] | significant[1:])
    for i in np.nonzero(crossing)[0]:
        t_root = _root_in_bracket(t, p_r, i)
        events.append(
            Apsis(
                t=float(t_root),
                r=_refine_event(t, r, i, t_root),
                phi=_refine_event(t, phi, i, t_root),
                kind=ApsisKind.PERIPROTON if p_r[i] < 0 else ApsisKind.APOPROTON,
            )
        )
    events.sort(key=lambda a: a.t)
    return events


@dataclass(frozen=True)
class ShiftMeasurement:
    """Mean periproton shift per radial period and its sample scatter."""

    shift: float
    std: float
    n_periprotons: int


def measure_periproton_shift(trace: OrbitTrace) -> ShiftMeasurement:
    """Mean of phi(periproton_{k+1}) - phi(periproton_k) - 2 pi over the trace.

    Uses the unwrapped angle, so multi-turn advances are counted correctly.
    Raises InsufficientDataError with fewer than two periproton events.
    """
    peri = [a for a in trace.apsides if a.kind is ApsisKind.PERIPROTON]
    if len(peri) < 2:
        raise InsufficientDataError(
            f"need >= 2 periproton events, found {len(peri)}"
        )
    gaps = np.diff([a.phi for a in peri]) - 2.0 * math.pi
    std = float(np.std(gaps, ddof=1)) if len(gaps) > 1 else 0.0
    return ShiftMeasurement(shift=float(np.mean(gaps)), std=std, n_periprotons=len(peri))


@dataclass(frozen=True)
class Closure:
    """Rational (periodic, shift = 2 pi p/q) or quasiperiodic classification."""

    periodic: bool
    p: int | None = None
    q: int | None = None

    def label(self) -> str:
        return f"periodic {self.p}:{self.q}" if self.periodic else "quasiperiodic"


def rosette_closure(shift: float, tol: float = 1e-9, max_q: int = 64) -> Closure:
    """Classify a periproton shift by continued-fraction approximation.

    Periodic(p:q) if some convergent p/q of shift/(2 pi) with q <= max_q lies
    within tol; quasiperiodic otherwise.
    """
    if not math.isfinite(shift):
        raise ValueError(f"shift must be finite, got {shift}")
    x = shift / (2.0 * math.pi)
    p_nm1, q_nm1 = 1, 0
    p_nm2, q_nm2 = 0, 1
    val = x
    for _ in range(64):
        a = math.floor(val)
        p = a * p_nm1 + p_nm2
        q = a * q_nm1 + q_nm2
        if q > max_q:
            break
        if q > 0 and abs(x - p / q) <= tol:
            return Closure(periodic=True, p=p, q=q)
        frac = val - a
        if frac <= 1e-17:
            break
        val = 1.0 / frac
        p_nm2, q_nm2 = p_nm1, q_nm1
        p_nm1, q_nm1 = p, q
    return Closure(periodic=False)


@dataclass
class PPProbeReport:
    """Proton-proton probe: trace plus a force-sign report near the start.

    r_ddot is a two-step finite-difference estimate of the initial radial
    acceleration; repulsive means r_ddot > 0 (separation grows).  A crossing
    of the critical radius is reported, not fatal.
    """

    trace: OrbitTrace
    critical_radius: float | None
    signature: str
    r_ddot: float
    repulsive: bool
    crossed: bool
    crossing_time: float | None


def pp_probe(initial: PhaseState, alpha: float, duration: float,
             config: IntegratorConfig = IntegratorConfig()) -> PPProbeReport:
    """Integrate the proton-proton flow and report the sign of the initial
    radial acceleration and the metric signature at the start radius."""
    params = ModelParams(alpha=alpha, pair=Pair.PROTON_PROTON, model=Model.WEBER)
    rho = alpha * alpha if alpha > 0 else None
    if rho is not None and abs(initial.r - rho) <= 1e-12 * rho:
        raise SingularMetricError(
            f"initial radius {initial.r} is at the critical radius rho = {rho}"
        )
    crossed = False
    crossing_time = None
    try:
        trace = integrate(initial, params, duration, config)
    except SignatureCrossingError as err:
        trace = err.trace
        crossed = True
        crossing_time = err.time
    if len(trace) < 3:
        raise InsufficientDataError(
            "probe trace too short for a finite-difference acceleration estimate"
        )
    dt0 = trace.t[1] - trace.t[0]
    dt1 = trace.t[2] - trace.t[1]
    r_ddot = float(
        2.0 * (dt0 * trace.r[2] - (dt0 + dt1) * trace.r[1] + dt1 * trace.r[0])
        / (dt0 * dt1 * (dt0 + dt1))
    )
    signature = "riemannian" if rho is None or initial.r > rho else "minkowski"
    return PPProbeReport(
        trace=trace,
        critical_radius=rho,
        signature=signature,
        r_ddot=r_ddot,
        repulsive=r_ddot > 0.0,
        crossed=crossed,
        crossing_time=crossing_time,
    )
