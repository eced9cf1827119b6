"""Exception types raised by the weberatom package."""


class WeberError(Exception):
    """Base class for all weberatom errors."""


class SingularMetricError(WeberError):
    """Proton-proton kinetic metric degenerates (g_rr = 0) at the requested radius."""


class NoCriticalRadiusError(WeberError):
    """The model has no critical radius (electron-proton pair, or alpha = 0)."""


class ForbiddenRegionError(WeberError):
    """Radial-momentum radicand is negative beyond the turning-point tolerance."""


class NoTorusError(WeberError):
    """No bound radial annulus exists for the requested (energy, ell, alpha)."""


class DegenerateTorusError(WeberError):
    """The radial annulus collapses to a circular orbit.

    Attributes:
        circular_radius: radius of the degenerate (circular) orbit.
    """

    def __init__(self, message, circular_radius):
        super().__init__(message)
        self.circular_radius = circular_radius


class QuadratureError(WeberError):
    """Adaptive quadrature failed to converge within the refinement budget."""

    def __init__(self, message, best_estimate, est_error):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.est_error = est_error


class UnboundOrbitError(WeberError):
    """Energy is non-negative: the orbit is not bound."""


class FallToCenterError(WeberError):
    """Angular momentum too small (ell^2 <= 2 alpha^2): no centrifugal barrier."""


class SpectralSolverError(WeberError):
    """Quantization-condition root solve failed to bracket or converge."""


class CollisionError(WeberError):
    """Trajectory reached the collision floor r_floor.

    Attributes:
        time: integration time at which the collision was detected.
    """

    def __init__(self, message, time):
        super().__init__(message)
        self.time = time


class SignatureCrossingError(WeberError):
    """Proton-proton trajectory crossed the critical radius r = alpha^2.

    Attributes:
        time: integration time of the crossing.
        trace: partial OrbitTrace up to the crossing (may be None).
    """

    def __init__(self, message, time, trace=None):
        super().__init__(message)
        self.time = time
        self.trace = trace


class NewtonError(WeberError):
    """Implicit-stage Newton iteration failed to converge."""


class StepSizeError(WeberError):
    """Integration step too large (|delta phi| >= pi in one step)."""


class InsufficientDataError(WeberError):
    """Not enough apsis events in the trace for the requested measurement."""


class UnsupportedOrderError(WeberError):
    """Analytic Taylor coefficients of the retarded action stop at second order."""


class ZeroFrequencyError(WeberError):
    """Transition frequency requested between two identical energies."""
