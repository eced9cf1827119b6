"""Bohr-Sommerfeld energy levels of the Weber hydrogen atom.

A torus is quantized when the angular momentum p_phi = ell is a positive
integer and the radial action n_r is a non-negative integer.  The exact level
E(n_r, ell, alpha) solves the quantization condition

    radial_action_closed_form(E, ell, alpha) = n_r

by bracketed root finding.  Closed second-order formulas are provided for
comparison:

    Weber:      E = -1/(2n^2) - alpha^2/(2 n^3 ell) + alpha^2/(2 n^4)
    Sommerfeld: E = -1/(2n^2) - alpha^2/(2 n^3 ell) + 3 alpha^2/(8 n^4)
    Coulomb:    E = -1/(2n^2)

with n = n_r + ell the main quantum number.  The Weber and Sommerfeld levels
differ only in the n^-4 term; their split alpha^2/(8 n^4) is independent of
ell.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

from scipy.optimize import brentq

from .actions import radial_action_closed_form
from .errors import FallToCenterError, SpectralSolverError, WeberError, ZeroFrequencyError

__all__ = [
    "QuantumNumbers",
    "LevelMethod",
    "EnergyLevel",
    "SpectrumRow",
    "level_second_order_weber",
    "level_sommerfeld",
    "level_coulomb",
    "level_exact",
    "transition_frequency",
    "spectrum_table",
    "weber_sommerfeld_split",
]

DEFAULT_TOL = 1e-12
MAX_BRACKET_WIDENINGS = 8
N_MAX_LIMIT = 20


@dataclass(frozen=True)
class QuantumNumbers:
    """Quantum numbers (n_r, ell) labeling a quantized torus; n = n_r + ell."""

    n_r: int
    ell: int

    def __post_init__(self):
        if self.n_r < 0:
            raise ValueError(f"n_r must be >= 0, got {self.n_r}")
        if self.ell < 1:
            raise ValueError(f"ell must be >= 1, got {self.ell}")

    @property
    def n(self) -> int:
        return self.n_r + self.ell

    @classmethod
    def from_n_ell(cls, n: int, ell: int) -> "QuantumNumbers":
        if not 1 <= ell <= n:
            raise ValueError(f"need 1 <= ell <= n, got n={n}, ell={ell}")
        return cls(n_r=n - ell, ell=ell)


class LevelMethod(Enum):
    EXACT_ROOT_SOLVE = "exact-root-solve"
    SECOND_ORDER_WEBER = "second-order-weber"
    SOMMERFELD_SECOND_ORDER = "sommerfeld-second-order"
    COULOMB = "coulomb"


@dataclass(frozen=True)
class EnergyLevel:
    """A bound energy level.  residual is the final quantization-condition
    mismatch for the exact root solve and 0 for the closed formulas."""

    qn: QuantumNumbers
    energy: float
    method: LevelMethod
    residual: float = 0.0


def level_second_order_weber(qn: QuantumNumbers, alpha: float) -> EnergyLevel:
    """Second-order Weber level -1/(2n^2) - alpha^2/(2 n^3 ell) + alpha^2/(2 n^4)."""
    n = qn.n
    a2 = alpha * alpha
    energy = -1.0 / (2.0 * n * n) - a2 / (2.0 * n**3 * qn.ell) + a2 / (2.0 * n**4)
    return EnergyLevel(qn, energy, LevelMethod.SECOND_ORDER_WEBER)


def level_sommerfeld(qn: QuantumNumbers, alpha: float) -> EnergyLevel:
    """Second-order relativistic level -1/(2n^2) - alpha^2/(2 n^3 ell) + 3 alpha^2/(8 n^4)."""
    n = qn.n
    a2 = alpha * alpha
    energy = -1.0 / (2.0 * n * n) - a2 / (2.0 * n**3 * qn.ell) + 3.0 * a2 / (8.0 * n**4)
    return EnergyLevel(qn, energy, LevelMethod.SOMMERFELD_SECOND_ORDER)


def weber_sommerfeld_split(n: int, alpha: float) -> float:
    """Analytic Weber - Sommerfeld level difference (1/2 - 3/8) alpha^2 / n^4.

    The two formulas share their first two terms verbatim, so the split is
    computed at the term level rather than by subtracting nearly equal
    energies (which would lose ~6 digits to cancellation).
    """
    return 0.125 * alpha * alpha / n**4


def level_coulomb(n: int, ell: int | None = None) -> EnergyLevel:
    """Coulomb level -1/(2n^2); independent of ell (super-integrability).

    ell only labels the returned quantum numbers (default: the circular torus
    ell = n).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    qn = QuantumNumbers.from_n_ell(n, n if ell is None else ell)
    return EnergyLevel(qn, -1.0 / (2.0 * n * n), LevelMethod.COULOMB)


def level_exact(qn: QuantumNumbers, alpha: float, tol: float = DEFAULT_TOL) -> EnergyLevel:
    """Solve the quantization condition n_r(E) = n_r for the exact level.

    The bracket is seeded from the second-order formula with half-width
    10 alpha^2 max(1, 1/n^3) (floored at 4 ulp-scale so the alpha = 0 case,
    where that expression degenerates to zero, still brackets) and widened
    geometrically on failure.  The returned residual is the final mismatch of
    the closed-form action, |residual| < tol.
    """
    if qn.ell * qn.ell <= 2.0 * alpha * alpha:
        raise FallToCenterError(
            f"ell^2 = {qn.ell**2} <= 2 alpha^2 = {2 * alpha**2}"
        )
    n, ell, n_r = qn.n, qn.ell, qn.n_r

    def mismatch(energy: float) -> float:
        return radial_action_closed_form(energy, ell, alpha).value - n_r

    seed = level_second_order_weber(qn, alpha).energy
    f_seed = mismatch(seed)
    if abs(f_seed) < tol:
        return EnergyLevel(qn, seed, LevelMethod.EXACT_ROOT_SOLVE, residual=f_seed)

    half_width = max(10.0 * alpha * alpha * max(1.0, 1.0 / n**3), 1e-12 * abs(seed))
    lo = hi = None
    for _ in range(MAX_BRACKET_WIDENINGS + 1):
        lo_try = seed - half_width
        hi_try = min(seed + half_width, -1e-300)
        f_lo = mismatch(lo_try)
        f_hi = mismatch(hi_try)
        if f_lo == 0.0:
            return EnergyLevel(qn, lo_try, LevelMethod.EXACT_ROOT_SOLVE, residual=0.0)
        if f_hi == 0.0:
            return EnergyLevel(qn, hi_try, LevelMethod.EXACT_ROOT_SOLVE, residual=0.0)
        if f_lo * f_hi < 0.0:
            lo, hi = lo_try, hi_try
            break
        half_width *= 4.0
    if lo is None:
        raise SpectralSolverError(
            f"could not bracket the quantization condition for n={n}, ell={ell}, "
            f"alpha={alpha}: seed E={seed}, last half-width {half_width}, "
            f"mismatch at seed {f_seed}"
        )
    energy = brentq(mismatch, lo, hi, xtol=1e-17, rtol=8.9e-16, maxiter=200)
    residual = mismatch(energy)
    a2 = alpha * alpha
    c2 = ell * ell - 2.0 * a2
    for _ in range(3):
        if abs(residual) <= tol:
            break
        # Newton polish on the smooth monotone action-energy relation
        slope = (
            a2 / math.sqrt(-2.0 * energy)
            + (1.0 + a2 * energy) * (-2.0 * energy) ** -1.5
            - ell * ell * a2 * a2 / (2.0 * c2**1.5)
        )
        energy -= residual / slope
        residual = mismatch(energy)
    if abs(residual) > tol:
        raise SpectralSolverError(
            f"root solve left residual {residual} > tol {tol} for n={n}, ell={ell}"
        )
    return EnergyLevel(qn, energy, LevelMethod.EXACT_ROOT_SOLVE, residual=residual)


def transition_frequency(a: EnergyLevel, b: EnergyLevel) -> float:
    """Emission frequency (E_high - E_low)/(2 pi) between two levels."""
    if a.energy == b.energy:
        raise ZeroFrequencyError("transition between identical energies")
    return abs(a.energy - b.energy) / (2.0 * math.pi)


@dataclass(frozen=True)
class SpectrumRow:
    """One (n, ell) row of the level comparison table (energies in atomic units)."""

    n: int
    ell: int
    n_r: int
    e_coulomb: float
    e_weber_2nd: float
    e_sommerfeld_2nd: float
    e_exact: float  # nan if the exact solve failed
    residual: float  # nan if the exact solve failed
    weber_minus_sommerfeld: float
    error: str | None = None


def _make_row(n: int, ell: int, alpha: float, tol: float) -> SpectrumRow:
    qn = QuantumNumbers.from_n_ell(n, ell)
    e_c = level_coulomb(n, ell).energy
    e_w = level_second_order_weber(qn, alpha).energy
    e_s = level_sommerfeld(qn, alpha).energy
    split = weber_sommerfeld_split(n, alpha)
    try:
        exact = level_exact(qn, alpha, tol)
        return SpectrumRow(n, ell, qn.n_r, e_c, e_w, e_s, exact.energy, exact.residual, split)
    except WeberError as exc:
        return SpectrumRow(
            n, ell, qn.n_r, e_c, e_w, e_s, math.nan, math.nan, split, error=str(exc)
        )


def _resolve_workers(max_workers: int) -> int:
    if max_workers < 0:
        raise ValueError(f"max_workers must be >= 0, got {max_workers}")
    if max_workers == 0:
        env = os.environ.get("WEBER_SPECTRA_THREADS", "0")
        try:
            max_workers = int(env)
        except ValueError:
            max_workers = 0
        if max_workers == 0:
            max_workers = min(8, os.cpu_count() or 1)
    return max_workers


def spectrum_table(
    n_max: int, alpha: float, tol: float = DEFAULT_TOL, max_workers: int = 0
) -> list[SpectrumRow]:
    """Level table for all (n <= n_max, ell <= n), sorted by (n, ell).

    Rows whose exact solve fails carry nan energies and an error message
    instead of aborting the table.  Rows may be evaluated in parallel
    (max_workers = 0: auto, capped by the WEBER_SPECTRA_THREADS environment
    variable); the result ordering is deterministic regardless.
    """
    if not 1 <= n_max <= N_MAX_LIMIT:
        raise ValueError(f"n_max must lie in [1, {N_MAX_LIMIT}], got {n_max}")
    cells = [(n, ell) for n in range(1, n_max + 1) for ell in range(1, n + 1)]
    workers = _resolve_workers(max_workers)
    if workers <= 1:
        return [_make_row(n, ell, alpha, tol) for n, ell in cells]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda c: _make_row(c[0], c[1], alpha, tol), cells))
