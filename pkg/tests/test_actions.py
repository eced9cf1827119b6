import math

import numpy as np
import pytest

from weberatom import (
    ActionMethod,
    RadialCoefficients,
    apsidal_angle,
    radial_action_closed_form,
    radial_action_quadrature,
    radial_action_second_order,
    radial_period,
    turning_points,
)
from weberatom.errors import (
    DegenerateTorusError,
    FallToCenterError,
    NoTorusError,
    UnboundOrbitError,
)

ALPHA_GRID = [0.0, 0.01, 1 / 137, 0.05]


def kepler_action(energy, ell):
    return -ell + 1.0 / math.sqrt(-2.0 * energy)


def bisect_radicand_roots(energy, ell, alpha):
    """Independent turning-point oracle: scan for sign brackets, then bisect."""
    coeffs = RadialCoefficients.from_orbit(energy, ell, alpha)
    grid = np.linspace(0.05, 60.0, 240001)
    vals = coeffs.radicand(grid)
    roots = []
    for i in np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]:
        lo, hi = grid[i], grid[i + 1]
        flo = coeffs.radicand(lo)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            fm = coeffs.radicand(mid)
            if flo * fm <= 0:
                hi = mid
            else:
                lo, flo = mid, fm
        roots.append(0.5 * (lo + hi))
    return roots


class TestTurningPoints:
    def test_kepler_closed_form(self):
        tp = turning_points(-0.125, 1.0, 0.0)
        assert tp.r_min == pytest.approx(4 - 2 * math.sqrt(3), abs=1e-13)
        assert tp.r_max == pytest.approx(4 + 2 * math.sqrt(3), abs=1e-13)

    def test_circular_orbit_degenerate(self):
        with pytest.raises(DegenerateTorusError) as err:
            turning_points(-0.5, 1.0, 0.0)
        assert err.value.circular_radius == pytest.approx(1.0, abs=1e-12)

    def test_weber_against_bisection_oracle(self):
        alpha = 1 / 137
        tp = turning_points(-0.125, 1.0, alpha)
        # close to the Kepler radii
        assert tp.r_min == pytest.approx(4 - 2 * math.sqrt(3), abs=1e-3)
        assert tp.r_max == pytest.approx(4 + 2 * math.sqrt(3), abs=1e-3)
        roots = bisect_radicand_roots(-0.125, 1.0, alpha)
        assert len(roots) == 2
        assert tp.r_min == pytest.approx(roots[0], abs=1e-9)
        assert tp.r_max == pytest.approx(roots[1], abs=1e-9)

    def test_radicand_positive_strictly_between(self):
        for alpha in ALPHA_GRID:
            tp = turning_points(-0.1, 1.0, alpha)
            coeffs = RadialCoefficients.from_orbit(-0.1, 1.0, alpha)
            mid = np.linspace(tp.r_min * 1.001, tp.r_max * 0.999, 101)
            assert np.all(coeffs.radicand(mid) > 0)

    def test_no_torus_below_circular_energy(self):
        with pytest.raises(NoTorusError):
            turning_points(-0.6, 1.0, 0.0)

    def test_no_torus_for_unbound(self):
        with pytest.raises(NoTorusError):
            turning_points(0.1, 1.0, 0.0)

    def test_fall_to_center(self):
        # ell^2 <= 2 alpha^2 with ell = 1 needs alpha >= 1/sqrt(2)
        with pytest.raises(FallToCenterError):
            turning_points(-0.125, 1.0, 0.8)


class TestQuadrature:
    def test_kepler_unit_action(self):
        res = radial_action_quadrature(-0.125, 1.0, 0.0)
        assert res.method is ActionMethod.QUADRATURE
        assert res.value == pytest.approx(1.0, abs=1e-10)
        assert res.est_error >= 0.0

    def test_kepler_l2(self):
        res = radial_action_quadrature(-1.0 / 18.0, 2.0, 0.0)
        assert res.value == pytest.approx(1.0, abs=1e-10)

    def test_shrinking_annulus(self):
        # E -> E_circular from above: action -> 0
        res = radial_action_quadrature(-0.5 + 1e-6, 1.0, 0.0)
        assert abs(res.value) < 1e-5

    def test_rel_tol_validated(self):
        with pytest.raises(ValueError):
            radial_action_quadrature(-0.125, 1.0, 0.0, rel_tol=1e-2)
        with pytest.raises(ValueError):
            radial_action_quadrature(-0.125, 1.0, 0.0, rel_tol=1e-15)


class TestClosedForm:
    def test_kepler_values(self):
        assert radial_action_closed_form(-0.125, 1.0, 0.0).value == pytest.approx(1.0, abs=1e-15)
        assert radial_action_closed_form(-0.5, 1.0, 0.0).value == pytest.approx(0.0, abs=1e-15)

    def test_kepler_oracle_machine_precision(self):
        for energy in np.linspace(-0.49, -0.01, 25):
            for ell in (1.0, 2.0, 3.0):
                got = radial_action_closed_form(energy, ell, 0.0).value
                assert got == pytest.approx(kepler_action(energy, ell), abs=1e-13)

    def test_against_quadrature_oracle_alpha_001(self):
        # The residue expression keeps the 1/r^3 radicand coefficient D1 only
        # to first order, so it differs from the true integral at O(D1^2):
        # measured (quadruple-precision quadrature) 8.9093e-9 at this point.
        q = radial_action_quadrature(-0.125, 1.0, 0.01, rel_tol=1e-12).value
        c = radial_action_closed_form(-0.125, 1.0, 0.01).value
        assert q - c == pytest.approx(8.9093e-9, rel=1e-3)

    def test_quadrature_agreement_is_order_alpha4(self):
        # |quadrature - closed form| <= 1.0 * alpha^4 / ell^3 across the grid
        # (coefficient ~0.9 measured; exact at alpha = 0)
        for ell in (1.0, 2.0, 3.0):
            e_circ = -1.0 / (2.0 * ell * ell)
            for s in (0.9, 0.5, 0.2):
                energy = s * e_circ
                for alpha in ALPHA_GRID:
                    q = radial_action_quadrature(energy, ell, alpha, rel_tol=1e-12)
                    c = radial_action_closed_form(energy, ell, alpha)
                    bound = 1.0 * alpha**4 / ell**3 + 1e-11
                    assert abs(q.value - c.value) <= bound

    def test_monotonic_in_energy(self):
        for ell in (1.0, 2.0, 3.0):
            for alpha in ALPHA_GRID:
                e_circ = -1.0 / (2.0 * ell * ell)
                grid = np.linspace(0.999 * e_circ, -1e-4, 100)
                vals = [radial_action_closed_form(e, ell, alpha).value for e in grid]
                assert np.all(np.diff(vals) > 0)

    def test_unbound_error(self):
        with pytest.raises(UnboundOrbitError):
            radial_action_closed_form(0.0, 1.0, 0.0)

    def test_fall_to_center_error(self):
        with pytest.raises(FallToCenterError):
            radial_action_closed_form(-0.125, 0.1, 0.1)


class TestSecondOrder:
    def test_ground_state(self):
        # n_r = 0 kills the alpha term
        assert radial_action_second_order(1, 1, 0.3) == 1.0

    def test_coulomb_case(self):
        assert radial_action_second_order(2, 1, 0.0) == 4.0

    def test_alpha_correction(self):
        assert radial_action_second_order(2, 1, 0.05) == pytest.approx(3.9975, abs=1e-15)

    def test_validation(self):
        with pytest.raises(ValueError):
            radial_action_second_order(1, 2, 0.0)


class TestApsidalAngle:
    def test_kepler_closes(self, rng):
        # Kepler ellipses close: apsidal angle is 2 pi for 20 random bound orbits
        for _ in range(20):
            ell = float(rng.integers(1, 4))
            energy = rng.uniform(0.15, 0.95) * (-1.0 / (2 * ell * ell))
            angle = apsidal_angle(energy, ell, 0.0)
            assert angle == pytest.approx(2 * math.pi, abs=1e-8)

    def test_weber_prograde_precession(self):
        angle = apsidal_angle(-0.125, 1.0, 0.05)
        assert angle > 2 * math.pi
        # cross-checked dynamically in test_dynamics / acceptance criterion 9

    def test_degenerate_input(self):
        with pytest.raises(DegenerateTorusError):
            apsidal_angle(-0.5, 1.0, 0.0)


class TestRadialPeriod:
    def test_kepler_period(self):
        # T_r = 2 pi (-2E)^(-3/2)
        for energy in (-0.5 + 1e-3, -0.125, -0.02):
            got = radial_period(energy, 1.0, 0.0)
            assert got == pytest.approx(2 * math.pi * (-2 * energy) ** -1.5, rel=1e-9)
