import math

import numpy as np
import pytest

from weberatom import (
    LevelMethod,
    QuantumNumbers,
    level_coulomb,
    level_exact,
    level_second_order_weber,
    level_sommerfeld,
    radial_action_closed_form,
    spectrum_table,
    transition_frequency,
    weber_sommerfeld_split,
)
from weberatom.errors import FallToCenterError, ZeroFrequencyError

ALPHA = 1 / 137


def qn(n, ell):
    return QuantumNumbers.from_n_ell(n, ell)


class TestQuantumNumbers:
    def test_main_quantum_number(self):
        assert qn(3, 2).n_r == 1
        assert qn(3, 2).n == 3

    def test_validation(self):
        with pytest.raises(ValueError):
            QuantumNumbers(n_r=-1, ell=1)
        with pytest.raises(ValueError):
            QuantumNumbers(n_r=0, ell=0)
        with pytest.raises(ValueError):
            QuantumNumbers.from_n_ell(2, 3)


class TestSecondOrderWeber:
    def test_ground_state_terms_cancel(self):
        # -1/2 - alpha^2/2 + alpha^2/2
        assert level_second_order_weber(qn(1, 1), ALPHA).energy == -0.5

    def test_coulomb_limit(self):
        assert level_second_order_weber(qn(2, 1), 0.0).energy == -0.125

    def test_n2_l1(self):
        e = level_second_order_weber(qn(2, 1), ALPHA).energy
        assert e == pytest.approx(-0.125 - ALPHA**2 / 32, abs=1e-18)
        assert e == pytest.approx(-0.125001665, abs=1e-9)


class TestSommerfeld:
    def test_ground_state(self):
        e = level_sommerfeld(qn(1, 1), 0.1).energy
        assert e == pytest.approx(-0.5 - 0.1**2 / 8, abs=1e-16)

    def test_coulomb_limit(self):
        for n in range(1, 6):
            assert level_sommerfeld(qn(n, 1), 0.0).energy == -1.0 / (2 * n * n)

    def test_split_is_alpha2_over_8n4(self):
        # term-by-term: the first two terms coincide, thirds differ by 1/2 - 3/8
        for n in range(1, 8):
            for ell in (1, max(1, n // 2), n):
                ew = level_second_order_weber(qn(n, ell), ALPHA).energy
                es = level_sommerfeld(qn(n, ell), ALPHA).energy
                split = weber_sommerfeld_split(n, ALPHA)
                assert split == ALPHA**2 / (8 * n**4)
                assert ew - es == pytest.approx(split, abs=5e-17)


class TestCoulomb:
    @pytest.mark.parametrize("n,expected", [(1, -0.5), (2, -0.125), (3, -1 / 18)])
    def test_levels(self, n, expected):
        assert level_coulomb(n).energy == pytest.approx(expected, abs=1e-16)

    def test_validation(self):
        with pytest.raises(ValueError):
            level_coulomb(0)


class TestLevelExact:
    def test_kepler_ground(self):
        lv = level_exact(qn(1, 1), 0.0, tol=1e-12)
        assert lv.energy == -0.5
        assert abs(lv.residual) < 1e-12
        assert lv.method is LevelMethod.EXACT_ROOT_SOLVE

    def test_kepler_n3_l2(self):
        assert level_exact(qn(3, 2), 0.0).energy == pytest.approx(-1 / 18, abs=1e-15)

    def test_agreement_with_second_order_is_order_alpha4(self):
        # quadruple-precision oracle: |dE| = 3.272e-10 at (2, 1, 1/137)
        d = level_exact(qn(2, 1), ALPHA).energy - level_second_order_weber(qn(2, 1), ALPHA).energy
        assert abs(d) < ALPHA**4
        assert abs(d) == pytest.approx(3.2718e-10, rel=1e-3)

    def test_regression_bound_k_alpha4(self):
        # K frozen at 1.0 from a quadruple-precision calibration over
        # n <= 5, alpha <= 0.05 (measured max 0.7554, attained at n = l = 1)
        for alpha in (1e-3, ALPHA, 0.02, 0.05):
            for n in range(1, 6):
                for ell in range(1, n + 1):
                    d = (
                        level_exact(qn(n, ell), alpha).energy
                        - level_second_order_weber(qn(n, ell), alpha).energy
                    )
                    assert abs(d) <= 1.0 * alpha**4

    def test_round_trip(self):
        for n, ell in [(1, 1), (2, 1), (3, 2), (5, 3)]:
            lv = level_exact(qn(n, ell), ALPHA, tol=1e-12)
            back = radial_action_closed_form(lv.energy, ell, ALPHA).value
            assert back == pytest.approx(n - ell, abs=1e-12)

    def test_fall_to_center_rejected(self):
        with pytest.raises(FallToCenterError):
            level_exact(QuantumNumbers(n_r=0, ell=1), 0.8)


class TestOrdering:
    def test_increasing_in_n_at_fixed_ell(self):
        for method in (
            lambda n: level_exact(qn(n, 1), ALPHA).energy,
            lambda n: level_second_order_weber(qn(n, 1), ALPHA).energy,
            lambda n: level_sommerfeld(qn(n, 1), ALPHA).energy,
            lambda n: level_coulomb(n).energy,
        ):
            vals = [method(n) for n in range(1, 9)]
            assert np.all(np.diff(vals) > 0)

    def test_degeneracy_broken_at_positive_alpha(self):
        # strictly increasing in ell at fixed n
        for n in (2, 3, 5):
            vals = [level_second_order_weber(qn(n, ell), ALPHA).energy for ell in range(1, n + 1)]
            assert np.all(np.diff(vals) > 0)

    def test_degenerate_at_alpha_zero(self):
        for n in (2, 3, 5):
            vals = {level_second_order_weber(qn(n, ell), 0.0).energy for ell in range(1, n + 1)}
            assert len(vals) == 1


class TestTheoremCoefficients:
    def test_polynomial_fit_recovers_coefficients(self):
        # fit E(alpha) - E(0) = c1 alpha^2 + c2 alpha^4 on the exact levels and
        # compare c1 with -1/(2 n^3 l) + 1/(2 n^4), c0 with -1/(2 n^2)
        alphas = np.array([0.0, 1e-3, 2e-3, 4e-3])
        for n, ell in [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (3, 3)]:
            energies = np.array([level_exact(qn(n, ell), a).energy for a in alphas])
            assert energies[0] == pytest.approx(-1.0 / (2 * n * n), abs=1e-12)
            design = np.stack([alphas[1:] ** 2, alphas[1:] ** 4], axis=1)
            c1, _ = np.linalg.lstsq(design, energies[1:] - energies[0], rcond=None)[0]
            expected = -1.0 / (2 * n**3 * ell) + 1.0 / (2 * n**4)
            if expected == 0.0:  # n = ell = 1: the alpha^2 terms cancel
                assert abs(c1) < 1e-6
            else:
                assert c1 == pytest.approx(expected, rel=1e-3)


class TestTransitionFrequency:
    def test_lyman_alpha(self):
        f = transition_frequency(level_coulomb(2), level_coulomb(1))
        assert f == pytest.approx(3.0 / (16 * math.pi), abs=1e-15)
        assert f == pytest.approx(0.0596831, abs=1e-7)

    def test_balmer(self):
        f = transition_frequency(level_coulomb(3), level_coulomb(2))
        assert f == pytest.approx((0.125 - 1 / 18) / (2 * math.pi), abs=1e-15)
        assert f == pytest.approx(0.0110524, abs=1e-7)

    def test_identical_levels(self):
        with pytest.raises(ZeroFrequencyError):
            transition_frequency(level_coulomb(2), level_coulomb(2))


class TestSpectrumTable:
    def test_single_row_alpha_zero(self):
        rows = spectrum_table(1, 0.0)
        assert len(rows) == 1
        r = rows[0]
        assert (r.n, r.ell, r.n_r) == (1, 1, 0)
        for e in (r.e_coulomb, r.e_weber_2nd, r.e_sommerfeld_2nd, r.e_exact):
            assert e == pytest.approx(-0.5, abs=1e-12)
        assert r.error is None

    def test_split_column(self):
        rows = spectrum_table(2, ALPHA)
        row = next(r for r in rows if (r.n, r.ell) == (2, 1))
        assert row.weber_minus_sommerfeld == ALPHA**2 / 128

    def test_row_count_and_order(self):
        rows = spectrum_table(3, ALPHA)
        assert [(r.n, r.ell) for r in rows] == [
            (1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (3, 3),
        ]

    def test_errors_propagate_per_row(self):
        # alpha = 0.75: ell = 1 rows fall to the center (1 <= 2*0.5625),
        # ell = 2 rows still solve
        rows = spectrum_table(2, 0.75)
        bad = [r for r in rows if r.ell == 1]
        good = [r for r in rows if r.ell == 2]
        assert all(r.error is not None and math.isnan(r.e_exact) for r in bad)
        assert all(r.error is None and math.isfinite(r.e_exact) for r in good)

    def test_parallel_deterministic(self):
        a = spectrum_table(4, ALPHA, max_workers=4)
        b = spectrum_table(4, ALPHA, max_workers=1)
        assert a == b

    def test_thread_cap_env_var(self, monkeypatch):
        monkeypatch.setenv("WEBER_SPECTRA_THREADS", "2")
        a = spectrum_table(3, ALPHA)
        monkeypatch.setenv("WEBER_SPECTRA_THREADS", "1")
        b = spectrum_table(3, ALPHA)
        assert a == b

    def test_full_depth_table_solves(self):
        # n = 20 has dn_r/dE ~ n^3 = 8000: the residual polish must hold tol
        rows = spectrum_table(20, 0.0072973525693)
        assert len(rows) == 20 * 21 // 2
        assert all(r.error is None for r in rows)
        assert max(abs(r.residual) for r in rows) < 1e-12

    def test_n_max_validated(self):
        with pytest.raises(ValueError):
            spectrum_table(0, ALPHA)
        with pytest.raises(ValueError):
            spectrum_table(21, ALPHA)
