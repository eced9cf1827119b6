import math

import numpy as np
import pytest

from weberatom import (
    DelayParams,
    LoopSamples,
    eval_loop,
    kinetic_action,
    neumann_action,
    neumann_integrand,
    neumann_potential,
    random_loop_corpus,
    retarded_action,
    taylor_coefficient_analytic,
    taylor_coefficient_numeric,
    truncation_check_loop,
    truncation_error,
)
from weberatom.errors import UnsupportedOrderError

SQRT3 = math.sqrt(3.0)
# closed forms for r(t) = 2 + cos(2 pi t):
#   integral dt/(2 + cos 2 pi t)            = 1/sqrt(3)
#   integral r'^2/(2 + cos 2 pi t) dt       = 4 pi^2 (2 - sqrt(3))
# (both follow from integral_0^{2pi} dth/(b + cos th) = 2 pi/sqrt(b^2-1);
#  verified against adaptive quadrature before freezing)
COS_S0 = -1.0 / SQRT3
COS_S2 = -4.0 * math.pi**2 * (2.0 - SQRT3)


@pytest.fixture(scope="module")
def cos_loop():
    return LoopSamples.from_function(lambda t: 2.0 + np.cos(2 * np.pi * t), 1024)


@pytest.fixture(scope="module")
def corpus():
    return random_loop_corpus(10, n_samples=1024, seed=42)


class TestLoopSamples:
    def test_validation(self):
        with pytest.raises(ValueError):
            LoopSamples(np.ones(100))  # not a power of two
        with pytest.raises(ValueError):
            LoopSamples(np.ones(32))  # too few
        with pytest.raises(ValueError):
            LoopSamples(np.zeros(64))  # not positive

    def test_knots_reproduced_exactly(self, cos_loop):
        t = np.arange(cos_loop.n) / cos_loop.n
        assert np.array_equal(cos_loop.radius(t), cos_loop.values)

    def test_constant_loop(self):
        loop = LoopSamples.constant(2.0)
        r, rp, rpp = eval_loop(loop, 0.37)
        assert (r, rp, rpp) == (2.0, 0.0, 0.0)

    def test_cosine_derivatives(self, cos_loop):
        # cubic-spline convergence: values O(N^-4), r' O(N^-3), r'' O(N^-2);
        # measured at N = 1024: 3e-12, 5e-9, 1.3e-4
        for t in (0.0, 0.1, 0.237, 0.5, 0.77):
            r, rp, rpp = eval_loop(cos_loop, t)
            assert r == pytest.approx(2 + math.cos(2 * math.pi * t), abs=1e-10)
            assert rp == pytest.approx(-2 * math.pi * math.sin(2 * math.pi * t), abs=1e-7)
            assert rpp == pytest.approx(-4 * math.pi**2 * math.cos(2 * math.pi * t), abs=1e-3)

    def test_periodicity(self, cos_loop):
        assert eval_loop(cos_loop, 0.25) == eval_loop(cos_loop, 3.25)


class TestRetardedAction:
    def test_constant_loop_any_delay(self):
        loop = LoopSamples.constant(2.0)
        assert retarded_action(loop, 0.7) == pytest.approx(-0.5, abs=1e-14)

    def test_constant_loop_delay_independent(self):
        loop = LoopSamples.constant(3.0)
        vals = {retarded_action(loop, a) for a in (0.0, 0.1, 0.5)}
        assert max(vals) - min(vals) < 1e-14

    def test_zero_delay_is_unretarded(self, corpus):
        for loop in corpus[:3]:
            assert retarded_action(loop, 0.0) == pytest.approx(
                taylor_coefficient_analytic(loop, 0), abs=1e-14
            )

    def test_cosine_unretarded_value(self, cos_loop):
        assert retarded_action(cos_loop, 0.0) == pytest.approx(COS_S0, abs=1e-11)


class TestTaylorCoefficients:
    def test_k0_equals_unretarded(self, cos_loop):
        assert taylor_coefficient_numeric(cos_loop, 0) == retarded_action(cos_loop, 0.0)

    def test_s1_vanishes_on_corpus(self, corpus):
        for loop in corpus:
            assert abs(taylor_coefficient_numeric(loop, 1)) < 1e-7

    def test_s1_analytic_identically_zero(self, corpus):
        assert all(taylor_coefficient_analytic(loop, 1) == 0.0 for loop in corpus)

    def test_s2_numeric_matches_analytic_on_corpus(self, corpus):
        for loop in corpus:
            num = taylor_coefficient_numeric(loop, 2)
            ana = taylor_coefficient_analytic(loop, 2)
            assert abs(num - ana) < 1e-5

    def test_s2_analytic_cosine(self, cos_loop):
        assert taylor_coefficient_analytic(cos_loop, 2) == pytest.approx(COS_S2, abs=1e-6)

    def test_s2_numeric_cosine(self, cos_loop):
        assert taylor_coefficient_numeric(cos_loop, 2) == pytest.approx(COS_S2, abs=1e-6)

    def test_s2_constant_loop(self):
        assert taylor_coefficient_analytic(LoopSamples.constant(2.0), 2) == pytest.approx(
            0.0, abs=1e-14
        )

    def test_s3_parity(self, cos_loop):
        # time-even loop: the cubic coefficient vanishes by parity; the
        # designated asymmetric loop has |S^3| ~ 25
        s3_even = taylor_coefficient_numeric(cos_loop, 3)
        s3_asym = taylor_coefficient_numeric(truncation_check_loop(), 3)
        assert abs(s3_even) < 1e-3
        assert abs(s3_asym) > 10.0

    def test_analytic_order_cap(self, cos_loop):
        with pytest.raises(UnsupportedOrderError):
            taylor_coefficient_analytic(cos_loop, 3)

    def test_numeric_order_validation(self, cos_loop):
        with pytest.raises(ValueError):
            taylor_coefficient_numeric(cos_loop, 4)


class TestNeumannAction:
    def test_constant_loop(self):
        assert neumann_action(LoopSamples.constant(2.0), 0.3) == pytest.approx(-0.5, abs=1e-14)

    def test_alpha_zero_is_unretarded(self, corpus):
        for loop in corpus[:3]:
            assert neumann_action(loop, 0.0) == taylor_coefficient_analytic(loop, 0)

    def test_cosine_value(self, cos_loop):
        # S0 + (alpha^2/2) S2 at alpha = 0.1
        expected = COS_S0 + 0.005 * COS_S2
        assert neumann_action(cos_loop, 0.1) == pytest.approx(expected, abs=1e-10)
        assert expected == pytest.approx(-0.63024, abs=1e-5)

    def test_truncation_identity(self, corpus):
        # S0 + a S1 + a^2 S2 with a = alpha/sqrt(2) equals the Neumann action
        alpha = 0.07
        a = alpha / math.sqrt(2.0)
        for loop in corpus[:3]:
            lhs = (
                taylor_coefficient_analytic(loop, 0)
                + a * taylor_coefficient_analytic(loop, 1)
                + a * a * taylor_coefficient_analytic(loop, 2)
            )
            assert lhs == pytest.approx(neumann_action(loop, alpha), abs=1e-13)

    def test_integrand_matches_lagrangian_term(self, rng):
        # same formula lives in two code paths: the loop functional and the
        # radial restriction of the velocity-dependent Lagrangian potential
        for _ in range(50):
            r = rng.uniform(0.5, 5.0)
            v = rng.uniform(-10.0, 10.0)
            alpha = rng.uniform(0.0, 0.2)
            assert abs(neumann_integrand(r, v, alpha) - neumann_potential(r, v, alpha)) < 1e-14


class TestTruncationError:
    def test_constant_loop_zero(self):
        assert truncation_error(LoopSamples.constant(2.0), 0.05) == pytest.approx(0.0, abs=1e-15)

    def test_alpha_zero(self, cos_loop):
        assert truncation_error(cos_loop, 0.0) == 0.0

    def test_cubic_order_on_designated_loop(self):
        loop = truncation_check_loop()
        errs = [truncation_error(loop, a) for a in (0.04, 0.02, 0.01)]
        assert 6.0 <= errs[0] / errs[1] <= 10.0
        assert 6.0 <= errs[1] / errs[2] <= 10.0

    def test_error_magnitude_is_cubic_coefficient(self):
        # |S_pot(a) - Neumann| ~ |S^3| a^3 at small a
        loop = truncation_check_loop()
        s3 = taylor_coefficient_numeric(loop, 3)
        a = 0.01 / math.sqrt(2.0)
        assert truncation_error(loop, 0.01) == pytest.approx(abs(s3) * a**3, rel=0.15)


class TestKineticAction:
    def test_cosine(self, cos_loop):
        # (1/2) integral (2 pi sin)^2 = pi^2
        assert kinetic_action(cos_loop) == pytest.approx(math.pi**2, rel=1e-9)

    def test_constant(self):
        assert kinetic_action(LoopSamples.constant(2.0)) == pytest.approx(0.0, abs=1e-15)


class TestDelayParams:
    def test_from_alpha(self):
        dp = DelayParams.from_alpha(0.1)
        assert dp.a == pytest.approx(0.1 / math.sqrt(2.0), abs=1e-17)
        assert dp.c_w == pytest.approx(math.sqrt(2.0) / 0.1, abs=1e-13)
        assert dp.a * dp.c_w == pytest.approx(1.0, abs=1e-15)

    def test_alpha_zero(self):
        dp = DelayParams.from_alpha(0.0)
        assert dp.a == 0.0
        assert math.isinf(dp.c_w)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            DelayParams.from_alpha(-0.1)


class TestLoopCsv:
    def test_round_trip(self, tmp_path, cos_loop):
        path = tmp_path / "loop.csv"
        path.write_text("\n".join(f"{v:.17g}" for v in cos_loop.values) + "\n")
        from weberatom import load_loop_csv

        loaded = load_loop_csv(path)
        assert np.array_equal(loaded.values, cos_loop.values)

    def test_invalid_count_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("\n".join("2.0" for _ in range(100)) + "\n")
        from weberatom import load_loop_csv

        with pytest.raises(ValueError):
            load_loop_csv(path)


class TestCorpus:
    def test_reproducible(self):
        a = random_loop_corpus(3, seed=7)
        b = random_loop_corpus(3, seed=7)
        assert all(np.array_equal(x.values, y.values) for x, y in zip(a, b))

    def test_range_and_degree(self, corpus):
        assert len(corpus) == 10
        for loop in corpus:
            assert loop.values.min() > 1.0
            assert loop.values.max() < 5.0
            # degree <= 5: Fourier content above mode 5 comes only from the
            # sampling grid, i.e. is zero for the sampled values themselves
            harmonics = np.abs(np.fft.rfft(loop.values))
            assert harmonics[6:].max() < 1e-9 * harmonics.max()
