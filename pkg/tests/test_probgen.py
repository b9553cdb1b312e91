"""Probability generating functions and the probabilistic Tauberian checks."""

import math

import numpy as np
import pytest
from scipy.special import gammaln

from entire_growth.errors import (
    DivergenceError,
    InputError,
    NotEntireError,
)
from entire_growth.probgen import (
    degenerate,
    distribution_from_csv,
    generating_function_log,
    geometric,
    poisson,
    poisson_growth,
    prob_tauberian_report,
)


class TestPoisson:
    @pytest.mark.parametrize("lam", [1.0, 2.0, 5.0])
    def test_normalized(self, lam):
        assert generating_function_log(poisson(lam), 1.0) == pytest.approx(
            0.0, abs=1e-12)

    @pytest.mark.parametrize("lam", [1.0, 2.0, 5.0])
    def test_generating_function_closed_form(self, lam):
        # E r^X = exp(lam (r - 1))
        for r in (0.5, 2.0, 10.0):
            assert generating_function_log(poisson(lam), r) == pytest.approx(
                lam * (r - 1.0), rel=1e-12, abs=1e-12)

    def test_growth_profile(self):
        g = poisson_growth(2.0)
        assert g(1.0) == pytest.approx(2.0 * (math.e - 1.0))

    def test_coefficient_bound_lambda_one(self):
        # Lambda_P*(k) = k ln k - k + 1 for lam = 1
        d = poisson(1.0)
        ks = np.arange(1, 1001, dtype=float)
        la = d.log_mass_array(ks)
        conj = ks * np.log(ks) - ks + 1.0
        assert np.all(la <= -conj + 1e-9)

    def test_bad_lambda(self):
        with pytest.raises(InputError):
            poisson(0.0)


class TestGeometric:
    def test_gf_inside_radius(self):
        p = 0.5
        d = geometric(p)
        for r in (0.5, 1.0, 1.5):
            expect = math.log((1.0 - p) / (1.0 - p * r))
            assert generating_function_log(d, r) == pytest.approx(expect, rel=1e-9)

    def test_divergence_at_radius(self):
        d = geometric(0.5)
        with pytest.raises(DivergenceError):
            generating_function_log(d, 2.0)
        with pytest.raises(DivergenceError):
            generating_function_log(d, 5.0)

    def test_tauberian_refused(self):
        with pytest.raises(NotEntireError):
            prob_tauberian_report(geometric(0.3), poisson_growth(1.0),
                                  [2.0], [10])

    def test_bad_p(self):
        with pytest.raises(InputError):
            geometric(1.0)


class TestDegenerate:
    def test_point_mass_gf(self):
        d = degenerate(3)
        for r in (0.5, 2.0):
            assert generating_function_log(d, r) == pytest.approx(3.0 * math.log(r))

    def test_at_zero(self):
        assert generating_function_log(degenerate(0), 7.0) == pytest.approx(0.0)


class TestCsvDistribution:
    def test_round_trip(self, tmp_path):
        p = tmp_path / "mass.csv"
        p.write_text("k,ln_mass\n0,%r\n1,%r\n2,ZERO\n"
                     % (math.log(0.25), math.log(0.75)))
        d = distribution_from_csv(p)
        assert d.log_mass(0) == pytest.approx(math.log(0.25))
        assert d.log_mass(2) == -math.inf
        assert generating_function_log(d, 1.0) == pytest.approx(0.0, abs=1e-12)

    def test_unnormalized_rejected(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("k,ln_mass\n0,%r\n1,%r\n" % (math.log(0.5), math.log(0.4)))
        with pytest.raises(InputError):
            distribution_from_csv(p)


class TestProbTauberian:
    def test_poisson_ratios(self):
        rep = prob_tauberian_report(poisson(1.0), poisson_growth(1.0),
                                    r_grid=np.exp([1.0, 2.0, 3.0]),
                                    n_grid=np.arange(10, 301, 10))
        np.testing.assert_allclose(rep.lhs_ratios, 1.0, rtol=1e-12)
        assert abs(rep.rhs_ratios[-1] - 1.0) < 0.05
