import math

import numpy as np
import pytest

import volseg as vs
from volseg.distributions import parse_dist
from volseg.errors import ParameterError

from conftest import quad_moments

# the parameter sets exercised throughout the simulation studies
STUDY_DISTS = [
    vs.gaussian(),
    vs.ged(1.5),
    vs.ged(2.0),
    vs.student_t(6),
    vs.gaussian(xi=4.0),
    vs.ged(1.5, xi=4.0),
    vs.student_t(6, xi=4.0),
]


class TestPdfValues:
    def test_ged2_is_gaussian_at_zero(self):
        # lambda evaluates to 1 at nu=2, so the density is the standard normal
        assert vs.ged(2.0).pdf(0.0) == pytest.approx(0.3989423, abs=5e-8)

    def test_ged2_equals_gaussian_on_grid(self):
        x = np.linspace(-6, 6, 1201)
        np.testing.assert_allclose(vs.ged(2.0).pdf(x), vs.gaussian().pdf(x),
                                   atol=1e-12)

    def test_t6_at_zero(self):
        # textbook t6 density at 0 times the unit-variance jacobian sqrt(6/4)
        assert vs.student_t(6).pdf(0.0) == pytest.approx(15.0 / 32.0, abs=1e-12)
        assert vs.student_t(6).pdf(0.0) == pytest.approx(0.46876, abs=1e-5)

    def test_gaussian_symmetry(self):
        d = vs.gaussian()
        for x in (0.3, 1.7, 4.2):
            assert d.pdf(x) == pytest.approx(d.pdf(-x), rel=1e-15)

    @pytest.mark.parametrize("dist", STUDY_DISTS, ids=lambda d: d.name)
    def test_normalization_and_moments(self, dist):
        total, mean, second = quad_moments(dist)
        assert total == pytest.approx(1.0, abs=1e-8)
        assert mean == pytest.approx(0.0, abs=1e-6)
        assert second == pytest.approx(1.0, abs=1e-6)

    def test_symmetric_pdf_is_even(self):
        x = np.linspace(0.1, 5, 40)
        for dist in (vs.gaussian(), vs.ged(1.5), vs.student_t(6)):
            np.testing.assert_allclose(dist.pdf(x), dist.pdf(-x), rtol=1e-14)

    def test_invalid_params(self):
        with pytest.raises(ParameterError):
            vs.ged(0.0)
        with pytest.raises(ParameterError):
            vs.student_t(2.0)
        with pytest.raises(ParameterError):
            vs.gaussian(xi=0.0)
        with pytest.raises(ParameterError):
            vs.InnovationDist("cauchy")


class TestSampling:
    @pytest.mark.parametrize("dist", STUDY_DISTS, ids=lambda d: d.name)
    def test_standardization(self, dist):
        x = dist.sample(100_000, seed=11)
        assert x.mean() == pytest.approx(0.0, abs=0.02)
        assert x.var() == pytest.approx(1.0, abs=0.03)

    def test_deterministic_by_seed(self):
        for dist in STUDY_DISTS:
            a = dist.sample(1000, seed=5)
            b = dist.sample(1000, seed=5)
            np.testing.assert_array_equal(a, b)

    def test_ged15_has_excess_kurtosis(self):
        # nu < 2 means fatter tails than the Gaussian
        x = vs.ged(1.5).sample(100_000, seed=3)
        kurt = ((x - x.mean()) ** 4).mean() / x.var() ** 2 - 3.0
        assert kurt > 0.2

    def test_skew_t_is_right_skewed(self):
        x = vs.student_t(6, xi=4.0).sample(100_000, seed=4)
        skew = ((x - x.mean()) ** 3).mean() / x.std() ** 3
        assert skew > 0.5

    def test_histogram_matches_pdf(self):
        # crude KS-style check: empirical CDF vs numeric CDF along a grid
        dist = vs.ged(1.5)
        x = np.sort(dist.sample(20_000, seed=9))
        grid = np.linspace(-4, 4, 41)
        from scipy import integrate
        for g in grid:
            emp = np.searchsorted(x, g) / x.size
            num, _ = integrate.quad(dist.pdf, -40, g, limit=200)
            assert emp == pytest.approx(num, abs=0.015)


class TestMeanAbs:
    def test_gaussian_closed_form(self):
        assert vs.gaussian().mean_abs() == pytest.approx(math.sqrt(2 / math.pi),
                                                         rel=1e-12)

    def test_ged2_matches_gaussian(self):
        assert vs.ged(2.0).mean_abs() == pytest.approx(math.sqrt(2 / math.pi),
                                                       rel=1e-10)

    @pytest.mark.parametrize("dist", STUDY_DISTS, ids=lambda d: d.name)
    def test_quadrature_oracle(self, dist):
        from scipy import integrate
        pts = dist._quad_breakpoints() if dist.xi != 1.0 else [0.0]
        val, _ = integrate.quad(lambda t: abs(t) * float(dist.pdf(t)),
                                -1000, 1000, limit=400, points=pts)
        assert dist.mean_abs() == pytest.approx(val, abs=1e-6)

    def test_monte_carlo_cross_check(self):
        d = vs.student_t(6)
        x = np.abs(d.sample(200_000, seed=21)).mean()
        assert d.mean_abs() == pytest.approx(x, abs=0.01)


class TestParseDist:
    @pytest.mark.parametrize("text,expect", [
        ("gaussian", vs.gaussian()),
        ("normal", vs.gaussian()),
        ("ged:1.5", vs.ged(1.5)),
        ("t:6", vs.student_t(6)),
        ("skewt:6:4", vs.student_t(6, xi=4.0)),
        ("skewged:1.5:4", vs.ged(1.5, xi=4.0)),
        ("skewgaussian:4", vs.gaussian(xi=4.0)),
    ])
    def test_parse(self, text, expect):
        assert parse_dist(text) == expect

    def test_round_trip(self):
        for dist in STUDY_DISTS:
            assert parse_dist(dist.spec_string) == dist

    def test_bad_spec(self):
        with pytest.raises(ParameterError):
            parse_dist("weibull:2")
        with pytest.raises(ParameterError):
            parse_dist("ged")
