import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

import volseg as vs
from volseg.errors import DegenerateDataError, InvalidInputError
from volseg.kde import KernelDensity


class TestNrdBandwidth:
    def test_rule_of_thumb_value(self):
        # sample sd exactly 1 (standardized), IQR/1.34 > 1, n=100:
        # h = 1.06 * 1 * 100^(-1/5)
        x = np.linspace(-1, 1, 100)
        x = (x - x.mean()) / x.std(ddof=1)
        assert np.percentile(x, 75) - np.percentile(x, 25) > 1.34
        h = vs.nrd_bandwidth(x)
        assert h == pytest.approx(1.06 * 100 ** -0.2, rel=1e-12)
        assert h == pytest.approx(0.42199, abs=1e-5)

    def test_formula_against_direct_recomputation(self):
        rng = np.random.default_rng(1)
        for n in (10, 57, 400):
            x = rng.standard_t(5, n)
            sd = np.std(x, ddof=1)
            iqr = np.percentile(x, 75) - np.percentile(x, 25)
            expect = 1.06 * min(sd, iqr / 1.34) * n ** -0.2
            assert vs.nrd_bandwidth(x) == pytest.approx(expect, rel=1e-14)

    @given(c=st.floats(1e-3, 1e3), seed=st.integers(0, 500))
    @settings(max_examples=30, deadline=None)
    def test_scale_equivariance(self, c, seed):
        x = np.random.default_rng(seed).standard_normal(60)
        assert vs.nrd_bandwidth(c * x) == pytest.approx(c * vs.nrd_bandwidth(x),
                                                        rel=1e-10)

    def test_constant_data_raises(self):
        with pytest.raises(DegenerateDataError):
            vs.nrd_bandwidth(np.full(20, 3.14))

    def test_zero_iqr_raises(self):
        # half the mass piled on two values -> sd > 0 but IQR can vanish
        x = np.r_[np.zeros(40), np.zeros(40), 5.0]
        with pytest.raises(DegenerateDataError):
            vs.nrd_bandwidth(x)

    def test_too_short(self):
        with pytest.raises(InvalidInputError):
            vs.nrd_bandwidth(np.array([1.0]))

    def test_custom_constant(self):
        x = np.random.default_rng(3).standard_normal(50)
        assert vs.nrd_bandwidth(x, constant=0.9) == pytest.approx(
            0.9 / 1.06 * vs.nrd_bandwidth(x), rel=1e-12
        )


class TestKdePdf:
    def test_single_point_center(self):
        kd = KernelDensity(np.array([0.0]), 1.0)
        assert vs.kde_pdf(kd, 0.0) == pytest.approx(1 / math.sqrt(2 * math.pi),
                                                    abs=1e-15)

    @pytest.mark.parametrize("n", [10, 100, 1000])
    def test_integrates_to_one(self, n):
        pts = np.random.default_rng(n).standard_normal(n)
        kd = KernelDensity.from_sample(pts)
        lo = pts.min() - 10 * kd.bandwidth
        hi = pts.max() + 10 * kd.bandwidth
        total, _ = integrate.quad(lambda t: vs.kde_pdf(kd, t), lo, hi, limit=400)
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_symmetry_for_symmetric_points(self):
        pts = np.array([-2.0, -0.5, 0.5, 2.0])
        kd = KernelDensity(pts, 0.7)
        x = np.linspace(0, 5, 50)
        np.testing.assert_allclose(vs.kde_pdf(kd, x), vs.kde_pdf(kd, -x),
                                   rtol=1e-13)

    def test_wide_bandwidth_approaches_single_gaussian(self):
        # as h -> inf the density at the mean tends to one wide kernel's value
        pts = np.array([-1.0, 0.0, 1.0, 2.0])
        for h in (50.0, 500.0):
            kd = KernelDensity(pts, h)
            val = vs.kde_pdf(kd, pts.mean())
            single = np.exp(-0.5 * ((pts.mean() - pts) / h) ** 2).mean() / (
                h * math.sqrt(2 * math.pi))
            assert val == pytest.approx(single, rel=1e-12)
            assert val == pytest.approx(1 / (h * math.sqrt(2 * math.pi)), rel=1e-3)

    def test_vector_matches_scalar(self):
        pts = np.random.default_rng(0).standard_normal(30)
        kd = KernelDensity.from_sample(pts)
        xs = np.linspace(-3, 3, 17)
        vec = vs.kde_pdf(kd, xs)
        np.testing.assert_allclose(vec, [vs.kde_pdf(kd, float(x)) for x in xs],
                                   rtol=1e-14)

    def test_block_size_is_invisible(self):
        pts = np.random.default_rng(2).standard_normal(700)
        kd = KernelDensity.from_sample(pts)
        xs = np.linspace(-4, 4, 555)
        np.testing.assert_array_equal(vs.kde_pdf(kd, xs, block=64),
                                      vs.kde_pdf(kd, xs, block=10_000))

    def test_invalid_construction(self):
        with pytest.raises(InvalidInputError):
            KernelDensity(np.array([]), 1.0)
        with pytest.raises(InvalidInputError):
            KernelDensity(np.array([1.0]), 0.0)
        with pytest.raises(InvalidInputError):
            KernelDensity(np.array([np.nan]), 1.0)
