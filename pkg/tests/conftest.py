import numpy as np
import pytest

import volseg as vs


@pytest.fixture(scope="session")
def dgp1_gaussian_1000():
    y, sig2, truth = vs.simulate(
        [vs.DgpSegmentSpec("garch11", vs.DGP1, 1000, vs.gaussian())], seed=2024
    )
    return y, sig2, truth


@pytest.fixture(scope="session")
def two_regime_t6_800():
    """DGP1(400) + DGP2(400) with t6 innovations, pinned seed."""
    segs = [
        vs.DgpSegmentSpec("garch11", vs.DGP1, 400, vs.student_t(6)),
        vs.DgpSegmentSpec("garch11", vs.DGP2, 400, vs.student_t(6)),
    ]
    y, sig2, truth = vs.simulate(segs, seed=7)
    return y, sig2, truth


def quad_moments(dist, lo=-1000.0, hi=1000.0):
    """(integral, mean, second moment) of a density by adaptive quadrature."""
    from scipy import integrate

    if dist.xi != 1.0:
        pts = dist._quad_breakpoints()
    else:
        pts = [0.0]
    bounds = [lo, *[p for p in pts if lo < p < hi], hi]
    total = np.zeros(3)
    for a, b in zip(bounds[:-1], bounds[1:]):
        for k, f in enumerate((lambda x: dist.pdf(x),
                               lambda x: x * dist.pdf(x),
                               lambda x: x * x * dist.pdf(x))):
            val, _ = integrate.quad(f, a, b, limit=200)
            total[k] += val
    return tuple(total)
