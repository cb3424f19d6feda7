"""
Volatility filters and piecewise simulation
===========================================

Runs the three conditional-variance recursions (GARCH, GJR, EGARCH) on a
common return series, then simulates a two-regime GARCH path and shows how
the variance state carries across the structural break.
"""

import numpy as np

import volseg as vs


def main():
    print("=" * 70)
    print("1. One step of each filter on the same returns")
    print("=" * 70)
    y = np.array([1.0, -1.0, 0.5, -0.25, 2.0])
    garch = vs.GarchParams(0.1, 0.05, 0.9)
    gjr = vs.AsymGarchParams(0.1, 0.05, 0.8, 0.1)
    egarch = vs.AsymGarchParams(0.0, 0.1, 0.95, -0.08)

    print("returns:        ", y)
    print("GARCH sigma^2:  ", np.round(vs.garch11_filter(garch, y, 1.0), 4))
    print("GJR sigma^2:    ", np.round(vs.gjr11_filter(gjr, y, 1.0), 4))
    print("EGARCH sigma^2: ", np.round(
        vs.egarch11_filter(egarch, y, 1.0, np.sqrt(2 / np.pi)), 4))
    print()
    print("The GJR recursion loads harder on the negative returns (leverage");
    print("effect): compare its variance after y = -1 with plain GARCH.")
    print()

    print("=" * 70)
    print("2. Piecewise simulation with a volatility regime change")
    print("=" * 70)
    segments = [
        vs.DgpSegmentSpec("garch11", vs.DGP1, 1000, vs.student_t(6)),
        vs.DgpSegmentSpec("garch11", vs.DGP2, 1000, vs.student_t(6)),
    ]
    y, sig2, truth = vs.simulate(segments, seed=7)
    print(f"simulated n = {y.size}, true change-point at {truth.cps[0]}")
    print(f"regime 1: designed unconditional var = {vs.DGP1.unconditional_variance:.2f}, "
          f"sample var = {y[:1000].var():.2f}")
    print(f"regime 2: designed unconditional var = {vs.DGP2.unconditional_variance:.2f}, "
          f"sample var = {y[1000:].var():.2f}")
    print(f"replay with the same seed is bitwise identical: "
          f"{np.array_equal(y, vs.simulate(segments, seed=7)[0])}")


if __name__ == "__main__":
    main()
