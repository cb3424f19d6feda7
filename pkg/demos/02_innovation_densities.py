"""
Standardized innovation distributions
=====================================

All supported innovation families are standardized to mean 0 and variance 1,
so they can drive the GARCH scale without an identification problem.  This
script tabulates densities, verifies the moments by simulation, and shows
the right-skewed variants used in the asymmetric-model comparison.
"""

import numpy as np

import volseg as vs


def main():
    dists = [
        vs.gaussian(),
        vs.ged(1.5),
        vs.ged(2.0),
        vs.student_t(6),
        vs.gaussian(xi=4.0),
        vs.ged(1.5, xi=4.0),
        vs.student_t(6, xi=4.0),
    ]

    print(f"{'distribution':>24} {'pdf(0)':>9} {'E|Z|':>8} "
          f"{'mean':>8} {'var':>7} {'skew':>7} {'ex.kurt':>8}")
    print("-" * 76)
    for d in dists:
        x = d.sample(200_000, seed=1)
        skew = ((x - x.mean()) ** 3).mean() / x.std() ** 3
        kurt = ((x - x.mean()) ** 4).mean() / x.var() ** 2 - 3
        print(f"{d.name:>24} {d.pdf(0.0):9.5f} {d.mean_abs():8.5f} "
              f"{x.mean():8.4f} {x.var():7.4f} {skew:7.3f} {kurt:8.3f}")

    print()
    print("Notes: GED(2) coincides with the Gaussian; GED(1.5) and t(6) are")
    print("fat-tailed (positive excess kurtosis); xi = 4 variants are")
    print("right-skewed while keeping mean 0 and variance 1.")


if __name__ == "__main__":
    main()
