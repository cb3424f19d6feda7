"""
One-step semiparametric likelihood vs Gaussian QMLE
===================================================

The semiparametric objective replaces the Gaussian density in the GARCH
likelihood with a kernel estimate built from the residuals implied by the
very parameter vector under evaluation, so the density estimate moves with
theta inside a single optimization.  With heavy-tailed innovations this
tracks the true likelihood much more closely than the Gaussian QMLE.
"""

import numpy as np

import volseg as vs


def main():
    n = 3000
    y, _, _ = vs.simulate(
        [vs.DgpSegmentSpec("garch11", vs.DGP1, n, vs.student_t(6))], seed=11
    )
    s1 = float(np.var(y, ddof=1))

    print("=" * 70)
    print("1. Objectives at the true parameters (t6 innovations)")
    print("=" * 70)
    print(f"-2 loglik, Gaussian QMLE : {vs.qmle_neg2ll(vs.DGP1, y, vs.gaussian(), s1):12.2f}")
    print(f"-2 loglik, t6 MLE        : {vs.qmle_neg2ll(vs.DGP1, y, vs.student_t(6), s1):12.2f}")
    print(f"-2 loglik, one-step SMLE : {vs.smle_neg2ll(vs.DGP1, y):12.2f}")
    print()
    print("The kernel-based objective sits near the (infeasible) true-density")
    print("MLE without being told the innovation family.")
    print()

    print("=" * 70)
    print("2. Fitted parameters (truth: omega=0.1, alpha=0.05, beta=0.9)")
    print("=" * 70)
    for spec in (vs.EstimatorSpec("qmle"), vs.EstimatorSpec("smle")):
        r = vs.fit(spec, y)
        p = r.params
        print(f"{spec.label:>24}: omega={p.omega:7.4f} alpha={p.alpha:7.4f} "
              f"beta={p.beta:7.4f}  (converged={r.converged}, "
              f"{r.iterations} evaluations)")

    print()
    print("=" * 70)
    print("3. The defining feature: the bandwidth moves with theta")
    print("=" * 70)
    for params in (vs.GarchParams(0.1, 0.05, 0.9), vs.GarchParams(0.4, 0.2, 0.5)):
        eps = vs.residuals(params, y, standardized=True)
        print(f"theta = ({params.omega}, {params.alpha}, {params.beta}): "
              f"rule-of-thumb h = {vs.nrd_bandwidth(eps):.4f}")


if __name__ == "__main__":
    main()
