"""Fit multivariate Polya concentrations three ways and compare.

Draws synthetic count vectors from a known concentration vector, then runs
the Moments closed form, the fixed-point iteration, and the per-sweep Newton
method ("gn") on the same data. The two iterative methods maximize the same
likelihood, so they land on the same answer; the interesting difference is
how many sweeps each needs.
"""

import numpy as np

from polyalda import (
    EstimatorConfig,
    PolyaParams,
    SampleSet,
    estimate_gn,
    estimate_minka_fpi,
    estimate_moments,
    sample_polya,
)

rng = np.random.default_rng(7)
truth = PolyaParams(np.array([0.2, 0.5, 0.9, 1.4]))
print(f"true alpha        : {np.round(truth.alpha, 4)}")

samples = SampleSet([sample_polya(truth, 2000, rng) for _ in range(400)])
print(f"data              : {samples.n_samples} samples, {samples.dimension} dimensions, "
      f"{int(samples.totals.sum())} total elements\n")

moments = estimate_moments(samples)
print(f"moments           : {np.round(moments.alpha, 4)}  (closed form, no iteration)")

cfg = EstimatorConfig(tolerance=1e-6)
for name, run in (("fixed-point", estimate_minka_fpi), ("newton (gn)", estimate_gn)):
    fit = run(samples, cfg)
    err = np.abs(fit.params.alpha - truth.alpha).mean()
    print(f"{name:<18}: {np.round(fit.params.alpha, 4)}  "
          f"({fit.iterations} sweeps, mean abs err {err:.4f}, loglik {fit.final_log_likelihood:.2f})")

print("\nBoth iterative fits agree because they maximize the same likelihood;")
print("the newton variant converges in a fraction of the sweeps.")
