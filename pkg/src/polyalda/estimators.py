"""Maximum-likelihood estimators for multivariate Polya parameters.

Three methods: the closed-form Moments approximation (also the initializer
for the other two), Minka's fixed-point iteration, and the per-sweep Newton
scheme ("gn") that refreshes the concentration total between sweeps. Both
iterative methods run on count histograms and report sweep counts, so their
speed can be compared like-for-like.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .polya import (
    CountHistograms,
    PolyaParams,
    SampleSet,
    build_histograms,
    digamma_diff_sum,
    polya_log_likelihood_hist,
    trigamma_diff_sum,
)

__all__ = [
    "EstimatorConfig",
    "EstimateResult",
    "estimate_moments",
    "estimate_minka_fpi",
    "estimate_gn",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EstimatorConfig:
    """Convergence and clamping knobs shared by the iterative estimators.

    Convergence is declared when max_i |new alpha_i - old alpha_i| drops
    below ``tolerance``. The floor/cap clamps keep every estimate strictly
    positive and finite; they are guards, not part of either update rule.
    """

    tolerance: float = 1e-6
    max_iterations: int = 1000
    alpha_floor: float = 1e-10
    alpha_cap: float = 1e6

    def __post_init__(self):
        if not 0 < self.tolerance < 1:
            raise ValueError("tolerance must be in (0, 1)")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not 0 < self.alpha_floor < self.alpha_cap:
            raise ValueError("need 0 < alpha_floor < alpha_cap")


@dataclass(frozen=True)
class EstimateResult:
    params: PolyaParams
    iterations: int
    converged: bool
    final_log_likelihood: float


def estimate_moments(samples: SampleSet, cfg: EstimatorConfig = EstimatorConfig()) -> PolyaParams:
    """Moment-matching estimate of the Polya concentration vector.

    The concentration total comes from the log-average of the per-dimension
    second-moment expressions over the first K-1 dimensions; dimensions whose
    log argument is non-positive are skipped. With unequal sample totals the
    mean total stands in for the common total. Degenerate data (no usable
    dimension) falls back to the symmetric vector 1/K.
    """
    if samples.n_samples < 2:
        raise ValueError("the Moments method needs at least two samples")
    mat = samples.matrix.astype(np.float64)
    n, k = mat.shape
    pi0 = float(mat.sum(axis=1).mean())
    mean = mat.mean(axis=0)
    var = mat.var(axis=0, ddof=1)

    logs = []
    for i in range(k - 1):
        den = pi0 * (var[i] - mean[i]) + mean[i] ** 2
        if den == 0.0:
            continue
        arg = pi0 * (mean[i] * (pi0 - mean[i]) - var[i]) / den
        if arg > 0 and np.isfinite(arg):
            logs.append(np.log(arg))
    if not logs or pi0 <= 0:
        logger.warning(
            "moments: all %d usable dimensions degenerate; falling back to symmetric 1/K", k - 1
        )
        alpha = np.full(k, 1.0 / k)
    else:
        alpha_sum = float(np.exp(np.mean(logs)))
        alpha = alpha_sum * mean / pi0
    return PolyaParams(np.clip(alpha, cfg.alpha_floor, cfg.alpha_cap))


def fpi_sweep(alpha: np.ndarray, hists: CountHistograms, cfg: EstimatorConfig) -> np.ndarray:
    """One fixed-point sweep: alpha_i <- alpha_i * Nmtr_i / Dntr, clamped."""
    dntr = digamma_diff_sum(float(alpha.sum()), hists.lengths)
    new = np.array(
        [a * digamma_diff_sum(float(a), h) / dntr for a, h in zip(alpha, hists.per_dim)]
    )
    return np.clip(new, cfg.alpha_floor, cfg.alpha_cap)


def gn_sweep(alpha: np.ndarray, hists: CountHistograms, cfg: EstimatorConfig) -> np.ndarray:
    """One Newton sweep on the per-dimension conditionals.

    The total-concentration terms L1/L2 are computed once from the lengths
    histogram and held fixed for the whole sweep; each dimension then takes a
    single Newton step. A negative proposal is replaced by alpha_i/2.

    When the curvature denominator is not positive (flat or locally convex
    conditional) the Newton step does not point at the maximum, so the
    dimension falls back on the gradient sign: halve when the conditional
    decreases in alpha_i (this is what drives a dimension with no data down
    to the floor), otherwise leave it for the next sweep.
    """
    a_sum = float(alpha.sum())
    l1 = digamma_diff_sum(a_sum, hists.lengths)
    l2 = trigamma_diff_sum(a_sum, hists.lengths)
    new = alpha.copy()
    for i, (a, h) in enumerate(zip(alpha, hists.per_dim)):
        a = float(a)
        nmtr = digamma_diff_sum(a, h)
        dntr = trigamma_diff_sum(a, h)
        denom = l2 - dntr
        if denom <= 0:
            if nmtr < l1:
                new[i] = a / 2.0
            else:
                logger.debug("gn: skipping dimension %d (curvature denominator %g)", i, denom)
            continue
        proposal = a - (l1 - nmtr) / denom
        if proposal < 0:
            proposal = a / 2.0
        new[i] = proposal
    return np.clip(new, cfg.alpha_floor, cfg.alpha_cap)


def _iterate(samples: SampleSet, cfg: EstimatorConfig, sweep_fn) -> EstimateResult:
    hists = build_histograms(samples)
    alpha = estimate_moments(samples, cfg).alpha.copy()
    if hists.lengths.is_empty:
        # every sample total is zero: the likelihood is flat, nothing to fit
        params = PolyaParams(alpha)
        return EstimateResult(params, 0, True, 0.0)
    iterations = 0
    converged = False
    for _ in range(cfg.max_iterations):
        new = sweep_fn(alpha, hists, cfg)
        iterations += 1
        delta = float(np.max(np.abs(new - alpha)))
        alpha = new
        if delta < cfg.tolerance:
            converged = True
            break
    params = PolyaParams(alpha)
    return EstimateResult(
        params, iterations, converged, polya_log_likelihood_hist(params, hists)
    )


def estimate_minka_fpi(samples: SampleSet, cfg: EstimatorConfig = EstimatorConfig()) -> EstimateResult:
    """Minka's fixed-point iteration, histogram-accelerated, Moments-initialized."""
    return _iterate(samples, cfg, fpi_sweep)


def estimate_gn(samples: SampleSet, cfg: EstimatorConfig = EstimatorConfig()) -> EstimateResult:
    """Per-sweep Newton estimation ("gn"), Moments-initialized.

    The concentration total is refreshed only between sweeps, which is why a
    single Newton step per dimension per sweep suffices.
    """
    return _iterate(samples, cfg, gn_sweep)
