"""Synthetic multivariate Polya data and the estimator benchmark harness.

Every random quantity is drawn from a numpy ``Generator`` backed by PCG64;
benchmark cells get independent streams derived from (seed, cell, repeat) so
tables are reproducible across machines regardless of evaluation order.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass
from itertools import product

import numpy as np

from .estimators import EstimatorConfig, estimate_gn, estimate_minka_fpi, estimate_moments
from .polya import CountVector, PolyaParams, SampleSet

__all__ = [
    "BenchGrid",
    "BenchRecord",
    "sample_polya",
    "sample_alpha_uniform",
    "make_sample_set",
    "run_accuracy_bench",
    "run_speed_bench",
    "write_bench_csv",
    "read_bench_csv",
]

CSV_HEADER = ("method", "n_samples", "n_elements", "iterations", "time_ms", "mean_abs_err", "max_abs_err")


@dataclass(frozen=True)
class BenchGrid:
    """Experiment grid: the cross product of sample counts and element counts."""

    dimension: int
    alpha_upper: float
    sample_counts: tuple[int, ...]
    element_counts: tuple[int, ...]
    repeats: int = 10
    seed: int = 42

    def __post_init__(self):
        object.__setattr__(self, "sample_counts", tuple(int(n) for n in self.sample_counts))
        object.__setattr__(self, "element_counts", tuple(int(n) for n in self.element_counts))
        if self.dimension < 1 or self.alpha_upper <= 0:
            raise ValueError("dimension must be >= 1 and alpha_upper > 0")
        if min(self.sample_counts, default=0) < 1 or min(self.element_counts, default=0) < 1:
            raise ValueError("all grid axis values must be >= 1")
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")

    def cells(self):
        return product(self.sample_counts, self.element_counts)


@dataclass(frozen=True)
class BenchRecord:
    """One benchmark measurement: a method on one grid cell, repeats averaged."""

    method: str
    n_samples: int
    n_elements: int
    iterations: int
    time_ms: float
    per_component_abs_error: tuple[float, ...]
    converged: bool = True

    @property
    def mean_abs_err(self) -> float:
        return float(np.mean(self.per_component_abs_error))

    @property
    def max_abs_err(self) -> float:
        return float(np.max(self.per_component_abs_error))

    def csv_row(self) -> tuple:
        return (
            self.method,
            self.n_samples,
            self.n_elements,
            self.iterations,
            self.time_ms,
            self.mean_abs_err,
            self.max_abs_err,
        )


def sample_polya(params: PolyaParams, n_elements: int, rng: np.random.Generator) -> CountVector:
    """Draw one count vector: rho ~ Dirichlet(alpha), then n_elements
    categorical draws from rho."""
    if n_elements < 0:
        raise ValueError("n_elements must be >= 0")
    if n_elements == 0:
        return CountVector((0,) * params.dimension)
    gammas = rng.gamma(params.alpha)
    total = gammas.sum()
    while total == 0.0:  # all-underflow is possible for tiny shapes
        gammas = rng.gamma(params.alpha)
        total = gammas.sum()
    counts = rng.multinomial(n_elements, gammas / total)
    return CountVector(tuple(int(c) for c in counts))


def sample_alpha_uniform(k: int, upper: float, rng: np.random.Generator) -> PolyaParams:
    """Each alpha_i ~ Uniform(0, upper]: draw on [0, upper) and reject exact 0."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if upper <= 0:
        raise ValueError("upper must be positive")
    alpha = rng.uniform(0.0, upper, size=k)
    while True:
        zeros = alpha == 0.0
        if not zeros.any():
            break
        alpha[zeros] = rng.uniform(0.0, upper, size=int(zeros.sum()))
    return PolyaParams(alpha)


def make_sample_set(params: PolyaParams, n_samples: int, n_elements: int,
                    rng: np.random.Generator) -> SampleSet:
    """N independent Polya draws with a common element count."""
    return SampleSet([sample_polya(params, n_elements, rng) for _ in range(n_samples)])


def _cell_rng(grid: BenchGrid, cell_index: int, repeat: int) -> np.random.Generator:
    return np.random.default_rng([grid.seed, cell_index, repeat])


def _run_one(method: str, samples: SampleSet, cfg: EstimatorConfig):
    """Time one estimation; returns (alpha, iterations, converged, millis)."""
    t0 = time.perf_counter()
    if method == "moments":
        params = estimate_moments(samples, cfg)
        iterations, converged = 0, True
    else:
        fit = estimate_minka_fpi(samples, cfg) if method == "fpi" else estimate_gn(samples, cfg)
        params, iterations, converged = fit.params, fit.iterations, fit.converged
    millis = (time.perf_counter() - t0) * 1e3
    return params.alpha, iterations, converged, millis


def _bench(grid: BenchGrid, methods: tuple[str, ...], cfg: EstimatorConfig) -> list[BenchRecord]:
    records = []
    for cell_index, (n_samples, n_elements) in enumerate(grid.cells()):
        sums = {
            m: {"err": np.zeros(grid.dimension), "ms": 0.0, "iters": 0, "conv": True, "fails": 0}
            for m in methods
        }
        for repeat in range(grid.repeats):
            rng = _cell_rng(grid, cell_index, repeat)
            truth = sample_alpha_uniform(grid.dimension, grid.alpha_upper, rng)
            samples = make_sample_set(truth, n_samples, n_elements, rng)
            for m in methods:
                acc = sums[m]
                try:
                    alpha, iters, conv, ms = _run_one(m, samples, cfg)
                except ValueError:
                    acc["fails"] += 1
                    acc["conv"] = False
                    continue
                acc["err"] += np.abs(alpha - truth.alpha)
                acc["ms"] += ms
                acc["iters"] += iters
                acc["conv"] = acc["conv"] and conv
        for m in methods:
            acc = sums[m]
            ok = grid.repeats - acc["fails"]
            if ok == 0:
                errs = (float("nan"),) * grid.dimension
                records.append(BenchRecord(m, n_samples, n_elements, 0, 0.0, errs, False))
                continue
            records.append(
                BenchRecord(
                    method=m,
                    n_samples=n_samples,
                    n_elements=n_elements,
                    iterations=int(round(acc["iters"] / ok)),
                    time_ms=acc["ms"] / ok,
                    per_component_abs_error=tuple(acc["err"] / ok),
                    converged=acc["conv"],
                )
            )
    return records


def run_accuracy_bench(grid: BenchGrid, cfg: EstimatorConfig = EstimatorConfig()) -> list[BenchRecord]:
    """Per cell: draw a true alpha, generate data, fit with all three methods,
    and record per-component absolute errors (averaged over repeats)."""
    return _bench(grid, ("moments", "fpi", "gn"), cfg)


def run_speed_bench(grid: BenchGrid, cfg: EstimatorConfig = EstimatorConfig()) -> list[BenchRecord]:
    """Per cell: time the two iterative estimators to convergence."""
    return _bench(grid, ("fpi", "gn"), cfg)


def write_bench_csv(records: list[BenchRecord], path) -> None:
    """Write records with full round-trip float formatting."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for rec in records:
            method, n, e, iters, ms, mean_err, max_err = rec.csv_row()
            writer.writerow([method, n, e, iters, repr(ms), repr(mean_err), repr(max_err)])


def read_bench_csv(path) -> list[tuple]:
    """Read rows written by ``write_bench_csv``, types restored."""
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != CSV_HEADER:
            raise ValueError(f"{path}: unexpected CSV header {header}")
        for row in reader:
            method, n, e, iters, ms, mean_err, max_err = row
            rows.append((method, int(n), int(e), int(iters), float(ms), float(mean_err), float(max_err)))
    return rows
