"""Count-vector containers and multivariate Polya likelihood kernels.

Count data lives in two forms: raw sample matrices (for moment statistics)
and sparse per-dimension histograms. The histograms let digamma, trigamma
and log-gamma differences at integer offsets be evaluated with plain
cumulative sums, so none of the likelihood machinery needs a special
function call.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

__all__ = [
    "CountVector",
    "SampleSet",
    "Histogram",
    "CountHistograms",
    "PolyaParams",
    "build_histograms",
    "digamma_diff_sum",
    "trigamma_diff_sum",
    "log_rising_sum",
    "polya_log_likelihood",
    "polya_log_likelihood_hist",
    "read_samples",
    "write_samples",
]


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class CountVector:
    """One multinomial observation: non-negative counts per dimension."""

    counts: tuple[int, ...]
    total: int = -1  # derived; filled in __post_init__

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if len(counts) == 0:
            raise ValueError("count vector must have at least one dimension")
        if any(c < 0 for c in counts):
            raise ValueError("counts must be non-negative")
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "total", sum(counts))

    @property
    def dimension(self) -> int:
        return len(self.counts)


class SampleSet:
    """Immutable batch of count vectors sharing one dimension.

    Stored as an (N, K) int64 matrix. An empty batch is permitted (its
    log-likelihood is the empty product) but then the dimension must be
    given explicitly.
    """

    def __init__(self, samples: Iterable, dimension: int | None = None):
        rows = [s.counts if isinstance(s, CountVector) else tuple(s) for s in samples]
        if rows:
            mat = np.asarray(rows, dtype=np.int64)
            if mat.ndim != 2:
                raise ValueError("samples must share a common dimension")
            if dimension is not None and dimension != mat.shape[1]:
                raise ValueError(
                    f"explicit dimension {dimension} != sample dimension {mat.shape[1]}"
                )
        else:
            if dimension is None:
                raise ValueError("an empty sample set needs an explicit dimension")
            mat = np.zeros((0, dimension), dtype=np.int64)
        if mat.shape[1] < 1:
            raise ValueError("dimension must be >= 1")
        if (mat < 0).any():
            raise ValueError("counts must be non-negative")
        self._matrix = _readonly(mat)

    @classmethod
    def from_matrix(cls, matrix) -> "SampleSet":
        matrix = np.asarray(matrix)
        return cls(matrix, dimension=matrix.shape[1] if matrix.ndim == 2 else None)

    @property
    def matrix(self) -> np.ndarray:
        """(N, K) read-only count matrix."""
        return self._matrix

    @property
    def n_samples(self) -> int:
        return self._matrix.shape[0]

    @property
    def dimension(self) -> int:
        return self._matrix.shape[1]

    @property
    def totals(self) -> np.ndarray:
        return self._matrix.sum(axis=1)

    @property
    def samples(self) -> tuple[CountVector, ...]:
        return tuple(CountVector(tuple(row)) for row in self._matrix)

    def __len__(self) -> int:
        return self.n_samples

    def __repr__(self) -> str:
        return f"SampleSet(n_samples={self.n_samples}, dimension={self.dimension})"


@dataclass(frozen=True)
class Histogram:
    """Sparse histogram over positive integer values, ascending.

    ``values[i]`` occurred ``freqs[i]`` times; zeros are never stored, so
    ``dim`` (the largest stored value) doubles as the cumulative-sum length
    needed by the recurrence kernels.
    """

    values: np.ndarray
    freqs: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=np.int64)
        freqs = np.array(self.freqs, dtype=np.int64)
        if values.shape != freqs.shape or values.ndim != 1:
            raise ValueError("values and freqs must be 1-d and congruent")
        if values.size and (values[0] < 1 or (np.diff(values) <= 0).any()):
            raise ValueError("values must be strictly increasing and >= 1")
        if (freqs < 1).any():
            raise ValueError("frequencies must be positive")
        object.__setattr__(self, "values", _readonly(values))
        object.__setattr__(self, "freqs", _readonly(freqs))

    @classmethod
    def from_values(cls, values: Iterable[int]) -> "Histogram":
        arr = np.asarray(list(values), dtype=np.int64)
        arr = arr[arr > 0]  # zero observations contribute nothing
        uniq, cnt = np.unique(arr, return_counts=True)
        return cls(uniq, cnt)

    @property
    def is_empty(self) -> bool:
        return self.values.size == 0

    @property
    def dim(self) -> int:
        """Largest stored value (0 when empty)."""
        return int(self.values[-1]) if self.values.size else 0

    @property
    def n_observations(self) -> int:
        return int(self.freqs.sum())

    @property
    def mass(self) -> int:
        """Sum of all underlying observations, sum_m m * freq[m]."""
        return int(self.values @ self.freqs)


@dataclass(frozen=True)
class CountHistograms:
    """Per-dimension count histograms plus the histogram of sample totals."""

    per_dim: tuple[Histogram, ...]
    lengths: Histogram
    n_samples: int

    @property
    def dimension(self) -> int:
        return len(self.per_dim)

    @property
    def dims(self) -> tuple[int, ...]:
        """Histogram lengths, one per dimension."""
        return tuple(h.dim for h in self.per_dim)


@dataclass(frozen=True)
class PolyaParams:
    """Concentration vector of a multivariate Polya distribution."""

    alpha: np.ndarray
    alpha_sum: float = float("nan")  # derived; filled in __post_init__

    def __post_init__(self):
        alpha = np.array(self.alpha, dtype=np.float64)
        if alpha.ndim != 1 or alpha.size < 1:
            raise ValueError("alpha must be a non-empty vector")
        if not np.isfinite(alpha).all() or (alpha <= 0).any():
            raise ValueError("alpha components must be strictly positive and finite")
        object.__setattr__(self, "alpha", _readonly(alpha))
        object.__setattr__(self, "alpha_sum", float(alpha.sum()))

    @property
    def dimension(self) -> int:
        return self.alpha.shape[0]


def build_histograms(samples: SampleSet) -> CountHistograms:
    """Histogram a sample batch: counts per dimension and sample totals.

    Zero counts are omitted, so a sample with total 0 appears in no
    histogram at all.
    """
    if samples.n_samples == 0:
        raise ValueError("cannot histogram an empty sample set")
    mat = samples.matrix
    per_dim = tuple(Histogram.from_values(mat[:, i]) for i in range(samples.dimension))
    lengths = Histogram.from_values(samples.totals)
    return CountHistograms(per_dim=per_dim, lengths=lengths, n_samples=samples.n_samples)


def _check_domain(x: float) -> float:
    x = float(x)
    if not x > 0:
        raise ValueError(f"argument must be positive, got {x}")
    return x


def digamma_diff_sum(x: float, hist: Histogram) -> float:
    """sum_m freq[m] * (psi(x + m) - psi(x)) via the digamma recurrence.

    Evaluated as one cumulative sum of 1/(x + l - 1), l = 1..dim, so each
    reciprocal is computed exactly once no matter how many histogram cells
    share it.
    """
    x = _check_domain(x)
    if hist.is_empty:
        return 0.0
    csum = np.cumsum(1.0 / (x + np.arange(hist.dim, dtype=np.float64)))
    return float(hist.freqs @ csum[hist.values - 1])


def trigamma_diff_sum(x: float, hist: Histogram) -> float:
    """sum_m freq[m] * (psi1(x + m) - psi1(x)); always <= 0."""
    x = _check_domain(x)
    if hist.is_empty:
        return 0.0
    recip = 1.0 / (x + np.arange(hist.dim, dtype=np.float64))
    csum = np.cumsum(-recip * recip)
    return float(hist.freqs @ csum[hist.values - 1])


def log_rising_sum(x: float, hist: Histogram) -> float:
    """sum_m freq[m] * log(Gamma(x + m) / Gamma(x)) via log cumulative sums."""
    x = _check_domain(x)
    if hist.is_empty:
        return 0.0
    csum = np.cumsum(np.log(x + np.arange(hist.dim, dtype=np.float64)))
    return float(hist.freqs @ csum[hist.values - 1])


def polya_log_likelihood_hist(params: PolyaParams, hists: CountHistograms) -> float:
    """Polya log-likelihood from pre-built histograms (deterministic order)."""
    if params.dimension != hists.dimension:
        raise ValueError(
            f"parameter dimension {params.dimension} != data dimension {hists.dimension}"
        )
    total = -log_rising_sum(params.alpha_sum, hists.lengths)
    for a_i, h_i in zip(params.alpha, hists.per_dim):
        total += log_rising_sum(float(a_i), h_i)
    return total


def polya_log_likelihood(params: PolyaParams, samples: SampleSet) -> float:
    """log L(alpha | samples) for the multivariate Polya distribution.

    The empty sample set gives 0 (empty product); samples with total 0
    contribute nothing.
    """
    if params.dimension != samples.dimension:
        raise ValueError(
            f"parameter dimension {params.dimension} != data dimension {samples.dimension}"
        )
    if samples.n_samples == 0:
        return 0.0
    return polya_log_likelihood_hist(params, build_histograms(samples))


def read_samples(path) -> SampleSet:
    """Read a sample set from text: one sample per line, whitespace-separated
    non-negative integers; blank lines and lines starting with '#' ignored."""
    rows = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append(tuple(int(tok) for tok in line.split()))
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: not a count vector: {line!r}") from exc
    if not rows:
        raise ValueError(f"{path}: no samples found")
    return SampleSet(rows)


def write_samples(samples: SampleSet, path) -> None:
    lines = [" ".join(str(c) for c in row) for row in samples.matrix]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
