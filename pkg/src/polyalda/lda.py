"""Collapsed Gibbs samplers for topic models.

Two training variants share one sweep kernel. Standard training keeps the
hyperparameters fixed through a burn-in period and then refits them on a
schedule with the fixed-point estimator (asymmetric document-topic prior,
symmetric or asymmetric topic-term prior). The "gn" variant instead applies
one Newton sweep to every alpha and every beta component before each Gibbs
sweep, so both priors become fully asymmetric as training proceeds.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._kernels import gibbs_sweep_kernel
from .corpus import Corpus, Vocabulary
from .estimators import EstimatorConfig, estimate_minka_fpi, gn_sweep
from .polya import CountHistograms, Histogram, SampleSet

__all__ = [
    "HYPER_FIXED",
    "HYPER_ASYM_ALPHA_SYM_BETA",
    "HYPER_ASYM_BOTH",
    "TrainConfig",
    "TopicModelState",
    "TrainedModel",
    "init_topic_state",
    "gibbs_sweep",
    "token_conditional",
    "refit_hyperparameters_fpi",
    "gn_update_alpha",
    "gn_update_beta",
    "train_lda",
    "train_lda_gn",
    "save_model",
    "load_model",
]

logger = logging.getLogger(__name__)

HYPER_FIXED = "fixed"
HYPER_ASYM_ALPHA_SYM_BETA = "asymmetric_alpha_symmetric_beta"
HYPER_ASYM_BOTH = "asymmetric_both"
_HYPER_MODES = (HYPER_FIXED, HYPER_ASYM_ALPHA_SYM_BETA, HYPER_ASYM_BOTH)

VARIANT_LDA = "lda"
VARIANT_LDA_GN = "lda_gn"


@dataclass(frozen=True)
class TrainConfig:
    """Sampler schedule and prior initialization.

    ``alpha_init_total`` spreads evenly over topics (alpha_k = total/K);
    ``beta_init`` applies to every term. The prior upper bounds are the
    parameters of the non-informative uniform priors in the "gn" variant;
    they cancel from every conditional and act only as clamps.
    """

    n_topics: int
    iterations: int = 2000
    burn_in: int = 50
    hyper_update_interval: int = 20
    seed: int = 42
    alpha_init_total: float = 50.0
    beta_init: float = 0.01
    hyper_mode: str = HYPER_ASYM_ALPHA_SYM_BETA
    gn_burn_in: int = 10
    average_samples: bool = False
    prior_alpha_bound: float = 1e6
    prior_beta_bound: float = 1e6

    def __post_init__(self):
        if self.n_topics < 1:
            raise ValueError("n_topics must be >= 1")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if not 0 <= self.burn_in < self.iterations:
            raise ValueError("need 0 <= burn_in < iterations")
        if self.hyper_update_interval < 1:
            raise ValueError("hyper_update_interval must be >= 1")
        if self.hyper_mode not in _HYPER_MODES:
            raise ValueError(f"hyper_mode must be one of {_HYPER_MODES}")
        if self.alpha_init_total <= 0 or self.beta_init <= 0:
            raise ValueError("initial concentrations must be positive")
        if self.gn_burn_in < 0:
            raise ValueError("gn_burn_in must be >= 0")


@dataclass
class TopicModelState:
    """Mutable sampler state: assignments plus the three count tables."""

    z: np.ndarray       # flat int32 topic assignment per token position
    n_dk: np.ndarray    # (M, K) words in doc d on topic k
    n_kv: np.ndarray    # (K, V) instances of term v on topic k
    n_k: np.ndarray     # (K,) words on topic k
    alpha: np.ndarray   # (K,) document-topic concentration
    beta: np.ndarray    # (V,) topic-term concentration
    beta_sum: float

    @property
    def n_topics(self) -> int:
        return self.n_k.shape[0]

    def assignments(self, corpus: Corpus) -> list[np.ndarray]:
        """Per-document views of the flat assignment vector."""
        bounds = np.cumsum(corpus.doc_lengths)[:-1]
        return np.split(self.z, bounds)

    def check_counts(self, corpus: Corpus) -> None:
        """Raise if any count identity is violated (defect check)."""
        if not np.array_equal(self.n_dk.sum(axis=1), corpus.doc_lengths):
            raise AssertionError("document-topic counts do not sum to document lengths")
        if not np.array_equal(self.n_kv.sum(axis=1), self.n_k):
            raise AssertionError("topic-term counts do not sum to topic totals")
        if int(self.n_k.sum()) != corpus.total_words:
            raise AssertionError("topic totals do not sum to the corpus word count")


@dataclass(frozen=True)
class TrainedModel:
    """Final point estimates of a trained topic model."""

    theta: np.ndarray   # (M, K) document-topic mixtures
    phi: np.ndarray     # (K, V) topic-term distributions
    alpha: np.ndarray
    beta: np.ndarray
    variant: str
    vocabulary: Vocabulary | None = None

    @property
    def n_topics(self) -> int:
        return self.phi.shape[0]

    @property
    def n_terms(self) -> int:
        return self.phi.shape[1]

    @property
    def n_docs(self) -> int:
        return self.theta.shape[0]


def init_topic_state(corpus: Corpus, n_topics: int, alpha: np.ndarray, beta: np.ndarray,
                     rng: np.random.Generator) -> TopicModelState:
    """Uniformly random assignments and the count tables they imply."""
    m, v = corpus.n_docs, corpus.n_terms
    z = rng.integers(0, n_topics, size=corpus.total_words, dtype=np.int32)
    doc_ids = corpus.doc_ids_flat
    tokens = corpus.tokens_flat
    n_dk = np.zeros((m, n_topics), dtype=np.int64)
    np.add.at(n_dk, (doc_ids, z), 1)
    n_kv = np.zeros((n_topics, v), dtype=np.int64)
    np.add.at(n_kv, (z, tokens), 1)
    n_k = np.bincount(z, minlength=n_topics).astype(np.int64)
    alpha = np.asarray(alpha, dtype=np.float64).copy()
    beta = np.asarray(beta, dtype=np.float64).copy()
    return TopicModelState(z, n_dk, n_kv, n_k, alpha, beta, float(beta.sum()))


def gibbs_sweep(state: TopicModelState, corpus: Corpus, rng: np.random.Generator) -> TopicModelState:
    """Re-sample every token position once, in document order."""
    uniforms = rng.random(corpus.total_words)
    gibbs_sweep_kernel(
        corpus.tokens_flat, corpus.doc_ids_flat, state.z,
        state.n_dk, state.n_kv, state.n_k,
        state.alpha, state.beta, state.beta_sum, uniforms,
    )
    return state


def token_conditional(state: TopicModelState, d: int, v: int) -> np.ndarray:
    """Normalized topic conditional for a token of term v in document d,
    given that the token's own counts are already excluded from the state."""
    p = (state.n_dk[d] + state.alpha) * (state.n_kv[:, v] + state.beta[v]) / (state.n_k + state.beta_sum)
    return p / p.sum()


def _theta(state: TopicModelState, doc_lengths: np.ndarray) -> np.ndarray:
    alpha_sum = state.alpha.sum()
    return (state.n_dk + state.alpha) / (doc_lengths[:, None] + alpha_sum)


def _phi(state: TopicModelState) -> np.ndarray:
    return (state.n_kv + state.beta) / (state.n_k[:, None] + state.beta_sum)


def refit_hyperparameters_fpi(state: TopicModelState, mode: str,
                              est_cfg: EstimatorConfig) -> None:
    """Refit alpha (and per mode beta) from the current count tables.

    A failed fit leaves the previous values in place.
    """
    try:
        fit = estimate_minka_fpi(SampleSet.from_matrix(state.n_dk), est_cfg)
        state.alpha = fit.params.alpha.copy()
    except ValueError as exc:
        logger.warning("alpha refit failed, keeping previous values: %s", exc)
    if mode == HYPER_ASYM_ALPHA_SYM_BETA or mode == HYPER_ASYM_BOTH:
        try:
            fit = estimate_minka_fpi(SampleSet.from_matrix(state.n_kv), est_cfg)
            beta = fit.params.alpha
            if mode == HYPER_ASYM_ALPHA_SYM_BETA:
                # symmetric prior with the fitted total concentration preserved
                beta = np.full(beta.shape[0], float(beta.mean()))
            state.beta = beta.copy()
            state.beta_sum = float(beta.sum())
        except ValueError as exc:
            logger.warning("beta refit failed, keeping previous values: %s", exc)


def _column_histograms(matrix: np.ndarray, lengths: Histogram) -> CountHistograms:
    per_dim = tuple(Histogram.from_values(matrix[:, i]) for i in range(matrix.shape[1]))
    return CountHistograms(per_dim=per_dim, lengths=lengths, n_samples=matrix.shape[0])


def gn_update_alpha(state: TopicModelState, doc_length_hist: Histogram,
                    est_cfg: EstimatorConfig) -> None:
    """One Newton sweep over all alpha components against the document rows."""
    hists = _column_histograms(state.n_dk, doc_length_hist)
    state.alpha = gn_sweep(state.alpha, hists, est_cfg)


def gn_update_beta(state: TopicModelState, est_cfg: EstimatorConfig) -> None:
    """One Newton sweep over all beta components against the topic rows."""
    hists = _column_histograms(state.n_kv, Histogram.from_values(state.n_k))
    state.beta = gn_sweep(state.beta, hists, est_cfg)
    state.beta_sum = float(state.beta.sum())


def _finalize(state: TopicModelState, corpus: Corpus, variant: str,
              averaged: tuple[np.ndarray, np.ndarray, int] | None) -> TrainedModel:
    if averaged is not None and averaged[2] > 0:
        theta_acc, phi_acc, n = averaged
        theta, phi = theta_acc / n, phi_acc / n
    else:
        theta, phi = _theta(state, corpus.doc_lengths), _phi(state)
    return TrainedModel(
        theta=theta, phi=phi, alpha=state.alpha.copy(), beta=state.beta.copy(),
        variant=variant, vocabulary=corpus.vocabulary,
    )


def _init_from_config(corpus: Corpus, cfg: TrainConfig, rng: np.random.Generator) -> TopicModelState:
    alpha0 = np.full(cfg.n_topics, cfg.alpha_init_total / cfg.n_topics)
    beta0 = np.full(corpus.n_terms, cfg.beta_init)
    return init_topic_state(corpus, cfg.n_topics, alpha0, beta0, rng)


def train_lda(corpus: Corpus, cfg: TrainConfig, on_sweep=None) -> TrainedModel:
    """Standard collapsed-Gibbs training with scheduled hyperparameter refits.

    Hyperparameters stay at their initial values through ``burn_in`` sweeps,
    then are refit every ``hyper_update_interval`` sweeps (unless the mode is
    "fixed"). ``on_sweep(iteration, state)`` is called after every sweep.
    """
    rng = np.random.default_rng(cfg.seed)
    state = _init_from_config(corpus, cfg, rng)
    est_cfg = EstimatorConfig(alpha_cap=cfg.prior_alpha_bound)
    acc = None
    if cfg.average_samples:
        acc = [np.zeros_like(state.n_dk, dtype=float), np.zeros_like(state.n_kv, dtype=float), 0]
    for it in range(1, cfg.iterations + 1):
        gibbs_sweep(state, corpus, rng)
        due = it >= cfg.burn_in and (it - cfg.burn_in) % cfg.hyper_update_interval == 0
        if cfg.hyper_mode != HYPER_FIXED and due:
            refit_hyperparameters_fpi(state, cfg.hyper_mode, est_cfg)
        if acc is not None and it > cfg.burn_in:
            acc[0] += _theta(state, corpus.doc_lengths)
            acc[1] += _phi(state)
            acc[2] += 1
        if on_sweep is not None:
            on_sweep(it, state)
    return _finalize(state, corpus, VARIANT_LDA, tuple(acc) if acc else None)


def train_lda_gn(corpus: Corpus, cfg: TrainConfig, on_sweep=None) -> TrainedModel:
    """Training with per-sweep Newton updates of both priors.

    Each iteration first moves every alpha_k one Newton step against the
    document-topic rows and every beta_v one step against the topic-term
    rows (both skipped for the first ``gn_burn_in`` sweeps, while the
    assignments are still noise), then runs a Gibbs sweep.
    """
    rng = np.random.default_rng(cfg.seed)
    state = _init_from_config(corpus, cfg, rng)
    alpha_cfg = EstimatorConfig(alpha_cap=cfg.prior_alpha_bound)
    beta_cfg = EstimatorConfig(alpha_cap=cfg.prior_beta_bound)
    doc_length_hist = Histogram.from_values(corpus.doc_lengths)
    acc = None
    if cfg.average_samples:
        acc = [np.zeros_like(state.n_dk, dtype=float), np.zeros_like(state.n_kv, dtype=float), 0]
    for it in range(1, cfg.iterations + 1):
        if it > cfg.gn_burn_in:
            gn_update_alpha(state, doc_length_hist, alpha_cfg)
            gn_update_beta(state, beta_cfg)
        gibbs_sweep(state, corpus, rng)
        if acc is not None and it > cfg.gn_burn_in:
            acc[0] += _theta(state, corpus.doc_lengths)
            acc[1] += _phi(state)
            acc[2] += 1
        if on_sweep is not None:
            on_sweep(it, state)
    return _finalize(state, corpus, VARIANT_LDA_GN, tuple(acc) if acc else None)


def save_model(model: TrainedModel, path) -> None:
    """Versioned text format; floats keep full round-trip precision."""
    if model.vocabulary is None:
        raise ValueError("cannot save a model without its vocabulary")
    lines = [
        f"ldamodel v1 variant={model.variant} K={model.n_topics} V={model.n_terms} M={model.n_docs}",
        "alpha: " + " ".join(repr(float(a)) for a in model.alpha),
        "beta: " + " ".join(repr(float(b)) for b in model.beta),
    ]
    for row in model.phi:
        lines.append(" ".join(repr(float(x)) for x in row))
    for row in model.theta:
        lines.append(" ".join(repr(float(x)) for x in row))
    lines.extend(model.vocabulary.terms)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_model(path) -> TrainedModel:
    text = Path(path).read_text(encoding="utf-8").splitlines()
    if not text:
        raise ValueError(f"{path}: empty model file")
    header = text[0].split()
    if len(header) != 6 or header[0] != "ldamodel" or header[1] != "v1":
        raise ValueError(f"{path}: not a v1 model file: {text[0]!r}")
    fields = dict(part.split("=", 1) for part in header[2:])
    variant = fields["variant"]
    if variant not in (VARIANT_LDA, VARIANT_LDA_GN):
        raise ValueError(f"{path}: unknown variant {variant!r}")
    k, v, m = int(fields["K"]), int(fields["V"]), int(fields["M"])
    expected = 3 + k + m + v
    if len(text) < expected:
        raise ValueError(f"{path}: truncated model file ({len(text)} lines, need {expected})")

    def floats(line: str, prefix: str = "") -> np.ndarray:
        if prefix:
            if not line.startswith(prefix):
                raise ValueError(f"{path}: expected {prefix!r} line, got {line!r}")
            line = line[len(prefix):]
        return np.array([float(x) for x in line.split()], dtype=np.float64)

    alpha = floats(text[1], "alpha:")
    beta = floats(text[2], "beta:")
    phi = np.vstack([floats(text[3 + i]) for i in range(k)])
    theta = np.vstack([floats(text[3 + k + i]) for i in range(m)])
    vocab = Vocabulary(tuple(text[3 + k + m: 3 + k + m + v]))
    if alpha.shape != (k,) or beta.shape != (v,) or phi.shape != (k, v) or theta.shape != (m, k):
        raise ValueError(f"{path}: model file dimensions are inconsistent")
    return TrainedModel(theta=theta, phi=phi, alpha=alpha, beta=beta,
                        variant=variant, vocabulary=vocab)
