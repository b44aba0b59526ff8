"""Model evaluation: sequential held-out likelihood, perplexity, merged
two-class topic models, and threshold-sweep classification metrics.

Documents are evaluated independently with per-document random streams
derived from (seed, document index), and reduced in document order, so
every score is reproducible regardless of evaluation order.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from ._kernels import doc_inference_kernel, left_to_right_position
from .corpus import Corpus, Vocabulary
from .lda import TrainedModel

__all__ = [
    "LtrConfig",
    "ScoreConfig",
    "MCLDAModel",
    "ClassificationReport",
    "left_to_right_log_likelihood",
    "perplexity",
    "mc_lda_merge",
    "mc_lda_score",
    "classify",
    "threshold_sweep",
    "SPAM",
    "LEGITIMATE",
]

logger = logging.getLogger(__name__)

SPAM = "spam"
LEGITIMATE = "legitimate"


@dataclass(frozen=True)
class LtrConfig:
    """Particle count and seed for the sequential held-out evaluator."""

    particles: int = 20
    seed: int = 42

    def __post_init__(self):
        if self.particles < 1:
            raise ValueError("particles must be >= 1")


@dataclass(frozen=True)
class ScoreConfig:
    """Inference schedule for classifying held-out documents."""

    inference_sweeps: int = 50
    seed: int = 42

    def __post_init__(self):
        if self.inference_sweeps < 1:
            raise ValueError("inference_sweeps must be >= 1")


@dataclass(frozen=True)
class MCLDAModel:
    """Two class-specific topic models stacked into one classifier.

    Legitimate topics come first; spam topics occupy the id range
    [k_legit, k_legit + k_spam).
    """

    phi: np.ndarray
    alpha: np.ndarray
    k_legit: int
    k_spam: int
    vocabulary: Vocabulary

    @property
    def n_topics(self) -> int:
        return self.k_legit + self.k_spam


@dataclass(frozen=True)
class ClassificationReport:
    threshold: float
    accuracy: float
    precision: float
    recall: float
    f_measure: float
    tp: int
    fp: int
    tn: int
    fn: int

    @classmethod
    def from_confusion(cls, threshold: float, tp: int, fp: int, tn: int, fn: int) -> "ClassificationReport":
        total = tp + fp + tn + fn
        accuracy = (tp + tn) / total if total else 0.0
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f_measure = (2 * precision * recall / (precision + recall)) if precision + recall else 0.0
        return cls(threshold, accuracy, precision, recall, f_measure, tp, fp, tn, fn)


def _check_doc(doc, n_terms: int) -> np.ndarray:
    arr = np.asarray(doc, dtype=np.int32)
    if arr.ndim != 1:
        raise ValueError("a document must be a flat id sequence")
    if arr.size and (arr.min() < 0 or arr.max() >= n_terms):
        raise ValueError("document contains term ids outside the model vocabulary")
    return arr


def left_to_right_log_likelihood(model: TrainedModel, doc, cfg: LtrConfig,
                                 rng: np.random.Generator) -> float:
    """log P(document | model), estimated left to right with R particles.

    Out-of-vocabulary ids are an error here; align the document first.
    """
    tokens = _check_doc(doc, model.n_terms)
    if tokens.size == 0:
        return 0.0
    k = model.n_topics
    alpha_sum = float(model.alpha.sum())
    z = np.zeros(tokens.size, dtype=np.int32)
    counts = np.zeros(k, dtype=np.int64)
    loglik = 0.0
    for t in range(int(tokens.size)):
        uniforms = rng.random(cfg.particles * t + 1)
        p_t = left_to_right_position(tokens, t, z, counts, model.phi, model.alpha,
                                     alpha_sum, cfg.particles, uniforms)
        loglik += math.log(p_t / cfg.particles)
    return float(loglik)


def _align_docs(docs, source_vocab: Vocabulary | None, target_vocab: Vocabulary | None):
    """Re-encode documents into the target vocabulary, dropping unknowns."""
    if target_vocab is None or source_vocab is None or source_vocab.terms == target_vocab.terms:
        return [np.asarray(d, dtype=np.int32) for d in docs], 0
    index = target_vocab.index
    aligned, dropped = [], 0
    for doc in docs:
        ids = [index[source_vocab.terms[t]] for t in doc if source_vocab.terms[t] in index]
        dropped += len(doc) - len(ids)
        aligned.append(np.asarray(ids, dtype=np.int32))
    if dropped:
        logger.warning("dropped %d token(s) outside the model vocabulary", dropped)
    return aligned, dropped


def perplexity(model: TrainedModel, test: Corpus, cfg: LtrConfig) -> float:
    """exp of the negative mean per-word held-out log-likelihood (>= 1)."""
    docs, _ = _align_docs(test.docs, test.vocabulary, model.vocabulary)
    total_words = sum(int(d.size) for d in docs)
    if total_words == 0:
        raise ValueError("test corpus is empty after vocabulary filtering")
    total_loglik = 0.0
    for j, doc in enumerate(docs):
        if doc.size == 0:
            continue
        rng = np.random.default_rng([cfg.seed, j])
        total_loglik += left_to_right_log_likelihood(model, doc, cfg, rng)
    return math.exp(-total_loglik / total_words)


def mc_lda_merge(model_legit: TrainedModel, model_spam: TrainedModel) -> MCLDAModel:
    """Stack two single-class models over one shared vocabulary."""
    if model_legit.vocabulary is None or model_spam.vocabulary is None:
        raise ValueError("both models must carry their vocabulary")
    if model_legit.vocabulary.terms != model_spam.vocabulary.terms:
        raise ValueError("cannot merge models with different vocabularies")
    return MCLDAModel(
        phi=np.vstack([model_legit.phi, model_spam.phi]),
        alpha=np.concatenate([model_legit.alpha, model_spam.alpha]),
        k_legit=model_legit.n_topics,
        k_spam=model_spam.n_topics,
        vocabulary=model_legit.vocabulary,
    )


def mc_lda_score(model: MCLDAModel, doc, inference_sweeps: int,
                 rng: np.random.Generator) -> float:
    """Spam mass tau: the summed posterior weight of the spam topic block."""
    tokens = _check_doc(doc, len(model.vocabulary))
    if tokens.size == 0:
        raise ValueError("cannot score an empty document")
    if inference_sweeps < 1:
        raise ValueError("inference_sweeps must be >= 1")
    uniforms = rng.random(int(tokens.size) * (1 + inference_sweeps))
    counts = doc_inference_kernel(tokens, model.phi, model.alpha, inference_sweeps, uniforms)
    theta = (counts + model.alpha) / (tokens.size + model.alpha.sum())
    return float(theta[model.k_legit:].sum())


def classify(tau: float, threshold: float) -> str:
    """Spam iff tau exceeds the threshold strictly."""
    return SPAM if tau > threshold else LEGITIMATE


def score_documents(model: MCLDAModel, test: Corpus, cfg: ScoreConfig):
    """tau for every scorable test document; returns (taus, labels, n_skipped)."""
    docs, _ = _align_docs(test.docs, test.vocabulary, model.vocabulary)
    taus, labels = [], []
    skipped = 0
    for i, doc in enumerate(docs):
        if doc.size == 0:
            skipped += 1
            continue
        rng = np.random.default_rng([cfg.seed, i])
        taus.append(mc_lda_score(model, doc, cfg.inference_sweeps, rng))
        if test.labels is not None:
            labels.append(test.labels[i])
    if skipped:
        logger.warning("skipped %d unscorable (empty after filtering) document(s)", skipped)
    return taus, labels, skipped


def threshold_sweep(model: MCLDAModel, test: Corpus, thresholds, cfg: ScoreConfig) -> list[ClassificationReport]:
    """Score each document once, then evaluate every threshold (spam = positive)."""
    if test.labels is None:
        raise ValueError("threshold sweep needs a labeled test corpus")
    taus, labels, _ = score_documents(model, test, cfg)
    if not taus:
        raise ValueError("no scorable test documents")
    reports = []
    for threshold in thresholds:
        tp = fp = tn = fn = 0
        for tau, label in zip(taus, labels):
            predicted_spam = classify(tau, threshold) == SPAM
            actual_spam = label == SPAM
            if predicted_spam and actual_spam:
                tp += 1
            elif predicted_spam:
                fp += 1
            elif actual_spam:
                fn += 1
            else:
                tn += 1
        reports.append(ClassificationReport.from_confusion(float(threshold), tp, fp, tn, fn))
    return reports
