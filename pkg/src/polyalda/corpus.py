"""Text ingestion: tokenization, stop-word filtering, vocabulary and
bag-of-words encoding, labeled-corpus loading, and seeded splitting.

Word order inside a document is preserved even though the models are
bag-of-words: the samplers and the held-out evaluator both walk token
positions.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from math import ceil
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Vocabulary",
    "Corpus",
    "SplitSpec",
    "tokenize",
    "default_stopwords",
    "load_stopwords",
    "load_corpus",
    "corpus_from_token_lists",
    "filter_by_label",
    "split_train_test",
]

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r"[a-z0-9]+")


def tokenize(text: str, stopwords: Iterable[str] = frozenset()) -> list[str]:
    """Lowercase, split on non-alphanumeric runs, drop stop words."""
    stop = stopwords if isinstance(stopwords, (set, frozenset)) else frozenset(stopwords)
    return [tok for tok in _TOKEN_RE.findall(text.lower()) if tok not in stop]


def default_stopwords() -> frozenset[str]:
    """The bundled standard-English stop-word list."""
    data = resources.files("polyalda.data").joinpath("stopwords.txt").read_text(encoding="utf-8")
    return frozenset(w for w in data.split() if w)


def load_stopwords(path) -> frozenset[str]:
    """One stop word per line; blank lines skipped."""
    words = Path(path).read_text(encoding="utf-8").split()
    return frozenset(w.lower() for w in words if w)


@dataclass(frozen=True)
class Vocabulary:
    """Dense 0-based term ids in first-occurrence order."""

    terms: tuple[str, ...]
    index: dict[str, int] = field(default=None, repr=False)  # derived

    def __post_init__(self):
        index = {t: i for i, t in enumerate(self.terms)}
        if len(index) != len(self.terms):
            raise ValueError("vocabulary terms must be unique")
        object.__setattr__(self, "index", index)

    @classmethod
    def from_token_lists(cls, docs: Iterable[Sequence[str]]) -> "Vocabulary":
        terms: list[str] = []
        seen: set[str] = set()
        for doc in docs:
            for tok in doc:
                if tok not in seen:
                    seen.add(tok)
                    terms.append(tok)
        return cls(tuple(terms))

    def __len__(self) -> int:
        return len(self.terms)

    def encode(self, tokens: Sequence[str]) -> np.ndarray:
        return np.fromiter((self.index[t] for t in tokens), dtype=np.int32, count=len(tokens))


@dataclass(frozen=True)
class Corpus:
    """Encoded documents (order-preserving term-id sequences) over one vocabulary."""

    docs: tuple[np.ndarray, ...]
    vocabulary: Vocabulary
    labels: tuple[str, ...] | None = None
    dropped_docs: int = 0
    dropped_tokens: int = 0

    def __post_init__(self):
        if len(self.docs) < 1:
            raise ValueError("a corpus needs at least one document")
        if self.labels is not None and len(self.labels) != len(self.docs):
            raise ValueError("labels must match documents one-to-one")
        v = len(self.vocabulary)
        docs = []
        for doc in self.docs:
            arr = np.array(doc, dtype=np.int32)
            if arr.size and (arr.min() < 0 or arr.max() >= v):
                raise ValueError("document term id out of vocabulary range")
            arr.setflags(write=False)
            docs.append(arr)
        object.__setattr__(self, "docs", tuple(docs))

    @property
    def n_docs(self) -> int:
        return len(self.docs)

    @property
    def n_terms(self) -> int:
        return len(self.vocabulary)

    @property
    def total_words(self) -> int:
        return int(sum(len(d) for d in self.docs))

    @property
    def doc_lengths(self) -> np.ndarray:
        return np.array([len(d) for d in self.docs], dtype=np.int64)

    @cached_property
    def tokens_flat(self) -> np.ndarray:
        """All token ids in document order, concatenated."""
        return np.concatenate([d for d in self.docs]) if self.total_words else np.empty(0, np.int32)

    @cached_property
    def doc_ids_flat(self) -> np.ndarray:
        return np.repeat(np.arange(self.n_docs, dtype=np.int32), self.doc_lengths)

    def decode(self, doc_index: int) -> list[str]:
        return [self.vocabulary.terms[i] for i in self.docs[doc_index]]


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.8
    seed: int = 42

    def __post_init__(self):
        if not 0 < self.train_fraction < 1:
            raise ValueError("train_fraction must be in (0, 1)")


def corpus_from_token_lists(token_docs: Sequence[Sequence[str]],
                            labels: Sequence[str] | None = None) -> Corpus:
    """Build a corpus from already-tokenized documents.

    Empty documents are dropped (with their labels) and counted.
    """
    kept_docs, kept_labels = [], []
    dropped = 0
    for i, doc in enumerate(token_docs):
        if len(doc) == 0:
            dropped += 1
            continue
        kept_docs.append(list(doc))
        if labels is not None:
            kept_labels.append(labels[i])
    if not kept_docs:
        raise ValueError("corpus is empty after filtering")
    if dropped:
        logger.warning("dropped %d empty document(s) after filtering", dropped)
    vocab = Vocabulary.from_token_lists(kept_docs)
    return Corpus(
        docs=tuple(vocab.encode(doc) for doc in kept_docs),
        vocabulary=vocab,
        labels=tuple(kept_labels) if labels is not None else None,
        dropped_docs=dropped,
    )


def _read_doc_file(path: Path) -> str:
    return path.read_text(encoding="utf-8", errors="replace")


def _nonblank_lines(text: str) -> list[str]:
    return [line for line in text.splitlines() if line.strip()]


def load_corpus(path, stopwords: Iterable[str] | None = None) -> Corpus:
    """Load and encode a corpus from one of three layouts.

    (a) a UTF-8 text file, one document per line;
    (b) a directory of .txt files, one document each;
    (c) a labeled directory with ``spam/`` and ``ham/`` subdirectories of
        .txt files.
    Blank lines are skipped everywhere. ``stopwords=None`` selects the
    bundled default list; pass an empty set to keep everything.
    """
    stop = default_stopwords() if stopwords is None else frozenset(stopwords)
    root = Path(path)
    if not root.exists():
        raise OSError(f"corpus path does not exist: {root}")

    texts: list[str] = []
    labels: list[str] | None = None
    if root.is_dir():
        ham_dir, spam_dir = root / "ham", root / "spam"
        if ham_dir.is_dir() and spam_dir.is_dir():
            labels = []
            for label, sub in (("ham", ham_dir), ("spam", spam_dir)):
                for f in sorted(sub.glob("*.txt")):
                    texts.append(_read_doc_file(f))
                    labels.append(label)
        else:
            for f in sorted(root.glob("*.txt")):
                texts.append(_read_doc_file(f))
        texts = ["\n".join(_nonblank_lines(t)) for t in texts]
    else:
        texts = _nonblank_lines(root.read_text(encoding="utf-8"))

    if not texts:
        raise ValueError(f"no documents found under {root}")
    token_docs = [tokenize(t, stop) for t in texts]
    return corpus_from_token_lists(token_docs, labels)


def filter_by_label(corpus: Corpus, label: str) -> Corpus:
    """Documents carrying one label, over the unchanged full vocabulary.

    This is how per-class models end up sharing a vocabulary: load the
    labeled corpus once, then train each class on its filtered view.
    """
    if corpus.labels is None:
        raise ValueError("corpus has no labels to filter by")
    keep = [i for i, lab in enumerate(corpus.labels) if lab == label]
    if not keep:
        raise ValueError(f"no documents labeled {label!r}")
    return Corpus(
        docs=tuple(corpus.docs[i] for i in keep),
        vocabulary=corpus.vocabulary,
        labels=tuple(corpus.labels[i] for i in keep),
    )


def split_train_test(corpus: Corpus, spec: SplitSpec = SplitSpec()) -> tuple[Corpus, Corpus]:
    """Seeded shuffle split; both halves are re-encoded over the vocabulary of
    the training half. Held-out tokens unknown to that vocabulary are dropped
    and counted, and test documents emptied by the filtering are dropped."""
    m = corpus.n_docs
    if m < 2:
        raise ValueError("need at least two documents to split")
    rng = np.random.default_rng(spec.seed)
    perm = rng.permutation(m)
    n_train = ceil(spec.train_fraction * m)
    if n_train >= m:
        raise ValueError(f"train fraction {spec.train_fraction} leaves no test documents (M={m})")
    train_idx, test_idx = perm[:n_train], perm[n_train:]

    terms = corpus.vocabulary.terms
    train_tokens = [[terms[t] for t in corpus.docs[i]] for i in train_idx]
    vocab = Vocabulary.from_token_lists(train_tokens)

    train = Corpus(
        docs=tuple(vocab.encode(doc) for doc in train_tokens),
        vocabulary=vocab,
        labels=tuple(corpus.labels[i] for i in train_idx) if corpus.labels else None,
    )

    test_docs, test_labels = [], []
    dropped_tokens = 0
    dropped_docs = 0
    for i in test_idx:
        tokens = [terms[t] for t in corpus.docs[i]]
        known = [t for t in tokens if t in vocab.index]
        dropped_tokens += len(tokens) - len(known)
        if not known:
            dropped_docs += 1
            continue
        test_docs.append(vocab.encode(known))
        if corpus.labels:
            test_labels.append(corpus.labels[i])
    if not test_docs:
        raise ValueError("every test document became empty after vocabulary filtering")
    if dropped_tokens or dropped_docs:
        logger.warning(
            "split: dropped %d out-of-vocabulary token(s) and %d emptied test document(s)",
            dropped_tokens, dropped_docs,
        )
    test = Corpus(
        docs=tuple(test_docs),
        vocabulary=vocab,
        labels=tuple(test_labels) if corpus.labels else None,
        dropped_docs=dropped_docs,
        dropped_tokens=dropped_tokens,
    )
    return train, test
