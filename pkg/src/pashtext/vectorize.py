"""Vocabulary building, unigram/TFIDF sparse vectors, chi-square selection.

Everything here is fitted on training documents only. Transforming a test
document never mutates the vocabulary; unseen tokens are simply dropped.
"""

from __future__ import annotations

import json
import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import LabelSet
from .errors import DataError
from .pipeline import TokenizedDocument

logger = logging.getLogger(__name__)

UNIGRAM = "unigram"
TFIDF = "tfidf"
FEATURE_MODES = (UNIGRAM, TFIDF)


@dataclass(eq=False)
class SparseVector:
    """Sorted (index, value) pairs over a fixed dimension; no explicit zeros."""

    indices: np.ndarray  # int64, strictly increasing
    values: np.ndarray  # float64, finite, nonzero
    dim: int

    def __post_init__(self):
        self.indices = np.asarray(self.indices, dtype=np.int64)
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.indices.shape != self.values.shape:
            raise DataError("indices and values must have equal length")
        if self.indices.size:
            if np.any(np.diff(self.indices) <= 0):
                raise DataError("sparse indices must be strictly increasing")
            if self.indices[0] < 0 or self.indices[-1] >= self.dim:
                raise DataError("sparse index out of range")
            if not np.all(np.isfinite(self.values)):
                raise DataError("sparse values must be finite")

    @classmethod
    def from_dict(cls, entries: dict[int, float], dim: int) -> "SparseVector":
        items = sorted((i, v) for i, v in entries.items() if v != 0.0)
        indices = np.array([i for i, _ in items], dtype=np.int64)
        values = np.array([v for _, v in items], dtype=np.float64)
        return cls(indices=indices, values=values, dim=dim)

    @classmethod
    def from_dense(cls, dense: Sequence[float]) -> "SparseVector":
        arr = np.asarray(dense, dtype=np.float64)
        nz = np.nonzero(arr)[0]
        return cls(indices=nz, values=arr[nz], dim=arr.size)

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def get(self, index: int) -> float:
        pos = np.searchsorted(self.indices, index)
        if pos < self.indices.size and self.indices[pos] == index:
            return float(self.values[pos])
        return 0.0

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.dim, dtype=np.float64)
        dense[self.indices] = self.values
        return dense

    def dot(self, other: "SparseVector") -> float:
        if self.dim != other.dim:
            raise DataError("dimension mismatch in sparse dot product")
        # Two-pointer merge over the sorted index arrays.
        i = j = 0
        total = 0.0
        a_idx, a_val = self.indices, self.values
        b_idx, b_val = other.indices, other.values
        while i < a_idx.size and j < b_idx.size:
            ai, bj = a_idx[i], b_idx[j]
            if ai == bj:
                total += a_val[i] * b_val[j]
                i += 1
                j += 1
            elif ai < bj:
                i += 1
            else:
                j += 1
        return total

    def norm_sq(self) -> float:
        return float(np.dot(self.values, self.values))


@dataclass(eq=False)
class FeatureMatrix:
    """Row-per-document sparse matrix with class indices and a feature mode."""

    rows: list[SparseVector]
    row_labels: np.ndarray  # int64 class indices, aligned with rows
    mode: str
    dim: int

    def __post_init__(self):
        self.row_labels = np.asarray(self.row_labels, dtype=np.int64)
        if self.mode not in FEATURE_MODES:
            raise DataError(f"unknown feature mode {self.mode!r}")
        if len(self.rows) != self.row_labels.size:
            raise DataError("rows and row_labels must have equal length")
        for row in self.rows:
            if row.dim != self.dim:
                raise DataError("all rows must share the matrix dimension")

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((len(self.rows), self.dim), dtype=np.float64)
        for i, row in enumerate(self.rows):
            dense[i, row.indices] = row.values
        return dense


@dataclass
class Vocabulary:
    """Token-to-index mapping plus per-token document frequency.

    Built from training documents only; indices are dense in [0, V) in
    first-occurrence order.
    """

    token_to_index: dict[str, int]
    document_frequency: np.ndarray  # int64 per index, each >= 1
    n_train_docs: int

    def __post_init__(self):
        self.document_frequency = np.asarray(self.document_frequency, dtype=np.int64)
        size = len(self.token_to_index)
        if sorted(self.token_to_index.values()) != list(range(size)):
            raise DataError("vocabulary indices must be dense in [0, V)")
        if self.document_frequency.size != size:
            raise DataError("document_frequency length must equal vocabulary size")
        if size and (
            self.document_frequency.min() < 1
            or self.document_frequency.max() > self.n_train_docs
        ):
            raise DataError("document frequencies must lie in [1, n_train_docs]")

    def __len__(self) -> int:
        return len(self.token_to_index)

    def save(self, path: str | Path) -> None:
        payload = self.to_json_dict()
        Path(path).write_text(
            json.dumps(payload, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )

    def to_json_dict(self) -> dict:
        entries = sorted(self.token_to_index.items(), key=lambda kv: kv[1])
        return {
            "n_train_docs": self.n_train_docs,
            "entries": [
                [token, index, int(self.document_frequency[index])]
                for token, index in entries
            ],
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "Vocabulary":
        entries = payload["entries"]
        token_to_index = {token: int(index) for token, index, _ in entries}
        df = np.zeros(len(entries), dtype=np.int64)
        for _, index, count in entries:
            df[int(index)] = int(count)
        return cls(
            token_to_index=token_to_index,
            document_frequency=df,
            n_train_docs=int(payload["n_train_docs"]),
        )

    @classmethod
    def load(cls, path: str | Path) -> "Vocabulary":
        try:
            payload = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError, KeyError) as exc:
            raise DataError(f"cannot read vocabulary {path}: {exc}") from None
        return cls.from_json_dict(payload)


@dataclass
class FeatureMask:
    """Indices kept by feature selection, plus the full score vector."""

    kept_indices: np.ndarray  # sorted int64
    scores: np.ndarray  # float64 per original index

    def __post_init__(self):
        self.kept_indices = np.asarray(self.kept_indices, dtype=np.int64)
        self.scores = np.asarray(self.scores, dtype=np.float64)
        if self.kept_indices.size and (
            np.any(np.diff(self.kept_indices) <= 0)
            or self.kept_indices[0] < 0
            or self.kept_indices[-1] >= self.scores.size
        ):
            raise DataError("kept_indices must be sorted and within [0, V)")
        if np.any(~np.isfinite(self.scores)) or np.any(self.scores < 0):
            raise DataError("selection scores must be finite and non-negative")


def build_vocabulary(
    train_docs: Sequence[TokenizedDocument], min_df: int = 1
) -> Vocabulary:
    """Collect tokens appearing in at least `min_df` training documents.

    Index order is first-occurrence order (document order, then token order
    within the document).
    """
    if not train_docs:
        raise DataError("cannot build a vocabulary from zero documents")
    if min_df < 1:
        raise DataError("min_df must be >= 1")
    df: dict[str, int] = {}
    for doc in train_docs:
        for token in dict.fromkeys(doc.tokens):  # distinct, first-occurrence order
            df[token] = df.get(token, 0) + 1
    kept = {token for token, count in df.items() if count >= min_df}
    if not kept:
        raise DataError(
            f"vocabulary is empty after filtering at min_df={min_df}"
        )
    token_to_index: dict[str, int] = {}
    for doc in train_docs:
        for token in doc.tokens:
            if token in kept and token not in token_to_index:
                token_to_index[token] = len(token_to_index)
    frequencies = np.zeros(len(token_to_index), dtype=np.int64)
    for token, index in token_to_index.items():
        frequencies[index] = df[token]
    return Vocabulary(
        token_to_index=token_to_index,
        document_frequency=frequencies,
        n_train_docs=len(train_docs),
    )


def unigram_vector(tokens: Iterable[str], vocab: Vocabulary) -> SparseVector:
    """Raw occurrence counts against the vocabulary; unknown tokens ignored."""
    counts: dict[int, float] = {}
    lookup = vocab.token_to_index
    for token in tokens:
        index = lookup.get(token)
        if index is not None:
            counts[index] = counts.get(index, 0.0) + 1.0
    return SparseVector.from_dict(counts, dim=len(vocab))


def idf_weights(vocab: Vocabulary) -> np.ndarray:
    """Natural-log inverse document frequency: ln(n_train_docs / df)."""
    return np.log(vocab.n_train_docs / vocab.document_frequency.astype(np.float64))


def tfidf_vector(counts: SparseVector, idf: np.ndarray) -> SparseVector:
    """Weight raw counts by idf; entries that become exactly zero are pruned."""
    if counts.dim != idf.shape[0]:
        raise DataError(
            f"dimension mismatch: counts dim {counts.dim}, idf dim {idf.shape[0]}"
        )
    values = counts.values * idf[counts.indices]
    keep = values != 0.0
    return SparseVector(indices=counts.indices[keep], values=values[keep], dim=counts.dim)


def vectorize_documents(
    docs: Sequence[TokenizedDocument],
    vocab: Vocabulary,
    mode: str,
    labels: LabelSet,
) -> FeatureMatrix:
    """Build the unigram or TFIDF matrix for a document sequence."""
    if mode not in FEATURE_MODES:
        raise DataError(f"unknown feature mode {mode!r}")
    idf = idf_weights(vocab) if mode == TFIDF else None
    rows = []
    row_labels = []
    for doc in docs:
        counts = unigram_vector(doc.tokens, vocab)
        rows.append(tfidf_vector(counts, idf) if idf is not None else counts)
        row_labels.append(labels.index(doc.label))
    return FeatureMatrix(
        rows=rows,
        row_labels=np.asarray(row_labels, dtype=np.int64),
        mode=mode,
        dim=len(vocab),
    )


def chi2_scores(matrix: FeatureMatrix, n_classes: int) -> np.ndarray:
    """Chi-square association score of each feature with the class labels.

    Observed O[c, j] is the per-class sum of feature j; expected E[c, j] is
    the class's share of rows times the feature total. The score is
    sum_c (O - E)^2 / E, skipping classes with zero expectation. Valid for
    counts and for TFIDF weights alike (non-negative values required).
    """
    if matrix.n_rows == 0:
        raise DataError("cannot score features of an empty matrix")
    if n_classes < 1 or np.any(matrix.row_labels >= n_classes):
        raise DataError("row label out of range for n_classes")
    observed = np.zeros((n_classes, matrix.dim), dtype=np.float64)
    for row, label in zip(matrix.rows, matrix.row_labels):
        if row.values.size and row.values.min() < 0:
            raise DataError("chi-square selection requires non-negative features")
        observed[label, row.indices] += row.values
    class_share = np.bincount(matrix.row_labels, minlength=n_classes) / matrix.n_rows
    feature_totals = observed.sum(axis=0)
    expected = np.outer(class_share, feature_totals)
    nonzero = expected > 0
    contrib = np.where(
        nonzero, (observed - expected) ** 2 / np.where(nonzero, expected, 1.0), 0.0
    )
    return contrib.sum(axis=0)


def select_top_k(scores: np.ndarray, k: int) -> FeatureMask:
    """Keep the k highest-scoring features; ties go to the lower index.

    k larger than the feature count is clamped (with a warning).
    """
    scores = np.asarray(scores, dtype=np.float64)
    if k < 1:
        raise DataError("k must be >= 1")
    if k > scores.size:
        logger.warning("select_top_k: k=%d exceeds %d features; clamping", k, scores.size)
        k = scores.size
    order = np.argsort(-scores, kind="stable")  # stable: equal scores keep index order
    kept = np.sort(order[:k])
    return FeatureMask(kept_indices=kept, scores=scores)


def apply_mask(mask: FeatureMask, matrix: FeatureMatrix) -> FeatureMatrix:
    """Project the matrix onto the mask's features, remapped densely."""
    kept = mask.kept_indices
    rows = []
    for row in matrix.rows:
        positions = np.searchsorted(kept, row.indices)
        positions = np.clip(positions, 0, kept.size - 1)
        hit = kept[positions] == row.indices
        rows.append(
            SparseVector(
                indices=positions[hit], values=row.values[hit], dim=int(kept.size)
            )
        )
    return FeatureMatrix(
        rows=rows, row_labels=matrix.row_labels.copy(), mode=matrix.mode, dim=int(kept.size)
    )


def apply_mask_vector(mask: FeatureMask, vector: SparseVector) -> SparseVector:
    kept = mask.kept_indices
    positions = np.searchsorted(kept, vector.indices)
    positions = np.clip(positions, 0, kept.size - 1)
    hit = kept[positions] == vector.indices
    return SparseVector(
        indices=positions[hit], values=vector.values[hit], dim=int(kept.size)
    )
