"""k-nearest-neighbour classification over sparse feature rows."""

from __future__ import annotations

import numpy as np

from ..errors import InvalidHyperparameterError
from ..vectorize import FeatureMatrix, SparseVector
from .base import Model, ModelKind
from .params import COSINE, EUCLIDEAN, KNNParams


def knn_neighbors(
    rows: list[SparseVector],
    query: SparseVector,
    k: int,
    metric: str,
) -> list[tuple[int, float]]:
    """Return the k (row_index, distance) pairs nearest to `query`.

    Distances are Euclidean or cosine distance (1 - cosine similarity, with
    all-zero vectors treated as similarity 0).  Ties on distance are broken
    by lower row index; the result is sorted by (distance, row_index).
    """
    if metric not in (EUCLIDEAN, COSINE):
        raise InvalidHyperparameterError(f"unknown metric {metric!r}")
    if k > len(rows):
        raise InvalidHyperparameterError(
            f"k={k} exceeds the {len(rows)} stored training rows"
        )
    dense_query = query.to_dense()
    query_norm_sq = query.norm_sq()
    distances = np.empty(len(rows), dtype=np.float64)
    for i, row in enumerate(rows):
        dot = float(row.values @ dense_query[row.indices]) if row.nnz else 0.0
        if metric == EUCLIDEAN:
            distances[i] = np.sqrt(max(row.norm_sq() - 2.0 * dot + query_norm_sq, 0.0))
        else:
            denom = np.sqrt(row.norm_sq() * query_norm_sq)
            similarity = dot / denom if denom > 0 else 0.0
            distances[i] = 1.0 - similarity
    order = np.lexsort((np.arange(len(rows)), distances))
    return [(int(i), float(distances[i])) for i in order[:k]]


class KNNModel(Model):
    """Memorises the training matrix; scores are neighbour vote counts.

    `predict_scores` returns the per-class vote counts among the k nearest
    training rows, so argmax with the lowest-class-index rule resolves vote
    ties deterministically.
    """

    kind = ModelKind.KNN

    def __init__(self, matrix: FeatureMatrix, params: KNNParams, label_count: int):
        self.matrix = matrix
        self.params = params
        self.label_count = label_count
        self.feature_dimension = matrix.dim

    def predict_scores(self, vector: SparseVector) -> np.ndarray:
        self._check_vector(vector)
        neighbors = knn_neighbors(
            self.matrix.rows, vector, self.params.k, self.params.metric
        )
        votes = np.zeros(self.label_count, dtype=np.float64)
        for row_index, _ in neighbors:
            votes[self.matrix.row_labels[row_index]] += 1.0
        return votes

    def payload(self) -> dict:
        return {
            "dim": self.matrix.dim,
            "mode": self.matrix.mode,
            "label_count": self.label_count,
            "row_labels": self.matrix.row_labels.tolist(),
            "rows": [
                {"indices": row.indices.tolist(), "values": row.values.tolist()}
                for row in self.matrix.rows
            ],
        }

    @classmethod
    def from_payload(cls, payload: dict, params: KNNParams) -> "KNNModel":
        dim = payload["dim"]
        rows = [
            SparseVector(
                np.asarray(entry["indices"], dtype=np.int64),
                np.asarray(entry["values"], dtype=np.float64),
                dim,
            )
            for entry in payload["rows"]
        ]
        labels = np.asarray(payload["row_labels"], dtype=np.int64)
        matrix = FeatureMatrix(rows, labels, payload["mode"], dim)
        return cls(matrix, params, payload["label_count"])


def train_knn(matrix: FeatureMatrix, params: KNNParams, label_count: int) -> KNNModel:
    if params.k > len(matrix.rows):
        raise InvalidHyperparameterError(
            f"k={params.k} exceeds the {len(matrix.rows)} training rows"
        )
    return KNNModel(matrix, params, label_count)

