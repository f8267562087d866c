"""Model kind enumeration and the common predict contract."""

from __future__ import annotations

from abc import ABC, abstractmethod
from enum import Enum

import numpy as np

from ..errors import DataError
from ..vectorize import SparseVector


class ModelKind(str, Enum):
    """The eight supported classifier families, in canonical order.

    The enumeration order is the canonical report and tie-break order for
    everything that iterates over kinds.
    """

    GAUSSIAN_NB = "gaussian_nb"
    MULTINOMIAL_NB = "multinomial_nb"
    KNN = "knn"
    DECISION_TREE = "decision_tree"
    RANDOM_FOREST = "random_forest"
    LOGISTIC_REGRESSION = "logistic_regression"
    LINEAR_SVM = "linear_svm"
    MLP = "mlp"


KIND_DISPLAY_NAMES = {
    ModelKind.GAUSSIAN_NB: "Gaussian Naive Bayes",
    ModelKind.MULTINOMIAL_NB: "Multinomial Naive Bayes",
    ModelKind.KNN: "K Nearest Neighbor",
    ModelKind.DECISION_TREE: "Decision Tree",
    ModelKind.RANDOM_FOREST: "Random Forest",
    ModelKind.LOGISTIC_REGRESSION: "Logistic Regression",
    ModelKind.LINEAR_SVM: "Linear SVM",
    ModelKind.MLP: "Multilayer Perceptron",
}


def argmax_lowest(scores: np.ndarray) -> int:
    """Index of the maximum score; exact ties go to the lowest index."""
    return int(np.argmax(scores))


class Model(ABC):
    """A trained classifier: immutable, shareable, pure at prediction time.

    `predict_scores` returns one finite real per class; its meaning is
    family-specific (log-posteriors, votes, margins or probabilities) but
    argmax with lowest-index tie-break is the prediction for every family.
    """

    kind: ModelKind
    label_count: int
    feature_dimension: int

    def _check_vector(self, vector: SparseVector) -> None:
        if vector.dim != self.feature_dimension:
            raise DataError(
                f"vector dimension {vector.dim} does not match model "
                f"feature dimension {self.feature_dimension}"
            )

    @abstractmethod
    def predict_scores(self, vector: SparseVector) -> np.ndarray:
        """Per-class scores for one document vector."""

    def predict(self, vector: SparseVector) -> int:
        return argmax_lowest(self.predict_scores(vector))

    def predict_rows(self, rows) -> np.ndarray:
        return np.array([self.predict(row) for row in rows], dtype=np.int64)

    @abstractmethod
    def payload(self) -> dict:
        """JSON-serializable family-specific parameters."""

    @classmethod
    @abstractmethod
    def from_payload(cls, payload: dict, params) -> "Model":
        """Rebuild a model from `payload` (inverse of :meth:`payload`)."""
