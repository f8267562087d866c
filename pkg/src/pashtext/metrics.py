"""Confusion-matrix metrics: precision, recall, F1, accuracy, aggregates.

Conventions: a metric whose denominator is zero is defined as 0 and the
class is flagged degenerate, so macro averages always stay totals over all
classes.  Macro averages are unweighted means over every class (including
support-0 ones); weighted averages are support-proportional, which makes
weighted recall coincide with overall accuracy on single-label problems.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from .errors import DataError


class ConfusionMatrix:
    """K x K count grid; entry (t, p) = samples of true class t predicted p."""

    def __init__(self, grid, label_names=None):
        self.grid = np.asarray(grid, dtype=np.int64)
        if self.grid.ndim != 2 or self.grid.shape[0] != self.grid.shape[1]:
            raise DataError("confusion grid must be square")
        if np.any(self.grid < 0):
            raise DataError("confusion grid entries must be non-negative")
        self.label_names = (
            tuple(label_names)
            if label_names is not None
            else tuple(f"class_{i}" for i in range(self.grid.shape[0]))
        )
        if len(self.label_names) != self.grid.shape[0]:
            raise DataError("label names must match the grid size")

    @property
    def k(self) -> int:
        return self.grid.shape[0]

    @property
    def total(self) -> int:
        return int(self.grid.sum())

    def tp(self, i: int) -> int:
        return int(self.grid[i, i])

    def fp(self, i: int) -> int:
        return int(self.grid[:, i].sum()) - self.tp(i)

    def fn(self, i: int) -> int:
        return int(self.grid[i, :].sum()) - self.tp(i)

    def tn(self, i: int) -> int:
        return self.total - self.tp(i) - self.fp(i) - self.fn(i)

    def support(self, i: int) -> int:
        return int(self.grid[i, :].sum())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ConfusionMatrix)
            and self.label_names == other.label_names
            and np.array_equal(self.grid, other.grid)
        )


def confusion_matrix(truth, preds, label_count: int, label_names=None) -> ConfusionMatrix:
    truth = np.asarray(truth, dtype=np.int64)
    preds = np.asarray(preds, dtype=np.int64)
    if truth.size != preds.size:
        raise DataError(
            f"truth and predictions differ in length ({truth.size} vs {preds.size})"
        )
    if truth.size == 0:
        raise DataError("cannot evaluate zero samples")
    for name, values in (("truth", truth), ("prediction", preds)):
        if values.min() < 0 or values.max() >= label_count:
            raise DataError(f"{name} labels fall outside [0, {label_count})")
    grid = np.zeros((label_count, label_count), dtype=np.int64)
    np.add.at(grid, (truth, preds), 1)
    return ConfusionMatrix(grid, label_names)


@dataclass(frozen=True)
class ClassMetrics:
    """Precision, recall and F1 of one class, plus its test support.

    `degenerate` marks classes where some denominator was zero and the
    0-convention kicked in.
    """

    precision: float
    recall: float
    f1: float
    support: int
    degenerate: bool = False

    def to_dict(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "support": self.support,
            "degenerate": self.degenerate,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ClassMetrics":
        return cls(
            precision=data["precision"],
            recall=data["recall"],
            f1=data["f1"],
            support=data["support"],
            degenerate=data["degenerate"],
        )


def _ratio(numerator: float, denominator: float) -> tuple[float, bool]:
    if denominator == 0:
        return 0.0, True
    return numerator / denominator, False


def class_metrics(cm: ConfusionMatrix, class_index: int) -> ClassMetrics:
    tp = cm.tp(class_index)
    precision, p_degenerate = _ratio(tp, tp + cm.fp(class_index))
    recall, r_degenerate = _ratio(tp, tp + cm.fn(class_index))
    f1, f_degenerate = _ratio(2.0 * precision * recall, precision + recall)
    return ClassMetrics(
        precision=precision,
        recall=recall,
        f1=f1,
        support=cm.support(class_index),
        degenerate=p_degenerate or r_degenerate or f_degenerate,
    )


def overall_accuracy(cm: ConfusionMatrix) -> float:
    """Trace over total: the multiclass share of correct predictions."""
    return float(np.trace(cm.grid)) / cm.total


def class_accuracy(cm: ConfusionMatrix, class_index: int) -> float:
    """One-vs-rest accuracy of a single class: (TP + TN) / total."""
    return (cm.tp(class_index) + cm.tn(class_index)) / cm.total


@dataclass(frozen=True)
class AggregateMetrics:
    precision: float
    recall: float
    f1: float

    def to_dict(self) -> dict:
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1}

    @classmethod
    def from_dict(cls, data: dict) -> "AggregateMetrics":
        return cls(data["precision"], data["recall"], data["f1"])


def aggregate(per_class) -> tuple[AggregateMetrics, AggregateMetrics]:
    """(macro, weighted) averages of a per-class metrics sequence.

    Macro is the plain mean over all classes; weighted scales each class by
    its support, so support-0 classes drop out of the weighted figures.
    """
    per_class = list(per_class)
    if not per_class:
        raise DataError("cannot aggregate zero classes")
    fields = ("precision", "recall", "f1")
    macro = AggregateMetrics(
        *(float(np.mean([getattr(m, f) for m in per_class])) for f in fields)
    )
    total_support = sum(m.support for m in per_class)
    if total_support == 0:
        weighted = AggregateMetrics(0.0, 0.0, 0.0)
    else:
        weighted = AggregateMetrics(
            *(
                sum(getattr(m, f) * m.support for m in per_class) / total_support
                for f in fields
            )
        )
    return macro, weighted


@dataclass(frozen=True)
class EvalReport:
    """Full single-split evaluation: confusion matrix and every metric."""

    confusion: ConfusionMatrix
    per_class: tuple[ClassMetrics, ...]
    macro: AggregateMetrics
    weighted: AggregateMetrics
    accuracy: float

    def to_dict(self) -> dict:
        return {
            "format": "pashtext-eval-report",
            "version": 1,
            "labels": list(self.confusion.label_names),
            "confusion": self.confusion.grid.tolist(),
            "per_class": {
                name: metrics.to_dict()
                for name, metrics in zip(self.confusion.label_names, self.per_class)
            },
            "macro": self.macro.to_dict(),
            "weighted": self.weighted.to_dict(),
            "accuracy": self.accuracy,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EvalReport":
        if not isinstance(data, dict) or data.get("format") != "pashtext-eval-report":
            raise DataError("not a pashtext-eval-report document")
        if data.get("version") != 1:
            raise DataError(f"unsupported report version {data.get('version')!r}")
        labels = data["labels"]
        confusion = ConfusionMatrix(data["confusion"], labels)
        per_class = tuple(
            ClassMetrics.from_dict(data["per_class"][name]) for name in labels
        )
        return cls(
            confusion=confusion,
            per_class=per_class,
            macro=AggregateMetrics.from_dict(data["macro"]),
            weighted=AggregateMetrics.from_dict(data["weighted"]),
            accuracy=data["accuracy"],
        )

    def to_json_text(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def to_markdown(self) -> str:
        lines = [
            "| Class | Precision | Recall | F1 | Support |",
            "| --- | --- | --- | --- | --- |",
        ]
        for name, m in zip(self.confusion.label_names, self.per_class):
            lines.append(
                f"| {name} | {m.precision:.4f} | {m.recall:.4f} "
                f"| {m.f1:.4f} | {m.support} |"
            )
        for tag, agg in (("macro avg", self.macro), ("weighted avg", self.weighted)):
            lines.append(
                f"| {tag} | {agg.precision:.4f} | {agg.recall:.4f} "
                f"| {agg.f1:.4f} | {self.confusion.total} |"
            )
        lines.append(f"\nOverall accuracy: {self.accuracy:.4f}")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["class", "precision", "recall", "f1", "support"])
        for name, m in zip(self.confusion.label_names, self.per_class):
            writer.writerow(
                [name, f"{m.precision:.6f}", f"{m.recall:.6f}", f"{m.f1:.6f}", m.support]
            )
        for tag, agg in (("macro avg", self.macro), ("weighted avg", self.weighted)):
            writer.writerow(
                [tag, f"{agg.precision:.6f}", f"{agg.recall:.6f}",
                 f"{agg.f1:.6f}", self.confusion.total]
            )
        writer.writerow(["accuracy", f"{self.accuracy:.6f}", "", "", ""])
        return out.getvalue()


def evaluate_predictions(truth, preds, label_count: int, label_names=None) -> EvalReport:
    """Confusion matrix plus the full metric block for one prediction set."""
    cm = confusion_matrix(truth, preds, label_count, label_names)
    per_class = tuple(class_metrics(cm, i) for i in range(label_count))
    macro, weighted = aggregate(per_class)
    return EvalReport(
        confusion=cm,
        per_class=per_class,
        macro=macro,
        weighted=weighted,
        accuracy=overall_accuracy(cm),
    )
