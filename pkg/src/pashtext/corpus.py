"""Labeled document collections: loading, validation, persistence, splitting.

Corpus files are UTF-8 JSON lines with required keys "id", "text" and
"label" (optional "source" is preserved but unused). A plain directory
layout is also accepted: one subdirectory per label, one UTF-8 ``.txt``
file per document, filename stem = document id.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

from .errors import DataError
from .prng import SplitMix64, derive_seed

logger = logging.getLogger(__name__)

# Default 8-class label set, in canonical order. The ordering defines the
# integer class index used for tie-breaking everywhere downstream.
DEFAULT_LABEL_NAMES = (
    "history",
    "technology",
    "sport",
    "cultural",
    "economic",
    "health",
    "politic",
    "scientific",
)


@dataclass(frozen=True)
class Document:
    """One raw document with its manually assigned category."""

    id: str
    text: str
    label: str
    source: str | None = None

    def __post_init__(self):
        if not self.id:
            raise DataError("document id must be non-empty")


class LabelSet:
    """Ordered, duplicate-free set of class names.

    The position of a name is its class index; that ordering is stable and
    is the canonical tie-break order for every classifier and metric.
    """

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if not names:
            raise DataError("label set must be non-empty")
        if len(set(names)) != len(names):
            raise DataError("label set contains duplicate names")
        self.names = names
        self._index = {name: i for i, name in enumerate(names)}

    @classmethod
    def default(cls) -> "LabelSet":
        return cls(DEFAULT_LABEL_NAMES)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise DataError(f"unknown label {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __iter__(self):
        return iter(self.names)

    def __len__(self) -> int:
        return len(self.names)

    def __eq__(self, other) -> bool:
        return isinstance(other, LabelSet) and self.names == other.names

    def __repr__(self) -> str:
        return f"LabelSet({list(self.names)!r})"


class Corpus:
    """Immutable collection of documents plus the label set they draw from."""

    def __init__(self, documents: Iterable[Document], labels: LabelSet):
        documents = tuple(documents)
        seen: set[str] = set()
        for doc in documents:
            if doc.id in seen:
                raise DataError(f"duplicate document id {doc.id!r}")
            seen.add(doc.id)
            if doc.label not in labels:
                raise DataError(
                    f"document {doc.id!r} has label {doc.label!r} "
                    f"outside the label set {list(labels.names)!r}"
                )
        self.documents = documents
        self.labels = labels
        self._by_id = {doc.id: doc for doc in documents}

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    def by_id(self, doc_id: str) -> Document:
        try:
            return self._by_id[doc_id]
        except KeyError:
            raise DataError(f"unknown document id {doc_id!r}") from None

    def subset(self, ids: Sequence[str]) -> tuple[Document, ...]:
        return tuple(self.by_id(i) for i in ids)

    def label_counts(self) -> dict[str, int]:
        counts = {name: 0 for name in self.labels}
        for doc in self.documents:
            counts[doc.label] += 1
        return counts


@dataclass(frozen=True)
class SplitSpec:
    """Train/test split request: fraction of each class sent to train."""

    train_fraction: float
    seed: int

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise DataError(
                f"train_fraction must be in (0, 1), got {self.train_fraction}"
            )


@dataclass(frozen=True)
class CorpusSplit:
    """Disjoint train/test id partition of a corpus."""

    train_ids: tuple[str, ...]
    test_ids: tuple[str, ...]


@dataclass
class ValidationReport:
    """Report-only corpus health summary (never raises)."""

    n_documents: int
    per_class_counts: dict[str, int]
    empty_text_ids: list[str]
    imbalance_ratio: float | None  # max/min class count; None if a class is empty

    def to_dict(self) -> dict:
        return {
            "n_documents": self.n_documents,
            "per_class_counts": self.per_class_counts,
            "empty_text_ids": self.empty_text_ids,
            "imbalance_ratio": self.imbalance_ratio,
        }


def load_corpus(path: str | Path, labels: LabelSet | None = None) -> Corpus:
    """Load a corpus from a JSONL file or a label-per-subdirectory tree.

    When `labels` is omitted, the label set is the sorted set of observed
    labels. JSONL record order is preserved; the directory loader orders by
    sorted label name, then sorted filename.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"corpus path does not exist: {path}")
    if path.is_dir():
        return _load_directory(path, labels)
    return _load_jsonl(path, labels)


def _load_jsonl(path: Path, labels: LabelSet | None) -> Corpus:
    documents: list[Document] = []
    seen_ids: set[str] = set()
    observed_labels: set[str] = set()
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, 1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}:{line_no}: malformed JSON: {exc.msg}") from None
            if not isinstance(record, dict):
                raise DataError(f"{path}:{line_no}: record is not a JSON object")
            for key in ("id", "text", "label"):
                if key not in record:
                    raise DataError(f"{path}:{line_no}: missing required key {key!r}")
                if not isinstance(record[key], str):
                    raise DataError(f"{path}:{line_no}: key {key!r} must be a string")
            doc_id = record["id"]
            if doc_id in seen_ids:
                raise DataError(f"{path}:{line_no}: duplicate document id {doc_id!r}")
            seen_ids.add(doc_id)
            label = record["label"]
            if labels is not None and label not in labels:
                raise DataError(
                    f"{path}:{line_no}: label {label!r} outside the supplied label set"
                )
            observed_labels.add(label)
            documents.append(
                Document(
                    id=doc_id,
                    text=record["text"],
                    label=label,
                    source=record.get("source"),
                )
            )
    if not documents:
        raise DataError(f"corpus file is empty: {path}")
    label_set = labels if labels is not None else LabelSet(sorted(observed_labels))
    return Corpus(documents, label_set)


def _load_directory(path: Path, labels: LabelSet | None) -> Corpus:
    label_dirs = sorted(p for p in path.iterdir() if p.is_dir())
    if not label_dirs:
        raise DataError(f"corpus directory has no label subdirectories: {path}")
    documents: list[Document] = []
    observed_labels: list[str] = []
    for label_dir in label_dirs:
        label = label_dir.name
        if labels is not None and label not in labels:
            raise DataError(
                f"label directory {label!r} outside the supplied label set"
            )
        observed_labels.append(label)
        for file in sorted(label_dir.glob("*.txt")):
            documents.append(
                Document(
                    id=f"{label}/{file.name}",
                    text=file.read_text(encoding="utf-8"),
                    label=label,
                )
            )
    if not documents:
        raise DataError(f"corpus directory contains no documents: {path}")
    label_set = labels if labels is not None else LabelSet(sorted(observed_labels))
    return Corpus(documents, label_set)


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write the corpus as UTF-8 JSON lines (re-loadable by load_corpus)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        for doc in corpus.documents:
            record = {"id": doc.id, "text": doc.text, "label": doc.label}
            if doc.source is not None:
                record["source"] = doc.source
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")


def validate(corpus: Corpus) -> ValidationReport:
    """Summarise per-class counts, empty-after-trim texts and class imbalance."""
    counts = corpus.label_counts()
    empty_ids = [doc.id for doc in corpus.documents if not doc.text.strip()]
    min_count = min(counts.values())
    max_count = max(counts.values())
    ratio = (max_count / min_count) if min_count > 0 else None
    return ValidationReport(
        n_documents=len(corpus),
        per_class_counts=counts,
        empty_text_ids=empty_ids,
        imbalance_ratio=ratio,
    )


def _round_half_up(fraction: float, count: int) -> int:
    # Decimal(str(...)) so that e.g. 0.3 * 5 rounds as the decimal 1.5, not
    # as the binary float 1.4999...
    value = Decimal(str(fraction)) * count
    return int(value.quantize(Decimal("1"), rounding=ROUND_HALF_UP))


def stratified_split(corpus: Corpus, spec: SplitSpec) -> CorpusSplit:
    """Per-class deterministic train/test partition.

    For each class c with n_c documents, exactly round-half-up(fraction*n_c)
    go to train. Each class's documents are shuffled by a Fisher-Yates pass
    driven by SplitMix64 seeded with derive_seed(spec.seed, class_index), so
    the split depends only on (corpus order, spec).
    """
    by_class: dict[str, list[str]] = {name: [] for name in corpus.labels}
    for doc in corpus.documents:
        by_class[doc.label].append(doc.id)

    train_ids: list[str] = []
    test_ids: list[str] = []
    for class_index, name in enumerate(corpus.labels):
        ids = by_class[name]
        n_class = len(ids)
        if n_class < 2:
            raise DataError(
                f"class {name!r} has {n_class} document(s); need at least 2 to split"
            )
        n_train = _round_half_up(spec.train_fraction, n_class)
        if n_train < 1 or n_train >= n_class:
            raise DataError(
                f"fraction {spec.train_fraction} yields an empty train or test "
                f"side for class {name!r} ({n_class} documents)"
            )
        rng = SplitMix64(derive_seed(spec.seed, class_index))
        shuffled = list(ids)
        rng.shuffle(shuffled)
        train_ids.extend(shuffled[:n_train])
        test_ids.extend(shuffled[n_train:])
    return CorpusSplit(train_ids=tuple(train_ids), test_ids=tuple(test_ids))


def save_split(split: CorpusSplit, spec: SplitSpec, path: str | Path) -> None:
    """Persist a split (with the spec that produced it) as a JSON file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {
        "train_fraction": spec.train_fraction,
        "seed": spec.seed,
        "train_ids": list(split.train_ids),
        "test_ids": list(split.test_ids),
    }
    path.write_text(json.dumps(payload, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")


def load_split(path: str | Path) -> tuple[CorpusSplit, SplitSpec]:
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read split file {path}: {exc}") from None
    try:
        split = CorpusSplit(
            train_ids=tuple(payload["train_ids"]),
            test_ids=tuple(payload["test_ids"]),
        )
        spec = SplitSpec(train_fraction=payload["train_fraction"], seed=payload["seed"])
    except KeyError as exc:
        raise DataError(f"split file {path} is missing key {exc}") from None
    return split, spec
