"""Confusion matrices and the positive/negative binary collapse."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from ..errors import MappingError
from ..features.dataset import Dataset
from ..labels import (
    BINARY_NAMES,
    NEGATIVE,
    NEGATIVE_EMOTIONS,
    POSITIVE,
    EmotionLabel,
)


def binarize_labels(y) -> np.ndarray:
    """Collapse six-emotion codes to Negative(0) / Positive(1) valence."""
    y = np.asarray(y, dtype=np.int64)
    if np.any(y == int(EmotionLabel.REST)):
        raise MappingError("Rest has no binary valence; exclude it first")
    if np.any((y < 1) | (y > 6)):
        bad = sorted(set(y.tolist()) - set(range(1, 7)))
        raise MappingError(f"labels outside the six emotions: {bad}")
    negative = np.isin(y, [int(e) for e in NEGATIVE_EMOTIONS])
    return np.where(negative, NEGATIVE, POSITIVE).astype(np.int64)


def binarize_dataset(data: Dataset) -> Dataset:
    """Same instances, binary label space; Dataset.y then yields 0/1 codes."""
    binarize_labels([int(inst.label) for inst in data.instances])  # validates
    return replace(data, binary=True)


@dataclass
class ConfusionMatrix:
    """counts[predicted][actual]; column sums are the per-class instance counts."""

    labels: tuple[int, ...]
    counts: np.ndarray
    label_names: tuple[str, ...] = ()

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if self.counts.shape != (len(self.labels), len(self.labels)):
            raise ValueError("confusion matrix shape does not match labels")
        if not self.label_names:
            self.label_names = tuple(_default_name(code) for code in self.labels)

    @classmethod
    def from_predictions(cls, y_true, y_pred, labels=None, label_names=()) -> "ConfusionMatrix":
        y_true = np.asarray(y_true, dtype=np.int64)
        y_pred = np.asarray(y_pred, dtype=np.int64)
        if y_true.shape != y_pred.shape:
            raise ValueError("prediction/truth length mismatch")
        if labels is None:
            labels = sorted(set(y_true.tolist()) | set(y_pred.tolist()))
        labels = tuple(int(c) for c in labels)
        index = {c: i for i, c in enumerate(labels)}
        counts = np.zeros((len(labels), len(labels)), dtype=np.int64)
        for t, p in zip(y_true, y_pred):
            counts[index[int(p)], index[int(t)]] += 1
        return cls(labels=labels, counts=counts, label_names=tuple(label_names))

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def class_counts(self) -> dict[int, int]:
        sums = self.counts.sum(axis=0)
        return {c: int(sums[i]) for i, c in enumerate(self.labels)}

    def per_class_error(self) -> dict[int, float]:
        """1 - diagonal/column-total per actual class (0 for empty classes)."""
        out = {}
        for i, c in enumerate(self.labels):
            col = self.counts[:, i].sum()
            out[c] = float(1.0 - self.counts[i, i] / col) if col else 0.0
        return out

    @property
    def mean_error(self) -> float:
        """Overall misclassification rate 1 - trace/total."""
        total = self.total
        return float(1.0 - np.trace(self.counts) / total) if total else 0.0

    def merged(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        if other.labels != self.labels:
            raise ValueError("cannot merge matrices over different label sets")
        return ConfusionMatrix(
            labels=self.labels,
            counts=self.counts + other.counts,
            label_names=self.label_names,
        )

    def to_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "label_names": list(self.label_names),
            "counts_pred_by_actual": self.counts.tolist(),
            "per_class_error": {str(k): v for k, v in self.per_class_error().items()},
            "mean_error": self.mean_error,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ConfusionMatrix":
        return cls(
            labels=tuple(doc["labels"]),
            counts=np.asarray(doc["counts_pred_by_actual"], dtype=np.int64),
            label_names=tuple(doc["label_names"]),
        )

    def to_text(self) -> str:
        """Aligned table, rows = actual class, columns = predicted class."""
        per_class = self.per_class_error()
        name_w = max(12, max((len(n) for n in self.label_names), default=0) + 2)
        col_w = max(8, max((len(n) for n in self.label_names), default=0) + 2)
        lines = []
        header = "Real \\ Pred".ljust(name_w)
        header += "".join(n.rjust(col_w) for n in self.label_names)
        header += "Class. Error (%)".rjust(20)
        lines.append(header)
        for j, actual_name in enumerate(self.label_names):
            row = actual_name.ljust(name_w)
            row += "".join(str(int(self.counts[i, j])).rjust(col_w) for i in range(len(self.labels)))
            row += f"{100 * per_class[self.labels[j]]:.1f}".rjust(20)
            lines.append(row)
        lines.append(
            "Average error (%)".ljust(name_w)
            + f"{100 * self.mean_error:.1f}".rjust(col_w * len(self.labels) + 20)
        )
        return "\n".join(lines)


def _default_name(code: int) -> str:
    try:
        return EmotionLabel.from_code(code).display_name
    except ValueError:
        return str(code)


def binary_label_names() -> tuple[str, str]:
    return (BINARY_NAMES[NEGATIVE], BINARY_NAMES[POSITIVE])
