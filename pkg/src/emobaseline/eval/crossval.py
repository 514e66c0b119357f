"""Seeded k-fold cross-validation, OOB evaluation, and the report schema."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from sklearn.base import clone

from ..errors import ConfigError, DatasetError
from ..features.dataset import Dataset
from ..learn.forest import RandomForestClassifier
from .metrics import ConfusionMatrix, binary_label_names


def _setup_descriptor(data: Dataset, trainer, extra: dict | None = None) -> dict:
    setup = {
        "classifier": type(trainer).__name__,
        "params": trainer.get_params(),
        "n_features": len(data.feature_mask),
        "mask": list(data.feature_mask),
        "binary": data.binary,
        "n_instances": len(data),
    }
    if extra:
        setup.update(extra)
    return setup


@dataclass
class EvalReport:
    """One evaluation's setup, pooled confusion matrix, and error estimates.

    Rerunning with the same dataset, trainer params, and seed reproduces
    every number; the fold assignment is recorded for audit.
    """

    setup: dict
    confusion: ConfusionMatrix
    mean_error: float
    seed: int
    per_fold_errors: list[float] = field(default_factory=list)
    oob_error: float | None = None
    fold_of_instance: list[int] = field(default_factory=list)
    timing_s: float = 0.0

    def to_dict(self) -> dict:
        return {
            "setup": self.setup,
            "confusion": self.confusion.to_dict(),
            "mean_error": self.mean_error,
            "seed": self.seed,
            "per_fold_errors": self.per_fold_errors,
            "oob_error": self.oob_error,
            "fold_of_instance": self.fold_of_instance,
            "timing_s": self.timing_s,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "EvalReport":
        return cls(
            setup=doc["setup"],
            confusion=ConfusionMatrix.from_dict(doc["confusion"]),
            mean_error=doc["mean_error"],
            seed=doc["seed"],
            per_fold_errors=list(doc.get("per_fold_errors", [])),
            oob_error=doc.get("oob_error"),
            fold_of_instance=list(doc.get("fold_of_instance", [])),
            timing_s=doc.get("timing_s", 0.0),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2))

    @classmethod
    def load(cls, path: str | Path) -> "EvalReport":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_text(self) -> str:
        head = [
            f"classifier: {self.setup.get('classifier')}  "
            f"features: {self.setup.get('n_features')}  "
            f"binary: {self.setup.get('binary')}  seed: {self.seed}",
            f"mean error: {100 * self.mean_error:.1f}%"
            + (f"  oob error: {100 * self.oob_error:.1f}%" if self.oob_error is not None else ""),
        ]
        return "\n".join(head) + "\n" + self.confusion.to_text()


def _labels_and_names(data: Dataset, y: np.ndarray):
    if data.binary:
        return (0, 1), binary_label_names()
    labels = tuple(sorted(set(int(v) for v in y)))
    return labels, ()


def cross_validate(data: Dataset, trainer, k: int = 10, seed: int = 0) -> EvalReport:
    """Shuffle by seed, split into k near-equal folds, test each fold once.

    Reports the mean of per-fold error rates and the pooled confusion matrix.
    """
    n = len(data)
    if n == 0:
        raise DatasetError("cannot cross-validate an empty dataset")
    if k < 2:
        raise ConfigError(f"need at least 2 folds, got {k}")
    if k > n:
        raise ConfigError(f"{k} folds exceed {n} instances")

    X, y = data.X, data.y
    labels, names = _labels_and_names(data, y)
    rng = np.random.Generator(np.random.PCG64(seed))
    perm = rng.permutation(n)
    folds = np.array_split(perm, k)

    t0 = time.perf_counter()
    fold_of_instance = np.empty(n, dtype=np.int64)
    per_fold_errors = []
    pooled: ConfusionMatrix | None = None
    for fold_idx, test_idx in enumerate(folds):
        fold_of_instance[test_idx] = fold_idx
        train_mask = np.ones(n, dtype=bool)
        train_mask[test_idx] = False
        model = clone(trainer)
        model.fit(X[train_mask], y[train_mask])
        y_pred = model.predict(X[test_idx])
        per_fold_errors.append(float(np.mean(y_pred != y[test_idx])))
        cm = ConfusionMatrix.from_predictions(
            y[test_idx], y_pred, labels=labels, label_names=names
        )
        pooled = cm if pooled is None else pooled.merged(cm)

    return EvalReport(
        setup=_setup_descriptor(data, trainer, {"method": "cv", "k": k}),
        confusion=pooled,
        mean_error=float(np.mean(per_fold_errors)),
        seed=seed,
        per_fold_errors=per_fold_errors,
        fold_of_instance=fold_of_instance.tolist(),
        timing_s=time.perf_counter() - t0,
    )


def oob_evaluate(data: Dataset, trainer: RandomForestClassifier, seed: int | None = None) -> EvalReport:
    """Train one forest on all instances and report its out-of-bag estimate."""
    if not isinstance(trainer, RandomForestClassifier):
        raise ConfigError("OOB evaluation requires a random forest trainer")
    n = len(data)
    if n == 0:
        raise DatasetError("cannot evaluate an empty dataset")
    X, y = data.X, data.y
    labels, names = _labels_and_names(data, y)

    t0 = time.perf_counter()
    model = clone(trainer)
    if seed is not None:
        model.set_params(seed=seed)
    model.fit(X, y, feature_names=data.feature_names)
    voted = model.oob_votes_.sum(axis=1) > 0
    oob_pred = model.classes_[np.argmax(model.oob_votes_, axis=1)]
    cm = ConfusionMatrix.from_predictions(
        y[voted], oob_pred[voted], labels=labels, label_names=names
    )
    return EvalReport(
        setup=_setup_descriptor(data, model, {"method": "oob"}),
        confusion=cm,
        mean_error=model.oob_error_,
        seed=int(model.seed),
        oob_error=model.oob_error_,
        timing_s=time.perf_counter() - t0,
    )
