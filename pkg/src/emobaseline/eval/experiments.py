"""Experiment harnesses: window sweep, SKT ablation, classifier comparison."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError, DatasetError
from ..features.dataset import Dataset, build_dataset
from ..features.extract import FEATURE_NAMES, LEAK_PRONE_FEATURES
from ..features.windows import WindowConfig, cut_windows_all
from ..labels import EmotionLabel
from ..learn.forest import RandomForestClassifier
from .crossval import EvalReport, cross_validate, oob_evaluate
from .metrics import binarize_dataset


def _evaluate(data: Dataset, trainer, method: str, k: int, seed: int) -> EvalReport:
    if method == "oob":
        return oob_evaluate(data, trainer, seed=seed)
    if method == "cv":
        return cross_validate(data, trainer, k=k, seed=seed)
    raise ConfigError(f"unknown evaluation method {method!r}; expected 'cv' or 'oob'")


@dataclass
class SweepPoint:
    w: int
    six_class: EvalReport
    binary: EvalReport


def window_sweep(
    signal_sets,
    sizes: list[int],
    trainer,
    method: str = "cv",
    k: int = 10,
    seed: int = 0,
    mask: tuple[str, ...] | None = None,
    min_rank: int | None = None,
    rankings=None,
) -> list[SweepPoint]:
    """Rerun cut -> extract -> build -> evaluate for every window size.

    Each point carries the six-class and the binary (retrained) report.
    """
    if not sizes:
        raise ConfigError("no window sizes to sweep")
    points = []
    for w in sizes:
        windows = cut_windows_all(signal_sets, WindowConfig(w=int(w)))
        data = build_dataset(
            windows,
            mask=mask or tuple(f for f in FEATURE_NAMES if f not in LEAK_PRONE_FEATURES),
            min_rank=min_rank,
            rankings=rankings,
        )
        if len(data) == 0:
            raise DatasetError(f"window size {w} yields no instances")
        six = _evaluate(data, trainer, method, k, seed)
        six.setup["w"] = int(w)
        binary = _evaluate(binarize_dataset(data), trainer, method, k, seed)
        binary.setup["w"] = int(w)
        points.append(SweepPoint(w=int(w), six_class=six, binary=binary))
    return points


def sweep_text(points: list[SweepPoint]) -> str:
    lines = [
        "Window Size    Average error (%)",
        "               6 emotions    Binary",
    ]
    for p in points:
        lines.append(
            f"{p.w:<15}{100 * p.six_class.mean_error:<14.1f}{100 * p.binary.mean_error:.1f}"
        )
    return "\n".join(lines)


@dataclass
class SktAblation:
    """Paired with/without-SKT evaluations over a shared seed list."""

    with_skt: list[EvalReport]
    without_skt: list[EvalReport]
    seeds: list[int]
    mask_with: tuple[str, ...] = ()
    mask_without: tuple[str, ...] = ()

    @property
    def mean_error_with(self) -> float:
        return float(np.mean([r.mean_error for r in self.with_skt]))

    @property
    def mean_error_without(self) -> float:
        return float(np.mean([r.mean_error for r in self.without_skt]))

    @property
    def delta(self) -> float:
        """mean(with) - mean(without); negative when SKT helps (leaks)."""
        return self.mean_error_with - self.mean_error_without

    def to_dict(self) -> dict:
        return {
            "seeds": self.seeds,
            "mask_with": list(self.mask_with),
            "mask_without": list(self.mask_without),
            "with_skt": [r.to_dict() for r in self.with_skt],
            "without_skt": [r.to_dict() for r in self.without_skt],
            "mean_error_with": self.mean_error_with,
            "mean_error_without": self.mean_error_without,
            "delta": self.delta,
        }

    def to_text(self) -> str:
        labels = self.with_skt[0].confusion.labels
        names = self.with_skt[0].confusion.label_names
        lines = ["Label                 Error (%) with SKT   Error (%) wo SKT"]
        for code, name in zip(labels, names):
            w_err = np.mean([r.confusion.per_class_error()[code] for r in self.with_skt])
            wo_err = np.mean([r.confusion.per_class_error()[code] for r in self.without_skt])
            lines.append(f"{name:<22}{100 * w_err:<21.1f}{100 * wo_err:.1f}")
        lines.append(
            f"{'Average':<22}{100 * self.mean_error_with:<21.1f}"
            f"{100 * self.mean_error_without:.1f}"
        )
        return "\n".join(lines)


def ablation_skt(
    data_with_skt: Dataset,
    trainer,
    seeds=(0, 1, 2, 3, 4, 5, 6, 7, 8, 9),
    method: str = "oob",
    k: int = 10,
) -> SktAblation:
    """Evaluate the same data with and without SKT_mean, same seeds/folds."""
    if "SKT_mean" not in data_with_skt.feature_mask:
        raise ConfigError("dataset mask must include SKT_mean for the ablation")
    mask_with = data_with_skt.feature_mask
    mask_without = tuple(f for f in mask_with if f != "SKT_mean")
    data_without = data_with_skt.with_mask(mask_without)

    with_reports, without_reports = [], []
    for seed in seeds:
        with_reports.append(_evaluate(data_with_skt, trainer, method, k, int(seed)))
        without_reports.append(_evaluate(data_without, trainer, method, k, int(seed)))
    return SktAblation(
        with_skt=with_reports,
        without_skt=without_reports,
        seeds=[int(s) for s in seeds],
        mask_with=mask_with,
        mask_without=mask_without,
    )


@dataclass
class ClassifierComparison:
    """Per-classifier reports on one dataset, Table-of-classifiers shaped."""

    reports: dict[str, EvalReport] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {name: r.to_dict() for name, r in self.reports.items()}

    def to_text(self) -> str:
        lines = ["Classifier                     Prediction Error (%)"]
        for name, report in self.reports.items():
            lines.append(f"{name:<31}{100 * report.mean_error:.1f}")
        return "\n".join(lines)


DISPLAY_NAMES = {
    "tree": "Decision Tree",
    "ann": "Artificial Neural Network",
    "svm": "Support Vector Machines",
    "rf": "Random Forests",
}


def compare_classifiers(
    data: Dataset, trainers: dict[str, object], k: int = 10, seed: int = 0
) -> ClassifierComparison:
    """10-fold CV for every classifier on the same folds (same seed)."""
    comparison = ClassifierComparison()
    for name, trainer in trainers.items():
        display = DISPLAY_NAMES.get(name, name)
        comparison.reports[display] = cross_validate(data, trainer, k=k, seed=seed)
    return comparison


def collapse_to_binary(report: EvalReport, y_true, y_pred) -> float:
    """Binary error of six-class predictions after valence collapse."""
    from .metrics import binarize_labels

    return float(np.mean(binarize_labels(y_true) != binarize_labels(y_pred)))
