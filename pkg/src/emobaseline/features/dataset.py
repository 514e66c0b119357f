"""Labeled feature datasets with masking and rank-based filtering."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from ..errors import DatasetError
from ..labels import EmotionLabel
from .extract import DEFAULT_FEATURE_MASK, FEATURE_NAMES, N_FEATURES, extract_features
from .windows import Window


@dataclass(frozen=True)
class LabeledInstance:
    """One window's full 17-feature vector plus label and provenance."""

    features: np.ndarray
    label: EmotionLabel
    session_id: str
    window_start_s: float
    clip_id: str | None = None

    def __post_init__(self):
        feats = np.asarray(self.features, dtype=np.float64)
        object.__setattr__(self, "features", feats)
        if feats.shape != (N_FEATURES,):
            raise DatasetError(f"expected {N_FEATURES} features, got {feats.shape}")
        if not np.all(np.isfinite(feats)):
            raise DatasetError("non-finite feature values")


@dataclass
class Dataset:
    """Instances plus the active feature mask (full 17 vectors are retained).

    ``binary=True`` switches the label space: instances keep their emotion
    labels, but ``y`` yields the Negative(0)/Positive(1) valence collapse.
    """

    instances: list[LabeledInstance]
    feature_mask: tuple[str, ...] = DEFAULT_FEATURE_MASK
    binary: bool = False

    def __post_init__(self):
        if not self.feature_mask:
            raise DatasetError("feature mask must not be empty")
        unknown = [f for f in self.feature_mask if f not in FEATURE_NAMES]
        if unknown:
            raise DatasetError(f"unknown features in mask: {', '.join(unknown)}")
        # Keep mask in canonical order regardless of input order.
        object.__setattr__(
            self,
            "feature_mask",
            tuple(f for f in FEATURE_NAMES if f in set(self.feature_mask)),
        )

    def __len__(self) -> int:
        return len(self.instances)

    @property
    def feature_names(self) -> tuple[str, ...]:
        return self.feature_mask

    @property
    def mask_indices(self) -> np.ndarray:
        idx = {name: i for i, name in enumerate(FEATURE_NAMES)}
        return np.array([idx[f] for f in self.feature_mask], dtype=np.intp)

    @property
    def X(self) -> np.ndarray:
        """(n_instances, n_masked_features) design matrix."""
        if not self.instances:
            return np.empty((0, len(self.feature_mask)))
        full = np.stack([inst.features for inst in self.instances])
        return full[:, self.mask_indices]

    @property
    def y(self) -> np.ndarray:
        codes = np.array([int(inst.label) for inst in self.instances], dtype=np.int64)
        if self.binary:
            from ..eval.metrics import binarize_labels

            return binarize_labels(codes)
        return codes

    def with_mask(self, feature_mask: tuple[str, ...]) -> "Dataset":
        return Dataset(
            instances=self.instances,
            feature_mask=tuple(feature_mask),
            binary=self.binary,
        )

    def class_counts(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for code in self.y:
            counts[int(code)] = counts.get(int(code), 0) + 1
        return counts


def build_dataset(
    windows: list[Window],
    mask: tuple[str, ...] = DEFAULT_FEATURE_MASK,
    min_rank: int | None = None,
    rankings: Mapping[str, int] | None = None,
) -> Dataset:
    """Featurize windows into a classification dataset.

    Rest windows are dropped (transition periods and motion artifacts).
    When ``min_rank`` is set, windows whose source clip scored below it are
    dropped too; every referenced clip must then have a ranking.
    """
    if min_rank is not None and rankings is None:
        raise DatasetError("min_rank filtering requires a rankings mapping")

    instances = []
    for win in windows:
        if win.label == EmotionLabel.REST:
            continue
        if min_rank is not None:
            if win.clip_id is None or win.clip_id not in rankings:
                raise DatasetError(
                    f"window at {win.window_start_s}s references clip "
                    f"{win.clip_id!r} with no ranking"
                )
            if rankings[win.clip_id] < min_rank:
                continue
        instances.append(
            LabeledInstance(
                features=extract_features(win),
                label=win.label,
                session_id=win.session_id,
                window_start_s=win.window_start_s,
                clip_id=win.clip_id,
            )
        )
    instances.sort(key=lambda inst: (inst.session_id, inst.window_start_s))
    return Dataset(instances=instances, feature_mask=mask)


DATASET_HEADER = ["session_id", "window_start_s", "label", "clip_id"] + list(FEATURE_NAMES)


def write_dataset_csv(path: str | Path, dataset: Dataset) -> None:
    """Export with all 17 feature columns; the mask travels in sidecar metadata."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(DATASET_HEADER)
        for inst in dataset.instances:
            row = [
                inst.session_id,
                repr(float(inst.window_start_s)),
                int(inst.label),
                inst.clip_id or "",
            ]
            row += [repr(float(v)) for v in inst.features]
            w.writerow(row)


def read_dataset_csv(
    path: str | Path, feature_mask: tuple[str, ...] = DEFAULT_FEATURE_MASK
) -> Dataset:
    instances = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != DATASET_HEADER:
            raise DatasetError(f"{path}: unexpected dataset header")
        for row in reader:
            if not row:
                continue
            instances.append(
                LabeledInstance(
                    features=np.array([float(v) for v in row[4:]], dtype=np.float64),
                    label=EmotionLabel.from_code(int(row[2])),
                    session_id=row[0],
                    window_start_s=float(row[1]),
                    clip_id=row[3] or None,
                )
            )
    return Dataset(instances=instances, feature_mask=feature_mask)
