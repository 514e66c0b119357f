"""The four classifiers, dataset-level training helpers, and model IO.

Estimators follow the sklearn fit/predict/get_params contract and work
directly with the wider ecosystem (clone, cross_val_score, pipelines); the
``train_*`` helpers wrap them for Dataset inputs and carry feature names
through for importance reports.
"""

from __future__ import annotations

import numpy as np

from ..features.dataset import Dataset
from .ann import NeuralNetClassifier, forward, loss_and_gradients
from .forest import RandomForestClassifier, variable_importance
from .io import load_model, model_from_dict, model_to_dict, save_model
from .svm import BinarySvm, SvmClassifier, rbf_kernel
from .tree import DecisionTreeClassifier, gini_impurity
from .validate import check_X, check_Xy

#: classifier registry keyed by the CLI / service names
CLASSIFIERS = {
    "tree": DecisionTreeClassifier,
    "rf": RandomForestClassifier,
    "ann": NeuralNetClassifier,
    "svm": SvmClassifier,
}


def make_classifier(kind: str, seed: int = 0, **params):
    try:
        cls = CLASSIFIERS[kind]
    except KeyError:
        raise ValueError(
            f"unknown classifier {kind!r}; expected one of {sorted(CLASSIFIERS)}"
        ) from None
    return cls(seed=seed, **params)


def train_tree(data: Dataset, **params) -> DecisionTreeClassifier:
    model = DecisionTreeClassifier(**params)
    return model.fit(data.X, data.y, feature_names=data.feature_names)


def train_forest(
    data: Dataset, n_trees: int = 500, mtry: int | None = None, seed: int = 0, **params
) -> RandomForestClassifier:
    model = RandomForestClassifier(n_trees=n_trees, mtry=mtry, seed=seed, **params)
    return model.fit(data.X, data.y, feature_names=data.feature_names)


def predict_forest(model: RandomForestClassifier, features) -> int:
    """Majority-vote prediction for a single feature vector."""
    return int(model.predict(np.atleast_2d(np.asarray(features, dtype=np.float64)))[0])


def train_ann(data: Dataset, **params) -> NeuralNetClassifier:
    model = NeuralNetClassifier(**params)
    return model.fit(data.X, data.y, feature_names=data.feature_names)


def train_svm(data: Dataset, gamma: float = 0.1, C: float = 10.0, **params) -> SvmClassifier:
    model = SvmClassifier(gamma=gamma, C=C, **params)
    return model.fit(data.X, data.y, feature_names=data.feature_names)


__all__ = [
    "CLASSIFIERS",
    "BinarySvm",
    "DecisionTreeClassifier",
    "NeuralNetClassifier",
    "RandomForestClassifier",
    "SvmClassifier",
    "check_X",
    "check_Xy",
    "forward",
    "gini_impurity",
    "load_model",
    "loss_and_gradients",
    "make_classifier",
    "model_from_dict",
    "model_to_dict",
    "predict_forest",
    "rbf_kernel",
    "save_model",
    "train_ann",
    "train_forest",
    "train_svm",
    "train_tree",
    "variable_importance",
]
