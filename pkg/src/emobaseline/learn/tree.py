"""CART decision tree with Gini splitting."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from ..errors import ConfigError
from ._tree_core import apply_tree, grow_tree
from .validate import check_X, check_Xy


def gini_impurity(class_counts) -> float:
    """Gini node impurity 1 - sum(p_k^2) over class proportions."""
    counts = np.asarray(class_counts, dtype=np.float64)
    if counts.ndim != 1 or np.any(counts < 0):
        raise ValueError(f"class counts must be a non-negative vector, got {class_counts!r}")
    total = counts.sum()
    if total <= 0:
        raise ValueError("all-zero class counts have no impurity")
    p = counts / total
    return float(1.0 - np.sum(p * p))


class DecisionTreeClassifier(BaseEstimator, ClassifierMixin):
    """Greedy binary CART: splits maximize Gini decrease, no pruning.

    Split thresholds are midpoints between consecutive sorted distinct
    values. mtry=None considers every feature at every split; an integer
    samples that many features without replacement (used by the forest).
    Prediction ties break toward the lowest label code.
    """

    def __init__(self, min_leaf=5, max_depth=30, mtry=None, seed=0):
        self.min_leaf = min_leaf
        self.max_depth = max_depth
        self.mtry = mtry
        self.seed = seed

    def fit(self, X, y, feature_names=None):
        X, y = check_Xy(X, y)
        if self.min_leaf < 1:
            raise ConfigError(f"min_leaf must be >= 1, got {self.min_leaf}")
        n_feat = X.shape[1]
        mtry = n_feat if self.mtry is None else int(self.mtry)
        if not 1 <= mtry <= n_feat:
            raise ConfigError(f"mtry {mtry} outside [1, {n_feat}]")
        self.classes_, y_codes = np.unique(y, return_inverse=True)
        max_depth = -1 if self.max_depth is None else int(self.max_depth)
        nodes = grow_tree(
            X,
            y_codes.astype(np.int64),
            np.arange(X.shape[0], dtype=np.int64),
            len(self.classes_),
            mtry,
            int(self.min_leaf),
            max_depth,
            np.uint32(self.seed & 0xFFFFFFFF),
        )
        (
            self.node_feature_,
            self.node_threshold_,
            self.node_left_,
            self.node_right_,
            self.node_counts_,
            self.node_decrease_,
        ) = nodes
        self.n_features_in_ = n_feat
        if feature_names is not None:
            self.feature_names_in_ = np.asarray(feature_names, dtype=object)
        return self

    @property
    def n_nodes_(self) -> int:
        return int(self.node_feature_.size)

    def leaf_distributions(self) -> np.ndarray:
        """Per-node class distributions (rows sum to 1)."""
        totals = self.node_counts_.sum(axis=1, keepdims=True)
        return self.node_counts_ / totals

    def apply(self, X) -> np.ndarray:
        X = check_X(X, self.n_features_in_)
        return apply_tree(
            self.node_feature_, self.node_threshold_, self.node_left_, self.node_right_, X
        )

    def predict_proba(self, X) -> np.ndarray:
        leaves = self.apply(X)
        counts = self.node_counts_[leaves]
        return counts / counts.sum(axis=1, keepdims=True)

    def predict(self, X) -> np.ndarray:
        leaves = self.apply(X)
        # argmax takes the first maximum: lowest class code wins ties
        codes = np.argmax(self.node_counts_[leaves], axis=1)
        return self.classes_[codes]

    def decision_path_importance(self) -> np.ndarray:
        """Total normalized Gini decrease per feature for this tree."""
        imp = np.zeros(self.n_features_in_, dtype=np.float64)
        n_root = self.node_counts_[0].sum()
        split_mask = self.node_feature_ >= 0
        np.add.at(imp, self.node_feature_[split_mask], self.node_decrease_[split_mask])
        return imp / n_root
