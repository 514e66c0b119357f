"""Random forest with out-of-bag error and Gini variable importance."""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from ..errors import ConfigError, PredictError
from ._tree_core import apply_tree, grow_tree
from .validate import check_X, check_Xy


class RandomForestClassifier(BaseEstimator, ClassifierMixin):
    """Bootstrap ensemble of fully grown CART trees.

    Each tree trains on n draws with replacement and samples ``mtry``
    features (default floor(sqrt(n_features))) without replacement at every
    split. OOB error is the majority-vote error over the trees that did not
    see each instance; importance is the per-feature total Gini decrease
    averaged over trees. Ties in any vote break toward the lowest label code.
    """

    def __init__(self, n_trees=500, mtry=None, min_leaf=1, max_depth=None, seed=0):
        self.n_trees = n_trees
        self.mtry = mtry
        self.min_leaf = min_leaf
        self.max_depth = max_depth
        self.seed = seed

    def fit(self, X, y, feature_names=None):
        X, y = check_Xy(X, y)
        if self.n_trees < 1:
            raise ConfigError(f"n_trees must be >= 1, got {self.n_trees}")
        n, n_feat = X.shape
        mtry = int(self.mtry) if self.mtry is not None else max(1, math.isqrt(n_feat))
        if mtry > n_feat:
            raise ConfigError(f"mtry {mtry} exceeds feature count {n_feat}")
        if mtry < 1:
            raise ConfigError(f"mtry must be >= 1, got {mtry}")
        max_depth = -1 if self.max_depth is None else int(self.max_depth)

        self.classes_, y_codes = np.unique(y, return_inverse=True)
        y_codes = y_codes.astype(np.int64)
        n_classes = len(self.classes_)

        seeds = np.random.SeedSequence(self.seed).generate_state(2 * self.n_trees)
        self.trees_ = []
        self.in_bag_counts_ = np.zeros((self.n_trees, n), dtype=np.int32)
        oob_votes = np.zeros((n, n_classes), dtype=np.int64)
        importance_total = np.zeros(n_feat, dtype=np.float64)

        for t in range(self.n_trees):
            rng = np.random.Generator(np.random.PCG64(seeds[2 * t]))
            in_bag = rng.integers(0, n, size=n).astype(np.int64)
            nodes = grow_tree(
                X,
                y_codes,
                in_bag,
                n_classes,
                mtry,
                int(self.min_leaf),
                max_depth,
                np.uint32(seeds[2 * t + 1]),
            )
            self.trees_.append(nodes)
            np.add.at(self.in_bag_counts_[t], in_bag, 1)

            oob_rows = np.nonzero(self.in_bag_counts_[t] == 0)[0]
            if oob_rows.size:
                feature, threshold, left, right, counts, decrease = nodes
                leaves = apply_tree(feature, threshold, left, right, X[oob_rows])
                votes = np.argmax(counts[leaves], axis=1)
                oob_votes[oob_rows, votes] += 1

            _, _, _, _, _, decrease = nodes
            feat_arr = nodes[0]
            split_mask = feat_arr >= 0
            np.add.at(importance_total, feat_arr[split_mask], decrease[split_mask] / n)

        self.mtry_ = mtry
        self.n_features_in_ = n_feat
        if feature_names is not None:
            self.feature_names_in_ = np.asarray(feature_names, dtype=object)

        voted = oob_votes.sum(axis=1) > 0
        self.oob_coverage_ = float(np.mean(voted))
        oob_pred = np.argmax(oob_votes, axis=1)
        self.oob_error_ = float(np.mean(oob_pred[voted] != y_codes[voted]))
        self.oob_votes_ = oob_votes
        self.importances_ = importance_total / self.n_trees
        return self

    def _vote_counts(self, X) -> np.ndarray:
        X = check_X(X, self.n_features_in_)
        votes = np.zeros((X.shape[0], len(self.classes_)), dtype=np.int64)
        for feature, threshold, left, right, counts, _ in self.trees_:
            leaves = apply_tree(feature, threshold, left, right, X)
            votes[np.arange(X.shape[0]), np.argmax(counts[leaves], axis=1)] += 1
        return votes

    def predict(self, X) -> np.ndarray:
        votes = self._vote_counts(X)
        return self.classes_[np.argmax(votes, axis=1)]

    def predict_proba(self, X) -> np.ndarray:
        votes = self._vote_counts(X).astype(np.float64)
        return votes / votes.sum(axis=1, keepdims=True)


def variable_importance(model) -> list[tuple[str, float]]:
    """Features sorted by mean Gini decrease, most important first."""
    if not hasattr(model, "importances_"):
        raise PredictError("model has no Gini importances; train a forest first")
    names = getattr(model, "feature_names_in_", None)
    if names is None:
        names = [f"f{i}" for i in range(model.n_features_in_)]
    order = sorted(
        range(len(model.importances_)), key=lambda i: (-model.importances_[i], i)
    )
    return [(str(names[i]), float(model.importances_[i])) for i in order]
