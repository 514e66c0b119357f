"""Input validation helpers shared by the estimators."""

from __future__ import annotations

import numpy as np

from ..errors import PredictError, TrainError


def check_Xy(X, y) -> tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim != 2:
        raise TrainError(f"X must be 2-D, got shape {X.shape}")
    if X.shape[0] == 0:
        raise TrainError("empty dataset")
    if y.ndim != 1 or y.shape[0] != X.shape[0]:
        raise TrainError(f"y shape {y.shape} does not match X shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise TrainError("X contains non-finite values")
    return X, y.astype(np.int64)


def check_X(X, n_features: int) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    single = X.ndim == 1
    if single:
        X = X.reshape(1, -1)
    if X.ndim != 2 or X.shape[1] != n_features:
        raise PredictError(
            f"expected feature dimension {n_features}, got shape {X.shape}"
        )
    if not np.all(np.isfinite(X)):
        raise PredictError("X contains non-finite values")
    return X
