"""One-hidden-layer neural network trained by backpropagation."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from ..errors import ConfigError, TrainError
from .validate import check_X, check_Xy

ACTIVATIONS = ("logistic", "gaussian-rbf")


def _activate(z: np.ndarray, kind: str) -> np.ndarray:
    if kind == "logistic":
        return 1.0 / (1.0 + np.exp(-z))
    if kind == "gaussian-rbf":
        return np.exp(-z * z)
    raise ConfigError(f"unknown activation {kind!r}; expected one of {ACTIVATIONS}")


def _activate_grad(z: np.ndarray, h: np.ndarray, kind: str) -> np.ndarray:
    if kind == "logistic":
        return h * (1.0 - h)
    return -2.0 * z * h


def _softmax(z: np.ndarray) -> np.ndarray:
    e = np.exp(z - z.max(axis=1, keepdims=True))
    return e / e.sum(axis=1, keepdims=True)


def forward(weights, X, activation="logistic"):
    """Hidden activations and output class probabilities for a batch."""
    W1, b1, W2, b2 = weights
    z1 = X @ W1 + b1
    h = _activate(z1, activation)
    probs = _softmax(h @ W2 + b2)
    return z1, h, probs


def loss_and_gradients(weights, X, y_onehot, activation="logistic"):
    """Mean cross-entropy over the batch and its gradients w.r.t. all weights.

    Single code path for training and for the finite-difference gradient
    check; gradients follow the standard softmax + cross-entropy backward
    pass through the hidden layer.
    """
    W1, b1, W2, b2 = weights
    n = X.shape[0]
    z1, h, probs = forward(weights, X, activation)
    loss = float(-np.sum(y_onehot * np.log(np.clip(probs, 1e-300, None))) / n)

    d_out = (probs - y_onehot) / n
    dW2 = h.T @ d_out
    db2 = d_out.sum(axis=0)
    d_hidden = d_out @ W2.T
    d_z1 = d_hidden * _activate_grad(z1, h, activation)
    dW1 = X.T @ d_z1
    db1 = d_z1.sum(axis=0)
    return loss, (dW1, db1, dW2, db2)


class NeuralNetClassifier(BaseEstimator, ClassifierMixin):
    """Softmax classifier with one hidden layer of ``hidden`` units.

    Features are standardized internally with training-set statistics.
    Minibatch gradient descent on cross-entropy; the hidden activation is
    logistic by default with a gaussian-rbf alternative.
    """

    def __init__(
        self,
        hidden=10,
        activation="logistic",
        lr=0.01,
        epochs=500,
        batch_size=32,
        seed=0,
    ):
        self.hidden = hidden
        self.activation = activation
        self.lr = lr
        self.epochs = epochs
        self.batch_size = batch_size
        self.seed = seed

    def _standardize(self, X: np.ndarray) -> np.ndarray:
        return (X - self.feature_mean_) / self.feature_scale_

    def fit(self, X, y, feature_names=None):
        X, y = check_Xy(X, y)
        if self.activation not in ACTIVATIONS:
            raise ConfigError(
                f"unknown activation {self.activation!r}; expected one of {ACTIVATIONS}"
            )
        if self.hidden < 1:
            raise ConfigError(f"hidden size must be >= 1, got {self.hidden}")
        self.classes_, y_codes = np.unique(y, return_inverse=True)
        n, n_feat = X.shape
        n_classes = len(self.classes_)

        self.feature_mean_ = X.mean(axis=0)
        scale = X.std(axis=0, ddof=0)
        self.feature_scale_ = np.where(scale < 1e-12, 1.0, scale)
        Xs = self._standardize(X)
        y_onehot = np.eye(n_classes)[y_codes]

        rng = np.random.Generator(np.random.PCG64(self.seed))
        W1 = rng.normal(0.0, 1.0 / np.sqrt(n_feat), size=(n_feat, self.hidden))
        b1 = np.zeros(self.hidden)
        W2 = rng.normal(0.0, 1.0 / np.sqrt(self.hidden), size=(self.hidden, n_classes))
        b2 = np.zeros(n_classes)
        weights = [W1, b1, W2, b2]

        batch = min(int(self.batch_size), n)
        self.loss_history_ = []
        for epoch in range(self.epochs):
            perm = rng.permutation(n)
            epoch_loss = 0.0
            for start in range(0, n, batch):
                sel = perm[start : start + batch]
                loss, grads = loss_and_gradients(
                    tuple(weights), Xs[sel], y_onehot[sel], self.activation
                )
                epoch_loss += loss * sel.size
                for w, g in zip(weights, grads):
                    w -= self.lr * g
            epoch_loss /= n
            if not np.isfinite(epoch_loss):
                raise TrainError(
                    f"non-finite loss at epoch {epoch} "
                    f"(lr={self.lr}, activation={self.activation}); "
                    "reduce the learning rate"
                )
            self.loss_history_.append(epoch_loss)

        self.W1_, self.b1_, self.W2_, self.b2_ = weights
        self.n_features_in_ = n_feat
        if feature_names is not None:
            self.feature_names_in_ = np.asarray(feature_names, dtype=object)
        return self

    @property
    def weights_(self):
        return (self.W1_, self.b1_, self.W2_, self.b2_)

    def predict_proba(self, X) -> np.ndarray:
        X = check_X(X, self.n_features_in_)
        _, _, probs = forward(self.weights_, self._standardize(X), self.activation)
        return probs

    def predict(self, X) -> np.ndarray:
        probs = self.predict_proba(X)
        return self.classes_[np.argmax(probs, axis=1)]
