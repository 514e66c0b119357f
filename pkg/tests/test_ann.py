import numpy as np
import pytest

from emobaseline.errors import ConfigError, TrainError
from emobaseline.learn import (
    NeuralNetClassifier,
    load_model,
    loss_and_gradients,
    save_model,
)
from emobaseline.learn.ann import forward
from oracles import finite_difference_gradients


def random_net(rng, n_in=6, hidden=10, n_out=3):
    W1 = rng.normal(0, 0.5, size=(n_in, hidden))
    b1 = rng.normal(0, 0.1, size=hidden)
    W2 = rng.normal(0, 0.5, size=(hidden, n_out))
    b2 = rng.normal(0, 0.1, size=n_out)
    return [W1, b1, W2, b2]


class TestGradients:
    @pytest.mark.parametrize("activation", ["logistic", "gaussian-rbf"])
    def test_backprop_matches_central_differences(self, activation):
        for seed in range(10):
            rng = np.random.default_rng(seed)
            weights = random_net(rng)
            X = rng.normal(size=(8, 6))
            y_onehot = np.eye(3)[rng.integers(0, 3, size=8)]
            _, grads = loss_and_gradients(tuple(weights), X, y_onehot, activation)

            def loss_fn():
                loss, _ = loss_and_gradients(tuple(weights), X, y_onehot, activation)
                return loss

            fd = finite_difference_gradients(loss_fn, weights, h=1e-5)
            for g_analytic, g_numeric in zip(grads, fd):
                rel = np.abs(g_analytic - g_numeric) / np.maximum(
                    np.abs(g_analytic) + np.abs(g_numeric), 1e-8
                )
                assert rel.max() <= 1e-6, f"seed {seed}, activation {activation}"


class TestForward:
    def test_zero_weights_give_uniform_probabilities(self):
        weights = (np.zeros((6, 10)), np.zeros(10), np.zeros((10, 3)), np.zeros(3))
        X = np.random.default_rng(0).normal(size=(5, 6))
        for act in ("logistic", "gaussian-rbf"):
            _, _, probs = forward(weights, X, act)
            np.testing.assert_allclose(probs, 1.0 / 3.0, atol=1e-12)


class TestTraining:
    def test_separable_blobs_learned(self):
        rng = np.random.default_rng(1)
        X = np.vstack(
            [rng.normal([-2, -2], 0.5, size=(60, 2)), rng.normal([2, 2], 0.5, size=(60, 2))]
        )
        y = np.array([0] * 60 + [1] * 60)
        net = NeuralNetClassifier(hidden=10, epochs=500, lr=0.01, seed=0).fit(X, y)
        assert np.mean(net.predict(X) == y) >= 0.95

    def test_deterministic(self):
        rng = np.random.default_rng(2)
        X = rng.normal(size=(60, 4))
        y = rng.integers(0, 3, size=60)
        a = NeuralNetClassifier(epochs=30, seed=7).fit(X, y)
        b = NeuralNetClassifier(epochs=30, seed=7).fit(X, y)
        np.testing.assert_array_equal(a.W1_, b.W1_)
        np.testing.assert_array_equal(a.predict(X), b.predict(X))

    def test_non_finite_loss_raises_with_diagnostics(self, monkeypatch):
        rng = np.random.default_rng(3)
        X = rng.normal(size=(40, 3))
        y = rng.integers(0, 2, size=40)

        def poisoned(weights, Xb, yb, activation):
            return float("nan"), tuple(np.zeros_like(w) for w in weights)

        monkeypatch.setattr("emobaseline.learn.ann.loss_and_gradients", poisoned)
        with pytest.raises(TrainError, match="epoch"):
            NeuralNetClassifier(epochs=5, seed=0).fit(X, y)

    def test_unknown_activation_rejected(self):
        with pytest.raises(ConfigError):
            NeuralNetClassifier(activation="relu").fit(
                np.zeros((4, 2)), np.array([0, 1, 0, 1])
            )

    def test_predicts_original_label_codes(self):
        rng = np.random.default_rng(4)
        X = rng.normal(size=(50, 3))
        y = rng.choice([2, 5], size=50)
        net = NeuralNetClassifier(epochs=20, seed=0).fit(X, y)
        assert set(net.predict(X)) <= {2, 5}

    def test_round_trip_bit_identical(self, tmp_path):
        rng = np.random.default_rng(5)
        X = rng.normal(size=(60, 4))
        y = rng.integers(0, 3, size=60)
        net = NeuralNetClassifier(epochs=40, seed=1).fit(X, y)
        path = tmp_path / "ann.json"
        save_model(net, path)
        loaded = load_model(path)
        np.testing.assert_array_equal(loaded.predict_proba(X), net.predict_proba(X))
