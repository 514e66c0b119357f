"""Versioned JSON serialization for trained models.

Floats are written with repr-roundtrip precision, so save -> load -> predict
is bit-identical to the in-memory model.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..errors import ConfigError
from .ann import NeuralNetClassifier
from .forest import RandomForestClassifier
from .svm import BinarySvm, SvmClassifier
from .tree import DecisionTreeClassifier

FORMAT_VERSION = 1


def _tree_nodes_to_dict(model) -> dict:
    return {
        "feature": model.node_feature_.tolist(),
        "threshold": model.node_threshold_.tolist(),
        "left": model.node_left_.tolist(),
        "right": model.node_right_.tolist(),
        "counts": model.node_counts_.tolist(),
        "decrease": model.node_decrease_.tolist(),
    }


def _tree_nodes_from_dict(model, state: dict):
    model.node_feature_ = np.asarray(state["feature"], dtype=np.int32)
    model.node_threshold_ = np.asarray(state["threshold"], dtype=np.float64)
    model.node_left_ = np.asarray(state["left"], dtype=np.int32)
    model.node_right_ = np.asarray(state["right"], dtype=np.int32)
    model.node_counts_ = np.asarray(state["counts"], dtype=np.float64)
    model.node_decrease_ = np.asarray(state["decrease"], dtype=np.float64)


def _common_meta(model, kind: str) -> dict:
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": kind,
        "params": model.get_params(),
        "classes": np.asarray(model.classes_).tolist(),
        "n_features": int(model.n_features_in_),
    }
    names = getattr(model, "feature_names_in_", None)
    if names is not None:
        doc["feature_names"] = [str(x) for x in names]
    return doc


def model_to_dict(model) -> dict:
    if isinstance(model, DecisionTreeClassifier):
        doc = _common_meta(model, "tree")
        doc["state"] = _tree_nodes_to_dict(model)
    elif isinstance(model, RandomForestClassifier):
        doc = _common_meta(model, "rf")
        doc["state"] = {
            "trees": [
                {
                    "feature": f.tolist(),
                    "threshold": t.tolist(),
                    "left": l.tolist(),
                    "right": r.tolist(),
                    "counts": c.tolist(),
                    "decrease": d.tolist(),
                }
                for f, t, l, r, c, d in model.trees_
            ],
            "in_bag_counts": model.in_bag_counts_.tolist(),
            "oob_error": model.oob_error_,
            "oob_coverage": model.oob_coverage_,
            "importances": model.importances_.tolist(),
            "mtry": model.mtry_,
        }
    elif isinstance(model, NeuralNetClassifier):
        doc = _common_meta(model, "ann")
        doc["state"] = {
            "W1": model.W1_.tolist(),
            "b1": model.b1_.tolist(),
            "W2": model.W2_.tolist(),
            "b2": model.b2_.tolist(),
            "feature_mean": model.feature_mean_.tolist(),
            "feature_scale": model.feature_scale_.tolist(),
        }
    elif isinstance(model, SvmClassifier):
        doc = _common_meta(model, "svm")
        doc["state"] = {
            "feature_mean": model.feature_mean_.tolist(),
            "feature_scale": model.feature_scale_.tolist(),
            "machines": [
                {
                    "class_pos": m.class_pos,
                    "class_neg": m.class_neg,
                    "X": m.X.tolist(),
                    "y": m.y.tolist(),
                    "alpha": m.alpha.tolist(),
                    "b": m.b,
                    "gamma": m.gamma,
                    "C": m.C,
                    "converged": m.converged,
                    "sweeps": m.sweeps,
                }
                for m in model.machines_
            ]
        }
    else:
        raise ConfigError(f"cannot serialize model of type {type(model).__name__}")
    return doc


def model_from_dict(doc: dict):
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ConfigError(f"unsupported model format version {version!r}")
    kind = doc.get("kind")
    state = doc["state"]
    if kind == "tree":
        model = DecisionTreeClassifier(**doc["params"])
        _tree_nodes_from_dict(model, state)
    elif kind == "rf":
        model = RandomForestClassifier(**doc["params"])
        model.trees_ = [
            (
                np.asarray(t["feature"], dtype=np.int32),
                np.asarray(t["threshold"], dtype=np.float64),
                np.asarray(t["left"], dtype=np.int32),
                np.asarray(t["right"], dtype=np.int32),
                np.asarray(t["counts"], dtype=np.float64),
                np.asarray(t["decrease"], dtype=np.float64),
            )
            for t in state["trees"]
        ]
        model.in_bag_counts_ = np.asarray(state["in_bag_counts"], dtype=np.int32)
        model.oob_error_ = float(state["oob_error"])
        model.oob_coverage_ = float(state["oob_coverage"])
        model.importances_ = np.asarray(state["importances"], dtype=np.float64)
        model.mtry_ = int(state["mtry"])
    elif kind == "ann":
        model = NeuralNetClassifier(**doc["params"])
        model.W1_ = np.asarray(state["W1"], dtype=np.float64)
        model.b1_ = np.asarray(state["b1"], dtype=np.float64)
        model.W2_ = np.asarray(state["W2"], dtype=np.float64)
        model.b2_ = np.asarray(state["b2"], dtype=np.float64)
        model.feature_mean_ = np.asarray(state["feature_mean"], dtype=np.float64)
        model.feature_scale_ = np.asarray(state["feature_scale"], dtype=np.float64)
    elif kind == "svm":
        model = SvmClassifier(**doc["params"])
        model.feature_mean_ = np.asarray(state["feature_mean"], dtype=np.float64)
        model.feature_scale_ = np.asarray(state["feature_scale"], dtype=np.float64)
        model.machines_ = [
            BinarySvm(
                class_pos=int(m["class_pos"]),
                class_neg=int(m["class_neg"]),
                X=np.asarray(m["X"], dtype=np.float64),
                y=np.asarray(m["y"], dtype=np.float64),
                alpha=np.asarray(m["alpha"], dtype=np.float64),
                b=float(m["b"]),
                gamma=float(m["gamma"]),
                C=float(m["C"]),
                converged=bool(m["converged"]),
                sweeps=int(m["sweeps"]),
            )
            for m in state["machines"]
        ]
    else:
        raise ConfigError(f"unknown model kind {kind!r}")

    model.classes_ = np.asarray(doc["classes"], dtype=np.int64)
    model.n_features_in_ = int(doc["n_features"])
    if "feature_names" in doc:
        model.feature_names_in_ = np.asarray(doc["feature_names"], dtype=object)
    return model


def save_model(model, path: str | Path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model)))


def load_model(path: str | Path):
    return model_from_dict(json.loads(Path(path).read_text()))
