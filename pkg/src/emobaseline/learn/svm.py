"""Soft-margin SVM with RBF kernel, trained by sequential minimal optimization."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from ..errors import ConfigError, TrainError
from .validate import check_X, check_Xy

#: Minimum dual coefficient kept as a support vector.
SV_EPS = 0.0
#: Relative alpha change below which an optimization step is rejected.
STEP_EPS = 1e-8


def rbf_kernel(A: np.ndarray, B: np.ndarray, gamma: float) -> np.ndarray:
    """Pairwise k(a, b) = exp(-gamma * ||a - b||^2)."""
    sq = (
        np.sum(A * A, axis=1)[:, None]
        + np.sum(B * B, axis=1)[None, :]
        - 2.0 * (A @ B.T)
    )
    return np.exp(-gamma * np.maximum(sq, 0.0))


@dataclass
class BinarySvm:
    """One trained two-class machine of the one-vs-one ensemble."""

    class_pos: int
    class_neg: int
    X: np.ndarray
    y: np.ndarray
    alpha: np.ndarray
    b: float
    gamma: float
    C: float
    converged: bool = True
    sweeps: int = 0

    @property
    def support_(self) -> np.ndarray:
        return np.nonzero(self.alpha > SV_EPS)[0]

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        """f(x) = sum_i alpha_i y_i k(x_i, x) + b over the support vectors."""
        sv = self.support_
        if sv.size == 0:
            return np.full(X.shape[0], self.b)
        K = rbf_kernel(self.X[sv], X, self.gamma)
        return (self.alpha[sv] * self.y[sv]) @ K + self.b

    def kkt_violation(self) -> float:
        """Largest KKT residual over the training points."""
        margin = self.y * self.decision_function(self.X)
        at_zero = self.alpha <= 1e-9
        at_c = self.alpha >= self.C - 1e-9
        free = ~(at_zero | at_c)
        viol = np.zeros_like(margin)
        viol[at_zero] = np.maximum(0.0, 1.0 - margin[at_zero])
        viol[at_c] = np.maximum(0.0, margin[at_c] - 1.0)
        viol[free] = np.abs(margin[free] - 1.0)
        return float(viol.max()) if viol.size else 0.0


def _smo_solve(K, y, C, tol, max_sweeps, rng):
    """Platt's SMO with a full error cache. Returns (alpha, b, converged, sweeps)."""
    n = y.size
    alpha = np.zeros(n)
    b = 0.0
    errors = -y.astype(np.float64)  # f - y with f == 0 at start

    def take_step(i1, i2):
        nonlocal b, errors
        if i1 == i2:
            return False
        a1, a2 = alpha[i1], alpha[i2]
        y1, y2 = y[i1], y[i2]
        e1, e2 = errors[i1], errors[i2]
        s = y1 * y2
        if s > 0:
            lo, hi = max(0.0, a1 + a2 - C), min(C, a1 + a2)
        else:
            lo, hi = max(0.0, a2 - a1), min(C, C + a2 - a1)
        if hi - lo < 1e-12:
            return False
        k11, k12, k22 = K[i1, i1], K[i1, i2], K[i2, i2]
        eta = k11 + k22 - 2.0 * k12
        if eta > 0:
            a2_new = a2 + y2 * (e1 - e2) / eta
            a2_new = min(max(a2_new, lo), hi)
        else:
            # Degenerate direction (duplicate points): pick the better endpoint.
            f1 = y1 * e1 - a1 * k11 - s * a2 * k12
            f2 = y2 * e2 - s * a1 * k12 - a2 * k22
            lo1 = a1 + s * (a2 - lo)
            hi1 = a1 + s * (a2 - hi)
            obj_lo = (
                lo1 * f1 + lo * f2 + 0.5 * lo1**2 * k11 + 0.5 * lo**2 * k22
                + s * lo * lo1 * k12
            )
            obj_hi = (
                hi1 * f1 + hi * f2 + 0.5 * hi1**2 * k11 + 0.5 * hi**2 * k22
                + s * hi * hi1 * k12
            )
            if obj_lo < obj_hi - 1e-12:
                a2_new = lo
            elif obj_lo > obj_hi + 1e-12:
                a2_new = hi
            else:
                return False
        if abs(a2_new - a2) < STEP_EPS * (a2_new + a2 + STEP_EPS):
            return False
        a1_new = a1 + s * (a2 - a2_new)
        # snap boundary drift
        if a1_new < 1e-10:
            a1_new = 0.0
        elif a1_new > C - 1e-10:
            a1_new = C
        d1 = y1 * (a1_new - a1)
        d2 = y2 * (a2_new - a2)
        b1 = b - e1 - d1 * k11 - d2 * k12
        b2 = b - e2 - d1 * k12 - d2 * k22
        if 0.0 < a1_new < C:
            b_new = b1
        elif 0.0 < a2_new < C:
            b_new = b2
        else:
            b_new = 0.5 * (b1 + b2)
        errors += d1 * K[i1] + d2 * K[i2] + (b_new - b)
        alpha[i1], alpha[i2] = a1_new, a2_new
        b = b_new
        return True

    def examine(i2):
        y2, a2, e2 = y[i2], alpha[i2], errors[i2]
        r2 = e2 * y2
        if not ((r2 < -tol and a2 < C) or (r2 > tol and a2 > 0)):
            return False
        non_bound = np.nonzero((alpha > 0) & (alpha < C))[0]
        if non_bound.size > 1:
            i1 = non_bound[np.argmax(np.abs(errors[non_bound] - e2))]
            if take_step(i1, i2):
                return True
        if non_bound.size:
            start = rng.integers(0, non_bound.size)
            for k in range(non_bound.size):
                if take_step(non_bound[(start + k) % non_bound.size], i2):
                    return True
        start = rng.integers(0, n)
        for k in range(n):
            if take_step((start + k) % n, i2):
                return True
        return False

    examine_all = True
    sweeps = 0
    converged = False
    while sweeps < max_sweeps:
        sweeps += 1
        changed = 0
        if examine_all:
            for i in range(n):
                changed += examine(i)
        else:
            for i in np.nonzero((alpha > 0) & (alpha < C))[0]:
                changed += examine(i)
        if examine_all:
            if changed == 0:
                converged = True
                break
            examine_all = False
        elif changed == 0:
            examine_all = True
    return alpha, b, converged, sweeps


class SvmClassifier(BaseEstimator, ClassifierMixin):
    """One-vs-one ensemble of RBF soft-margin SVMs solved by SMO.

    Defaults follow the tuned operating point gamma=0.1, C=10. Multiclass
    prediction is by pairwise voting with ties broken toward the lowest
    label code. Training raises TrainError on non-convergence, with the
    best-so-far flagged model attached to the error.
    """

    def __init__(self, C=10.0, gamma=0.1, tol=1e-3, max_sweeps=10_000, seed=0):
        self.C = C
        self.gamma = gamma
        self.tol = tol
        self.max_sweeps = max_sweeps
        self.seed = seed

    def fit(self, X, y, feature_names=None):
        X, y = check_Xy(X, y)
        if self.gamma <= 0:
            raise ConfigError(f"gamma must be positive, got {self.gamma}")
        if self.C <= 0:
            raise ConfigError(f"C must be positive, got {self.C}")
        self.classes_ = np.unique(y)
        self.n_features_in_ = X.shape[1]
        if feature_names is not None:
            self.feature_names_in_ = np.asarray(feature_names, dtype=object)

        # RBF distances need comparable feature scales; standardize internally
        # with training statistics (reference SVM packages do the same)
        self.feature_mean_ = X.mean(axis=0)
        scale = X.std(axis=0, ddof=0)
        self.feature_scale_ = np.where(scale < 1e-12, 1.0, scale)
        X = (X - self.feature_mean_) / self.feature_scale_

        seeds = np.random.SeedSequence(self.seed).generate_state(
            max(1, len(self.classes_) * (len(self.classes_) - 1) // 2)
        )
        self.machines_ = []
        failed = []
        pair_idx = 0
        for ai, ca in enumerate(self.classes_):
            for cb in self.classes_[ai + 1 :]:
                rows = np.nonzero((y == ca) | (y == cb))[0]
                Xp = X[rows]
                yp = np.where(y[rows] == ca, 1.0, -1.0)
                K = rbf_kernel(Xp, Xp, self.gamma)
                rng = np.random.Generator(np.random.PCG64(seeds[pair_idx]))
                alpha, b, converged, sweeps = _smo_solve(
                    K, yp, float(self.C), float(self.tol), int(self.max_sweeps), rng
                )
                self.machines_.append(
                    BinarySvm(
                        class_pos=int(ca),
                        class_neg=int(cb),
                        X=Xp.copy(),
                        y=yp,
                        alpha=alpha,
                        b=float(b),
                        gamma=float(self.gamma),
                        C=float(self.C),
                        converged=converged,
                        sweeps=sweeps,
                    )
                )
                if not converged:
                    failed.append((int(ca), int(cb)))
                pair_idx += 1

        if failed:
            raise TrainError(
                f"SMO did not converge within {self.max_sweeps} sweeps for "
                f"class pairs {failed}",
                model=self,
            )
        return self

    def predict(self, X) -> np.ndarray:
        X = check_X(X, self.n_features_in_)
        X = (X - self.feature_mean_) / self.feature_scale_
        class_index = {int(c): k for k, c in enumerate(self.classes_)}
        votes = np.zeros((X.shape[0], len(self.classes_)), dtype=np.int64)
        for mach in self.machines_:
            f = mach.decision_function(X)
            pos = f >= 0
            votes[pos, class_index[mach.class_pos]] += 1
            votes[~pos, class_index[mach.class_neg]] += 1
        return self.classes_[np.argmax(votes, axis=1)]
