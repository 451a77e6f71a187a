"""Letter classifiers: a from-scratch linear SVM and Gaussian naive Bayes.

Both follow the fit/predict estimator convention. Training is fully
deterministic for a given (data, params, seed) triple.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .errors import (
    DimensionMismatchError,
    EmptyTestSetError,
    SingleClassError,
)

DEFAULT_C = 1.0
DEFAULT_TOL = 1e-4
DEFAULT_MAX_EPOCHS = 1000
VARIANCE_FLOOR = 1e-6


def _validate_training(X, y):
    X, y = check_X_y(X, y, dtype=np.float64, y_numeric=True)
    y = y.astype(np.int64)
    classes = np.unique(y)
    if len(classes) < 2:
        raise SingleClassError("training data must contain at least two classes")
    return X, y, classes


def _check_dim(model, X):
    X = check_array(X, dtype=np.float64)
    if X.shape[1] != model.n_features_in_:
        raise DimensionMismatchError(
            f"model expects {model.n_features_in_} features, got {X.shape[1]}")
    return X


def _primal_objective(Xa: np.ndarray, y: np.ndarray, w: np.ndarray, C: float) -> float:
    margins = 1.0 - y * (Xa @ w)
    return 0.5 * float(w @ w) + C * float(np.maximum(margins, 0.0).sum())


def _dual_cd(Xa: np.ndarray, y: np.ndarray, C: float, tol: float,
             max_epochs: int, rng: np.random.Generator):
    """Coordinate descent on the hinge-loss dual with box constraints.

    One alpha per sample; each update is the exact single-variable
    minimizer clipped to [0, C]. The weight vector kept for the model is
    the epoch-end iterate with the lowest primal objective seen so far,
    which makes the reported objective curve non-increasing even though
    raw dual iterates can transiently raise the primal.
    """
    n, d = Xa.shape
    alpha = np.zeros(n)
    w = np.zeros(d)
    q_diag = np.einsum("ij,ij->i", Xa, Xa)

    best_w = w.copy()
    best_obj = _primal_objective(Xa, y, w, C)
    history = []

    for _ in range(max_epochs):
        worst = 0.0
        for i in rng.permutation(n):
            q = q_diag[i]
            if q <= 0.0:
                continue
            g = y[i] * float(Xa[i] @ w) - 1.0
            a = alpha[i]
            if a <= 0.0:
                pg = min(g, 0.0)
            elif a >= C:
                pg = max(g, 0.0)
            else:
                pg = g
            if pg == 0.0:
                continue
            worst = max(worst, abs(pg))
            a_new = min(max(a - g / q, 0.0), C)
            if a_new != a:
                w += (a_new - a) * y[i] * Xa[i]
                alpha[i] = a_new
        obj = _primal_objective(Xa, y, w, C)
        if obj < best_obj:
            best_obj = obj
            best_w = w.copy()
        history.append(best_obj)
        if worst < tol:
            break
    return best_w, np.asarray(history)


class LinearSVM(ClassifierMixin, BaseEstimator):
    """Linear SVM trained by dual coordinate descent.

    The bias is an extra always-one feature, so it shares the L2 penalty
    with the weights. Multiclass uses one-vs-rest; ties in both the binary
    margins and the argmax resolve to the lowest label.

    Attributes after fit: classes_, coef_ (n_problems, n_features),
    intercept_, n_features_in_, objective_curves_ (one per binary problem).
    """

    def __init__(self, C: float = DEFAULT_C, tol: float = DEFAULT_TOL,
                 max_epochs: int = DEFAULT_MAX_EPOCHS, seed: int = 0):
        self.C = C
        self.tol = tol
        self.max_epochs = max_epochs
        self.seed = seed

    def fit(self, X, y):
        if self.C <= 0:
            raise ValueError(f"C must be positive, got {self.C}")
        if self.tol <= 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_epochs < 1:
            raise ValueError(f"max_epochs must be >= 1, got {self.max_epochs}")
        X, y, classes = _validate_training(X, y)
        self.classes_ = classes
        self.n_features_in_ = X.shape[1]

        Xa = np.hstack([X, np.ones((X.shape[0], 1))])
        rng = np.random.default_rng(self.seed)

        # Binary: one separating problem. Multiclass: one-vs-rest per class.
        if len(classes) == 2:
            targets = [classes[1]]
        else:
            targets = list(classes)
        coefs, intercepts, curves = [], [], []
        for positive in targets:
            ybin = np.where(y == positive, 1.0, -1.0)
            w_aug, curve = _dual_cd(Xa, ybin, self.C, self.tol,
                                    self.max_epochs, rng)
            coefs.append(w_aug[:-1])
            intercepts.append(w_aug[-1])
            curves.append(curve)
        self.coef_ = np.vstack(coefs)
        self.intercept_ = np.asarray(intercepts)
        self.objective_curves_ = curves
        return self

    def decision_function(self, X) -> np.ndarray:
        """Per-class scores, shape (n, n_classes).

        Binary models produce a single margin m toward the higher class;
        the score columns are then (-m, +m) so argmax works uniformly.
        """
        check_is_fitted(self, "coef_")
        X = _check_dim(self, X)
        raw = X @ self.coef_.T + self.intercept_
        if len(self.classes_) == 2:
            return np.column_stack([-raw[:, 0], raw[:, 0]])
        return raw

    def predict(self, X) -> np.ndarray:
        scores = self.decision_function(X)
        return self.classes_[np.argmax(scores, axis=1)]


class GaussianNaiveBayes(ClassifierMixin, BaseEstimator):
    """Gaussian naive Bayes with empirical log priors.

    Per-class feature variances are population variances floored at 1e-6
    so constant features cannot zero out a likelihood. Ties go to the
    lowest label.
    """

    def __init__(self, variance_floor: float = VARIANCE_FLOOR):
        self.variance_floor = variance_floor

    def fit(self, X, y):
        if self.variance_floor <= 0:
            raise ValueError("variance_floor must be positive")
        X, y, classes = _validate_training(X, y)
        self.classes_ = classes
        self.n_features_in_ = X.shape[1]
        n = len(y)
        means, variances, priors = [], [], []
        for c in classes:
            rows = X[y == c]
            means.append(rows.mean(axis=0))
            variances.append(np.maximum(rows.var(axis=0), self.variance_floor))
            priors.append(np.log(len(rows) / n))
        self.theta_ = np.vstack(means)
        self.var_ = np.vstack(variances)
        self.class_log_prior_ = np.asarray(priors)
        return self

    def joint_log_likelihood(self, X) -> np.ndarray:
        """log P(class) + log P(x | class) for each class, shape (n, k)."""
        check_is_fitted(self, "theta_")
        X = _check_dim(self, X)
        out = np.empty((X.shape[0], len(self.classes_)))
        for k in range(len(self.classes_)):
            diff = X - self.theta_[k]
            log_pdf = -0.5 * (np.log(2.0 * np.pi * self.var_[k])
                              + diff * diff / self.var_[k])
            out[:, k] = self.class_log_prior_[k] + log_pdf.sum(axis=1)
        return out

    def predict(self, X) -> np.ndarray:
        jll = self.joint_log_likelihood(X)
        return self.classes_[np.argmax(jll, axis=1)]


def score_classes(model, X) -> np.ndarray:
    """Uniform per-class score matrix for either classifier."""
    if hasattr(model, "decision_function"):
        return model.decision_function(X)
    return model.joint_log_likelihood(X)


def evaluate(model, test, labels=None) -> float:
    """Fraction of correct predictions on a Dataset or an (X, y) pair."""
    if labels is None:
        features, labels = test.features, test.labels
    else:
        features = test
    if len(labels) == 0:
        raise EmptyTestSetError("cannot evaluate on an empty test set")
    return float(np.mean(model.predict(features) == labels))
