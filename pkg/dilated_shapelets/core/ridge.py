"""
One-vs-rest ridge classifier with leave-one-out regularization selection.

Features are standardized and targets encoded as +1/-1 per class. A single
eigendecomposition, of the covariance when features do not outnumber
samples and of the Gram matrix otherwise, gives the exact leave-one-out
residuals for every alpha of the grid.
"""

import logging
from typing import Any, Optional, Sequence, Union

import numpy as np
from scipy import linalg

from ..exceptions import DegenerateDataError, DimensionMismatchError, DataError
from ..models.features import FeatureMatrix
from ..models.ridge import AlphaGrid, RidgeModel
from ..utils.timing import timed

logger = logging.getLogger(__name__)

FeatureInput = Union[FeatureMatrix, np.ndarray]

# Columns whose population std is below this (relative to their scale) are constant
CONSTANT_STD = 1e-12
# Floor on 1 - leverage when forming leave-one-out residuals
MIN_LEVERAGE_GAP = 1e-12


def _as_array(features: FeatureInput) -> np.ndarray:
    if isinstance(features, FeatureMatrix):
        return features.data
    return np.asarray(features, dtype=np.float64)


def standardize(
    X: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(Z, means, stds, constant)``; constant columns of Z are zero."""
    means = X.mean(axis=0)
    stds = X.std(axis=0)
    constant = stds <= CONSTANT_STD * np.maximum(1.0, np.abs(means))
    Z = (X - means) / np.where(constant, 1.0, stds)
    Z[:, constant] = 0.0
    return Z, means, stds, constant


def apply_standardization(model: RidgeModel, X: np.ndarray) -> np.ndarray:
    Z = (X - model.feature_means) / np.where(model.constant, 1.0, model.feature_stds)
    Z[:, model.constant] = 0.0
    return Z


def encode_targets(codes: np.ndarray, n_classes: int) -> np.ndarray:
    """``(n, C)`` matrix of +1 for the own class and -1 elsewhere."""
    return np.where(codes[:, None] == np.arange(n_classes)[None, :], 1.0, -1.0)


def _loo_primal(
    Z: np.ndarray, Yc: np.ndarray, alphas: Sequence[float]
) -> list[np.ndarray]:
    eigvals, V = linalg.eigh(Z.T @ Z)
    eigvals = np.clip(eigvals, 0.0, None)
    ZV = Z @ V
    VtZtY = ZV.T @ Yc
    n = Z.shape[0]
    residuals = []
    for alpha in alphas:
        inv = 1.0 / (eigvals + alpha)
        fitted = ZV @ (VtZtY * inv[:, None])
        leverage = (ZV**2) @ inv + 1.0 / n
        gap = np.maximum(1.0 - leverage, MIN_LEVERAGE_GAP)
        residuals.append((Yc - fitted) / gap[:, None])
    return residuals


def _loo_dual(Z: np.ndarray, Yc: np.ndarray, alphas: Sequence[float]) -> list[np.ndarray]:
    eigvals, Q = linalg.eigh(Z @ Z.T)
    eigvals = np.clip(eigvals, 0.0, None)
    QtY = Q.T @ Yc
    n = Z.shape[0]
    residuals = []
    for alpha in alphas:
        shrink = eigvals / (eigvals + alpha)
        fitted = Q @ (QtY * shrink[:, None])
        leverage = (Q**2) @ shrink + 1.0 / n
        gap = np.maximum(1.0 - leverage, MIN_LEVERAGE_GAP)
        residuals.append((Yc - fitted) / gap[:, None])
    return residuals


def solve_ridge(Z: np.ndarray, Yc: np.ndarray, alpha: float) -> np.ndarray:
    """Weights ``(p, C)`` solving ``(Z'Z + alpha I) W = Z'Yc``.

    When samples are fewer than features the equivalent system
    ``(ZZ' + alpha I) D = Yc`` is solved and ``W = Z'D``.
    """
    n, p = Z.shape
    if p <= n:
        return linalg.solve(Z.T @ Z + alpha * np.eye(p), Z.T @ Yc, assume_a="pos")
    dual = linalg.solve(Z @ Z.T + alpha * np.eye(n), Yc, assume_a="pos")
    return Z.T @ dual


def fit(
    features: FeatureInput,
    labels: Sequence[int],
    grid: Optional[AlphaGrid] = None,
) -> RidgeModel:
    """Fit one ridge regression per class and pick alpha by leave-one-out error."""
    X = _as_array(features)
    y = np.asarray(labels)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise DimensionMismatchError(
            f"{X.shape[0]} feature rows but {y.shape[0]} labels"
        )
    if X.shape[0] < 2:
        raise DataError("Ridge fit needs at least 2 samples")
    if not np.isfinite(X).all():
        raise DataError("Feature matrix contains non-finite values")
    class_table = tuple(int(c) for c in np.unique(y))
    if len(class_table) < 2:
        raise DataError("Ridge fit needs at least 2 classes")
    grid = grid or AlphaGrid.default()

    Z, means, stds, constant = standardize(X)
    active = ~constant
    if not active.any():
        raise DegenerateDataError("All feature columns are constant")
    Za = np.ascontiguousarray(Z[:, active])
    codes = np.searchsorted(np.asarray(class_table), y)
    Y = encode_targets(codes, len(class_table))
    y_means = Y.mean(axis=0)
    Yc = Y - y_means

    n, p = Za.shape
    with timed(f"ridge fit {n} x {p} ({len(class_table)} classes)"):
        loo = _loo_primal if p <= n else _loo_dual
        residuals = loo(Za, Yc, grid.values)
        scores = [float(np.mean(r**2)) for r in residuals]
        best = int(np.argmin(scores))
        alpha = grid.values[best]
        active_weights = solve_ridge(Za, Yc, alpha)

    loo_scores = Y - residuals[best]
    loo_accuracy = float(np.mean(np.argmax(loo_scores, axis=1) == codes))
    weights = np.zeros((len(class_table), X.shape[1]))
    weights[:, active] = active_weights.T
    logger.info(
        f"Selected alpha {alpha:g} (LOO error {scores[best]:.4f}, "
        f"LOO accuracy {loo_accuracy:.3f}, {int(constant.sum())} constant features)"
    )
    return RidgeModel(
        weights=weights,
        intercepts=y_means,
        feature_means=means,
        feature_stds=stds,
        constant=constant,
        alpha=alpha,
        class_table=class_table,
        alpha_grid=grid,
        alpha_scores=tuple(scores),
        loo_accuracy=loo_accuracy,
    )


def decision_function(model: RidgeModel, features: FeatureInput) -> np.ndarray:
    """``(n, C)`` decision values ``w_c . z + b_c``."""
    X = _as_array(features)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise DimensionMismatchError(
            f"Model expects {model.n_features} features, got "
            f"{X.shape[1] if X.ndim == 2 else X.shape}"
        )
    Z = apply_standardization(model, X)
    return Z @ model.weights.T + model.intercepts


def predict(model: RidgeModel, features: FeatureInput) -> np.ndarray:
    """Class with the largest decision value; ties go to the lowest index."""
    scores = decision_function(model, features)
    return np.asarray(model.class_table)[np.argmax(scores, axis=1)]


def objective_gradient(
    model: RidgeModel, features: FeatureInput, labels: Sequence[int]
) -> np.ndarray:
    """Gradient ``Z'(ZW - Yc) + alpha W`` of each class objective at the fit."""
    X = _as_array(features)
    Z = apply_standardization(model, X)
    codes = np.searchsorted(np.asarray(model.class_table), np.asarray(labels))
    Y = encode_targets(codes, len(model.class_table))
    Yc = Y - Y.mean(axis=0)
    W = model.weights.T
    active = ~model.constant
    gradient = Z.T @ (Z @ W - Yc) + model.alpha * W
    gradient[~active] = 0.0
    return gradient


def score(model: RidgeModel, features: FeatureInput, labels: Any) -> float:
    return float(np.mean(predict(model, features) == np.asarray(labels)))
