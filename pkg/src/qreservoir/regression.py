"""Pseudoinverse readout training and the error metrics used across experiments.

The readout convention is deliberately bare: callers build the design matrix
(including any all-ones bias column) and get back the minimal-norm
least-squares weights.  No implicit centering, no implicit bias.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

RCOND_DEFAULT = 1e-10


class RegressionError(ValueError):
    """Raised on malformed regression inputs (shape mismatch, non-finite data)."""


@dataclass(frozen=True)
class ReadoutWeights:
    """Trained linear readout: one weight per design-matrix column."""

    weights: np.ndarray
    feature_labels: tuple

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        labels = tuple(self.feature_labels)
        if len(labels) != w.shape[0]:
            raise RegressionError(
                f"{len(labels)} labels for {w.shape[0]} weights"
            )
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "feature_labels", labels)

    def predict(self, design: np.ndarray) -> np.ndarray:
        design = np.asarray(design, dtype=float)
        if design.shape[-1] != self.weights.shape[0]:
            raise RegressionError(
                f"design has {design.shape[-1]} columns, weights expect "
                f"{self.weights.shape[0]}"
            )
        return design @ self.weights


def pseudoinverse(
    matrix: np.ndarray, rcond: float = RCOND_DEFAULT, ridge: float = 0.0
) -> np.ndarray:
    """Moore-Penrose pseudoinverse by SVD with a relative singular-value cutoff.

    Singular values below ``rcond * sigma_max`` are treated as zero.  With
    ``ridge`` > 0 the reciprocals become s / (s^2 + ridge) (Tikhonov); the
    default is the plain pseudoinverse.
    """
    x = np.asarray(matrix, dtype=float)
    if x.ndim != 2:
        raise RegressionError(f"expected a 2-D matrix, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise RegressionError("matrix has non-finite entries")
    u, s, vt = np.linalg.svd(x, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((x.shape[1], x.shape[0]))
    cutoff = rcond * s[0]
    if ridge > 0.0:
        inv = np.where(s > cutoff, s / (s**2 + ridge), 0.0)
    else:
        inv = np.where(s > cutoff, 1.0 / np.where(s > cutoff, s, 1.0), 0.0)
    return (vt.T * inv) @ u.T


def fit_linear(
    design: np.ndarray,
    targets: np.ndarray,
    rcond: float = RCOND_DEFAULT,
    ridge: float = 0.0,
    feature_labels: Optional[Sequence[str]] = None,
) -> ReadoutWeights:
    """Minimal-norm least-squares weights w = X^+ y."""
    x = np.asarray(design, dtype=float)
    y = np.asarray(targets, dtype=float).reshape(-1)
    if x.ndim != 2:
        raise RegressionError(f"design must be 2-D, got shape {x.shape}")
    if x.shape[0] != y.shape[0]:
        raise RegressionError(
            f"design has {x.shape[0]} rows but targets have {y.shape[0]}"
        )
    if not np.all(np.isfinite(y)):
        raise RegressionError("targets have non-finite entries")
    weights = pseudoinverse(x, rcond=rcond, ridge=ridge) @ y
    if feature_labels is None:
        feature_labels = tuple(f"f{i}" for i in range(x.shape[1]))
    return ReadoutWeights(weights, tuple(feature_labels))


def mse(y_pred: np.ndarray, y_true: np.ndarray) -> float:
    """Mean squared error."""
    pred, true = _paired(y_pred, y_true)
    return float(np.mean((pred - true) ** 2))


def nmse(y_pred: np.ndarray, y_true: np.ndarray) -> float:
    """MSE normalized by the variance of the targets.

    A constant prediction at the target mean scores exactly 1.
    """
    pred, true = _paired(y_pred, y_true)
    var = float(np.var(true))
    if var == 0.0:
        raise RegressionError("targets have zero variance; NMSE undefined")
    return float(np.mean((pred - true) ** 2)) / var


def threshold_accuracy(
    y_pred: np.ndarray, y_true: np.ndarray, threshold: float = 0.5
) -> float:
    """Fraction of samples whose thresholded prediction matches the thresholded target."""
    pred, true = _paired(y_pred, y_true)
    return float(np.mean((pred > threshold) == (true > threshold)))


def _paired(y_pred: np.ndarray, y_true: np.ndarray) -> tuple:
    pred = np.asarray(y_pred, dtype=float).reshape(-1)
    true = np.asarray(y_true, dtype=float).reshape(-1)
    if pred.shape[0] == 0:
        raise RegressionError("metrics need at least one sample")
    if pred.shape != true.shape:
        raise RegressionError(
            f"prediction length {pred.shape[0]} != target length {true.shape[0]}"
        )
    return pred, true
