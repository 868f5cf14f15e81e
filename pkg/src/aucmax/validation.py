"""Input checks shared by estimators, metrics, and the experiment harness."""

from __future__ import annotations

import numpy as np


def as_float_matrix(X, name: str = "X") -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"{name} must be a 2-D array, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} contains NaN or Inf")
    return X


def as_float_vector(x, name: str = "x") -> np.ndarray:
    x = np.asarray(x, dtype=np.float64).ravel()
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} contains NaN or Inf")
    return x


def as_binary_labels(y, name: str = "y", require_both_classes: bool = False) -> np.ndarray:
    y = np.asarray(y).ravel()
    if y.size == 0:
        raise ValueError(f"{name} is empty")
    out = y.astype(np.int64)
    if not np.array_equal(out, np.asarray(y, dtype=np.float64)):
        raise ValueError(f"{name} must contain only 0/1 labels")
    if not np.all((out == 0) | (out == 1)):
        raise ValueError(f"{name} must contain only 0/1 labels")
    if require_both_classes and (out.min() == out.max()):
        raise ValueError(f"{name} must contain both classes")
    return out


def check_same_length(a, b, names: str = "inputs") -> None:
    if len(a) != len(b):
        raise ValueError(f"{names} have mismatched lengths: {len(a)} vs {len(b)}")
