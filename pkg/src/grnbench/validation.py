"""Input validation helpers shared across the package."""

from __future__ import annotations

import numpy as np


class ValidationError(ValueError):
    """Raised when an input violates a documented precondition."""


def require(condition: bool, message: str) -> None:
    if not condition:
        raise ValidationError(message)


def as_sample(x, name: str = "sample") -> np.ndarray:
    """Coerce to a 1-D float64 array of finite values with length >= 1."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        arr = arr.ravel()
    require(arr.size >= 1, f"{name} must be non-empty")
    require(bool(np.all(np.isfinite(arr))), f"{name} must contain only finite values")
    return arr


def as_float_matrix(x, name: str = "matrix", allow_nan: bool = False) -> np.ndarray:
    """Coerce to a 2-D float64 array; NaN entries are rejected unless allowed."""
    arr = np.asarray(x, dtype=np.float64)
    require(arr.ndim == 2, f"{name} must be 2-dimensional, got ndim={arr.ndim}")
    require(arr.shape[0] >= 1 and arr.shape[1] >= 1, f"{name} must be non-empty")
    if allow_nan:
        require(
            not bool(np.any(np.isinf(arr))), f"{name} must not contain infinities"
        )
    else:
        require(
            bool(np.all(np.isfinite(arr))), f"{name} must contain only finite values"
        )
    return arr


def check_is_fitted(estimator, attribute: str) -> None:
    if not hasattr(estimator, attribute):
        raise RuntimeError(
            f"{type(estimator).__name__} is not fitted yet; call fit() first"
        )


def readonly(arr: np.ndarray) -> np.ndarray:
    """Return a non-writeable view-owning copy, safe to share across threads."""
    out = np.array(arr, copy=True)
    out.flags.writeable = False
    return out
