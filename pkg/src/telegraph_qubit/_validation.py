"""Input checks shared by the estimator wrappers."""

import numpy as np
from sklearn.utils import check_array

from .exceptions import DomainError


def check_times(X, *, strictly_positive=False):
    """Coerce ``X`` to a 1-D float array of admissible times.

    Accepts a scalar, a 1-D sequence or a single-column 2-D array, the way
    sklearn transformers receive a feature matrix.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 0:
        X = X.reshape(1)
    if X.ndim == 2:
        if X.shape[1] != 1:
            raise ValueError(f"expected a single column of times, got shape {X.shape}")
        X = X[:, 0]
    X = check_array(X, ensure_2d=False, dtype=float)
    if strictly_positive and np.any(X <= 0):
        raise DomainError("times must be > 0")
    if np.any(X < 0):
        raise DomainError("times must be >= 0")
    return X
