"""Input validation shared by the estimators and the free functions."""

import numpy as np
from sklearn.utils import check_array


class DegenerateFitError(ValueError):
    """Raised when a cloud does not admit the requested fit."""


class DegenerateReferencesError(ValueError):
    """Raised when the reference scores cannot support a t-test."""


def check_cloud(X, name="cloud", min_dim=2):
    X = check_array(X, dtype=np.float64, ensure_min_samples=1,
                    ensure_min_features=min_dim, input_name=name)
    return X


def check_pair(P, Q, names=("suspect", "victim")):
    P = check_cloud(P, names[0])
    Q = check_cloud(Q, names[1])
    if P.shape != Q.shape:
        raise ValueError(
            f"{names[0]} and {names[1]} must share shape, got {P.shape} vs {Q.shape}")
    return P, Q


def check_vector(v, n, name="vector"):
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] != n:
        raise ValueError(f"{name} must have shape ({n},), got {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} contains non-finite values")
    return v


def check_rotation(R, n=None, atol=1e-9):
    R = np.asarray(R, dtype=np.float64)
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise ValueError(f"rotation must be square, got shape {R.shape}")
    if n is not None and R.shape[0] != n:
        raise ValueError(f"rotation is {R.shape[0]}x{R.shape[0]} but cloud dimension is {n}")
    if not np.all(np.isfinite(R)):
        raise ValueError("rotation contains non-finite values")
    if np.abs(R.T @ R - np.eye(R.shape[0])).max() > atol:
        raise ValueError("rotation is not orthogonal")
    if abs(np.linalg.det(R) - 1.0) > atol:
        raise ValueError("rotation must have determinant +1")
    return R


def check_scale(alpha):
    alpha = float(alpha)
    if not np.isfinite(alpha) or alpha <= 0:
        raise ValueError(f"scale factor must be finite and positive, got {alpha}")
    return alpha


def check_random_state(seed):
    """Turn ``seed`` into a ``numpy.random.Generator``."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)
