"""Point cloud alignment: undo an unknown global rotation/scale/translation.

The scale is read off a least-squares hypersphere fit of the suspect cloud
(victim embeddings are unit-norm, so a suspect radius ``r`` means a scale of
``1/r``). Rotation and translation then come from an SVD of the cross
covariance of the centred, rescaled suspect and the centred victim.
"""

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import DegenerateFitError, check_cloud, check_pair, check_rotation

PINV_RTOL = 1e-12


def pinv(M, rtol=PINV_RTOL):
    """Moore-Penrose pseudoinverse of ``M`` with a relative singular-value cutoff.

    Singular values below ``rtol * s_max`` are treated as zero. Returns the
    pseudoinverse and the numerical rank.
    """
    M = np.asarray(M, dtype=float)
    U, s, Vt = np.linalg.svd(M, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return np.zeros(M.T.shape), 0
    keep = s >= rtol * s[0]
    s_inv = np.where(keep, 1.0 / np.where(keep, s, 1.0), 0.0)
    return (Vt.T * s_inv) @ U.T, int(keep.sum())


@dataclass(frozen=True)
class SphereFit:
    center: np.ndarray
    radius: float
    residual: float  # RMS of ||x - c||^2 - r^2 over the fitted points


@dataclass(frozen=True)
class AlignmentEstimate:
    """Estimated map ``p -> scale * rotation @ p + translation``."""

    rotation: np.ndarray
    scale: float
    translation: np.ndarray
    alignment_error: float = 0.0

    @classmethod
    def identity(cls, n):
        return cls(np.eye(n), 1.0, np.zeros(n), 0.0)


def fit_hypersphere(cloud):
    """Algebraic least-squares hypersphere through the rows of ``cloud``.

    Each point gives one linear equation ``-2 p.c + (c.c - r^2) = -|p|^2``;
    the stacked system ``A x = b`` is solved in closed form with
    ``x = pinv(A^T A) A^T b``.

    Raises
    ------
    DegenerateFitError
        If there are fewer than ``n + 1`` points, the points are affinely
        degenerate (``A`` loses column rank), or the solution implies a
        non-positive squared radius.
    """
    X = check_cloud(cloud)
    N, n = X.shape
    if N < n + 1:
        raise DegenerateFitError(f"sphere fit needs N >= n + 1 points, got N={N}, n={n}")
    # The fit is equivariant under similarity maps, so solve in coordinates
    # centred on the mean and scaled to unit RMS radius; this keeps A^T A
    # well conditioned regardless of how far the attack moved the cloud.
    mean = X.mean(axis=0)
    Y = X - mean
    rho = np.sqrt(np.mean(np.einsum("ij,ij->i", Y, Y)))
    if rho == 0:
        raise DegenerateFitError("all points coincide")
    Y = Y / rho

    A = np.hstack([-2.0 * Y, np.ones((N, 1))])
    b = -np.einsum("ij,ij->i", Y, Y)
    AtA = A.T @ A
    AtA_pinv, rank = pinv(AtA, rtol=PINV_RTOL * max(N, n + 1))
    if rank < n + 1:
        raise DegenerateFitError(
            f"design matrix is rank deficient (rank {rank} < {n + 1}); "
            "points are coplanar or duplicated")
    x = AtA_pinv @ (A.T @ b)
    c, x2 = x[:n], x[n]
    r2 = c @ c - x2
    if not np.isfinite(r2) or r2 <= 0:
        raise DegenerateFitError(f"fit implies non-positive squared radius ({r2:.3g})")

    center = mean + rho * c
    radius = rho * np.sqrt(r2)
    diff = X - center
    res = np.einsum("ij,ij->i", diff, diff) - radius ** 2
    return SphereFit(center, float(radius), float(np.sqrt(np.mean(res ** 2))))


def estimate_scale(suspect):
    return 1.0 / fit_hypersphere(suspect).radius


def kabsch_rotation(H):
    """Proper rotation maximising ``trace(R H)`` for an ``n x n`` covariance ``H``."""
    U, _, Vt = np.linalg.svd(H)
    V = Vt.T
    D = np.ones(H.shape[0])
    D[-1] = np.sign(np.linalg.det(V @ U.T))
    return (V * D) @ U.T


def estimate_rotation_translation(suspect_scaled, victim):
    """Rigid map ``p -> R p + d`` taking ``suspect_scaled`` rows onto ``victim`` rows."""
    P, Q = check_pair(suspect_scaled, victim)
    if P.shape[0] < 2:
        raise ValueError("need at least two corresponding points")
    c_p = P.mean(axis=0)
    c_q = Q.mean(axis=0)
    H = (P - c_p).T @ (Q - c_q)
    R = kabsch_rotation(H)
    return R, c_q - R @ c_p


def apply_alignment(cloud, est):
    X = check_cloud(cloud)
    if est.rotation.shape[0] != X.shape[1]:
        raise ValueError(
            f"estimate is {est.rotation.shape[0]}-dimensional, cloud is {X.shape[1]}-dimensional")
    return est.scale * X @ est.rotation.T + est.translation


def alignment_error(aligned, victim):
    diff = aligned - victim
    return float(np.mean(np.einsum("ij,ij->i", diff, diff)))


def check_unit_rows(Q, tol=1e-6, name="victim"):
    dev = np.abs(np.linalg.norm(Q, axis=1) - 1.0).max()
    if dev > tol:
        raise ValueError(f"{name} rows must be unit-norm (max deviation {dev:.3g} > {tol:g})")


def align(suspect, victim, unit_tol=1e-6):
    """Estimate the similarity map taking ``suspect`` onto the unit-norm ``victim``."""
    P, Q = check_pair(suspect, victim)
    check_unit_rows(Q, unit_tol)
    alpha = estimate_scale(P)
    R, d = estimate_rotation_translation(alpha * P, Q)
    est = AlignmentEstimate(R, alpha, d)
    err = alignment_error(apply_alignment(P, est), Q)
    return AlignmentEstimate(R, alpha, d, err)


class PointCloudAligner(TransformerMixin, BaseEstimator):
    """Fit the alignment of a suspect cloud onto a victim cloud.

    ``fit(X, y)`` takes the suspect embeddings as ``X`` and the victim
    embeddings of the same inputs as ``y``; ``transform`` applies the fitted
    map to any cloud of the suspect's dimension.

    Parameters
    ----------
    unit_tol : float, default=1e-6
        Allowed deviation of victim row norms from one.

    Attributes
    ----------
    rotation_ : ndarray of shape (n, n)
    scale_ : float
    translation_ : ndarray of shape (n,)
    alignment_error_ : float
        Mean squared residual of the aligned training suspect against ``y``.
    sphere_ : SphereFit
        Hypersphere fitted to the suspect cloud.
    """

    def __init__(self, unit_tol=1e-6):
        self.unit_tol = unit_tol

    def fit(self, X, y):
        P, Q = check_pair(X, y)
        check_unit_rows(Q, self.unit_tol)
        self.sphere_ = fit_hypersphere(P)
        self.scale_ = 1.0 / self.sphere_.radius
        self.rotation_, self.translation_ = estimate_rotation_translation(self.scale_ * P, Q)
        self.alignment_error_ = alignment_error(self._apply(P), Q)
        self.n_features_in_ = P.shape[1]
        return self

    def _apply(self, X):
        return self.scale_ * X @ self.rotation_.T + self.translation_

    def transform(self, X):
        check_is_fitted(self, "rotation_")
        X = check_cloud(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} features, got {X.shape[1]}")
        return self._apply(X)

    @property
    def estimate_(self):
        check_is_fitted(self, "rotation_")
        return AlignmentEstimate(self.rotation_, self.scale_, self.translation_,
                                 self.alignment_error_)


def rotation_frobenius_from_identity(R):
    R = check_rotation(R)
    return float(np.linalg.norm(R - np.eye(R.shape[0])))
