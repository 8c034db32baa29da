"""Rotation, scaling and translation of embedding clouds.

A cloud is an ``(N, n)`` float array holding one embedding per row. Row ``i``
of two clouds always refers to the same input sample, so every transform here
acts row-wise and keeps the row order.
"""

from dataclasses import dataclass
from itertools import permutations

import numpy as np
from scipy.spatial.distance import cdist

from ._validation import (check_cloud, check_random_state, check_rotation,
                          check_scale, check_vector)

ORDERS = tuple("".join(p) for p in permutations("RST"))


def parse_order(order):
    """Normalise ``"R-S-T"``, ``"rst"`` or ``("R", "S", "T")`` to ``"RST"``."""
    if not isinstance(order, str):
        order = "".join(order)
    key = order.replace("-", "").replace(" ", "").upper()
    if key not in ORDERS:
        raise ValueError(f"order must be a permutation of R, S, T; got {order!r}")
    return key


@dataclass(frozen=True)
class RstParams:
    """One global rotation/scale/translation and the order it is applied in."""

    rotation: np.ndarray
    scale: float = 1.0
    translation: np.ndarray = None
    order: str = "RST"

    def __post_init__(self):
        R = check_rotation(self.rotation)
        n = R.shape[0]
        d = np.zeros(n) if self.translation is None else self.translation
        object.__setattr__(self, "rotation", R)
        object.__setattr__(self, "scale", check_scale(self.scale))
        object.__setattr__(self, "translation", check_vector(d, n, "translation"))
        object.__setattr__(self, "order", parse_order(self.order))

    @property
    def dim(self):
        return self.rotation.shape[0]

    @classmethod
    def identity(cls, n, order="RST"):
        return cls(np.eye(n), 1.0, np.zeros(n), order)

    def to_dict(self):
        return {
            "rotation": self.rotation.tolist(),
            "scale": self.scale,
            "translation": self.translation.tolist(),
            "order": "-".join(self.order),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(np.asarray(d["rotation"]), d["scale"],
                   np.asarray(d["translation"]), d["order"])


def rotate(cloud, R):
    X = check_cloud(cloud)
    R = check_rotation(R, X.shape[1])
    return X @ R.T


def scale(cloud, alpha):
    return check_scale(alpha) * check_cloud(cloud)


def translate(cloud, d):
    X = check_cloud(cloud)
    return X + check_vector(d, X.shape[1], "translation")


def apply_rst(cloud, params):
    """Apply ``params`` to every row, one primitive at a time in ``params.order``."""
    X = check_cloud(cloud)
    if params.dim != X.shape[1]:
        raise ValueError(f"parameters are {params.dim}-dimensional, cloud is {X.shape[1]}-dimensional")
    for step in params.order:
        if step == "R":
            X = rotate(X, params.rotation)
        elif step == "S":
            X = scale(X, params.scale)
        else:
            X = translate(X, params.translation)
    return X


def planar_rotation(u, v, degrees):
    """Rotation by ``degrees`` inside span(u, v); identity on the complement.

    ``u`` and ``v`` must be orthonormal.
    """
    theta = np.deg2rad(degrees)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    n = u.shape[0]
    uu = np.outer(u, u) + np.outer(v, v)
    uv = np.outer(u, v) - np.outer(v, u)
    return np.eye(n) + (np.cos(theta) - 1.0) * uu + np.sin(theta) * uv


def _orthonormal_pair(n, rng):
    G = rng.standard_normal((n, 2))
    Q, Rq = np.linalg.qr(G)
    Q = Q * np.sign(np.diag(Rq))
    return Q[:, 0], Q[:, 1]


def random_rotation_in_plane(n, degrees, seed=None):
    """Rotate by ``degrees`` in one seeded random 2-plane of R^n."""
    if n < 2:
        raise ValueError(f"rotations need n >= 2, got n={n}")
    if not -180.0 <= degrees <= 180.0:
        raise ValueError(f"rotation angle must lie in [-180, 180], got {degrees}")
    rng = check_random_state(seed)
    u, v = _orthonormal_pair(n, rng)
    return planar_rotation(u, v, degrees)


def random_rotation(n, seed=None):
    """Haar-distributed element of SO(n) (QR of a Gaussian matrix, signs fixed)."""
    if n < 2:
        raise ValueError(f"rotations need n >= 2, got n={n}")
    rng = check_random_state(seed)
    Q, Rq = np.linalg.qr(rng.standard_normal((n, n)))
    Q = Q * np.sign(np.diag(Rq))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


def multiplane_rotation(n, degrees, seed=None):
    """Rotate by ``degrees`` in each of ``n // 2`` mutually orthogonal random planes.

    At 180 degrees and even ``n`` this is ``-I``, i.e. ``e -> -e``.
    """
    rng = check_random_state(seed)
    B = random_rotation(n, rng)
    theta = np.deg2rad(degrees)
    c, s = np.cos(theta), np.sin(theta)
    D = np.eye(n)
    for k in range(n // 2):
        i, j = 2 * k, 2 * k + 1
        D[i, i] = D[j, j] = c
        D[i, j], D[j, i] = -s, s
    return B @ D @ B.T


def random_unit_direction(n, seed=None):
    rng = check_random_state(seed)
    while True:
        g = rng.standard_normal(n)
        norm = np.linalg.norm(g)
        if norm > 0:
            return g / norm


def cosine(p, q):
    return float(p @ q / (np.linalg.norm(p) * np.linalg.norm(q)))


def pairwise_distances(cloud):
    X = np.asarray(cloud, dtype=float)
    return cdist(X, X)


def pairwise_cosines(cloud):
    X = np.asarray(cloud, dtype=float)
    U = X / np.linalg.norm(X, axis=1, keepdims=True)
    return U @ U.T
