"""Decision rules of three embedding-watermark schemes and how RST breaks them.

* EmbMarker-style: trigger embeddings are pulled towards a target embedding
  and detected by a cosine-similarity gap between trigger and normal sets.
* Linear decoder: each watermark bit is ``round(sigmoid(w_i . e))``.
* Matrix key: ``e_m = T e_o`` and decoding uses the left inverse ``T^+``.
"""

from dataclasses import dataclass, field

import numpy as np

from ._validation import check_random_state
from .geometry import RstParams, apply_rst, random_rotation, random_unit_direction


def _unit_rows(X, name):
    X = np.atleast_2d(np.asarray(X, dtype=float))
    norms = np.linalg.norm(X, axis=1)
    if np.any(norms == 0):
        raise ValueError(f"{name} contains a zero-norm row")
    return X / norms[:, None]


@dataclass(frozen=True)
class EmbMarkerScheme:
    target: np.ndarray
    mix: float = 0.5

    def __post_init__(self):
        t = np.asarray(self.target, dtype=float)
        if abs(np.linalg.norm(t) - 1.0) > 1e-9:
            raise ValueError("target embedding must be unit-norm")
        if not 0.0 <= self.mix <= 1.0:
            raise ValueError(f"mix weight must lie in [0, 1], got {self.mix}")
        object.__setattr__(self, "target", t)

    @classmethod
    def random(cls, n, mix=0.5, seed=None):
        return cls(random_unit_direction(n, seed), mix)


def embmarker_insert(e_o, scheme):
    """Pull the unit embedding ``e_o`` towards the scheme's target and renormalise."""
    e_o = np.asarray(e_o, dtype=float)
    if abs(np.linalg.norm(e_o) - 1.0) > 1e-6:
        raise ValueError("original embedding must be unit-norm")
    mixed = (1.0 - scheme.mix) * e_o + scheme.mix * scheme.target
    norm = np.linalg.norm(mixed)
    if norm == 0:
        raise ValueError("mixed embedding has zero norm")
    return mixed / norm


def distribution_distance(S0, S1, target):
    """Mean cosine to ``target`` over trigger set ``S1`` minus that over normal set ``S0``."""
    t = np.asarray(target, dtype=float)
    if not np.linalg.norm(t) > 0:
        raise ValueError("target must be nonzero")
    t = t / np.linalg.norm(t)
    return float(np.mean(_unit_rows(S1, "S1") @ t) - np.mean(_unit_rows(S0, "S0") @ t))


def rotation_delta(e, R, target):
    """Shift in cos(e, target) caused by rotating ``e`` with ``R``."""
    e = np.asarray(e, dtype=float)
    t = np.asarray(target, dtype=float)
    ne, nt = np.linalg.norm(e), np.linalg.norm(t)
    if ne == 0 or nt == 0:
        raise ValueError("vectors must be nonzero")
    return float(t @ (R @ e - e) / (ne * nt))


@dataclass(frozen=True)
class LinearDecoderScheme:
    weights: np.ndarray  # (k, n), one row per bit
    message: np.ndarray = None

    def __post_init__(self):
        W = np.atleast_2d(np.asarray(self.weights, dtype=float))
        if W.shape[0] < 1 or not np.all(np.isfinite(W)):
            raise ValueError("need at least one finite weight vector")
        object.__setattr__(self, "weights", W)
        if self.message is not None:
            m = np.asarray(self.message, dtype=np.int8)
            if m.shape != (W.shape[0],):
                raise ValueError("message length must equal the number of weight vectors")
            object.__setattr__(self, "message", m)

    @classmethod
    def random(cls, n, bits=32, seed=None):
        rng = check_random_state(seed)
        return cls(rng.standard_normal((bits, n)), rng.integers(0, 2, size=bits))


def linear_decode(scheme, e_m):
    """Bits ``round(sigmoid(w_i . e_m))``; a logit of exactly zero decodes to 1."""
    e_m = np.asarray(e_m, dtype=float)
    if e_m.shape[-1] != scheme.weights.shape[1]:
        raise ValueError(f"embedding has dimension {e_m.shape[-1]}, decoder expects {scheme.weights.shape[1]}")
    # round-half-up of sigmoid(z) is the same as z >= 0
    return (e_m @ scheme.weights.T >= 0).astype(np.int8)


def rotation_bit_flip_rate(scheme, e_m, trials=10_000, seed=None, rotations=None):
    """Fraction of bits that change when ``e_m`` is rotated by Haar-random rotations.

    ``rotations`` may be a callable ``rng -> R`` to replace the Haar sampler.
    """
    if trials < 1000:
        raise ValueError("use at least 1000 trials")
    rng = check_random_state(seed)
    e_m = np.asarray(e_m, dtype=float)
    n = e_m.shape[0]
    sample = rotations or (lambda g: random_rotation(n, g))
    base = linear_decode(scheme, e_m)
    rotated = np.empty((trials, n))
    for i in range(trials):
        rotated[i] = sample(rng) @ e_m
    flips = linear_decode(scheme, rotated) != base
    return float(flips.mean())


@dataclass(frozen=True)
class MatrixKeyScheme:
    key: np.ndarray
    key_pinv: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        T = np.asarray(self.key, dtype=float)
        if T.ndim != 2 or T.shape[0] < T.shape[1]:
            raise ValueError("key must be a tall or square matrix")
        Tp = np.linalg.pinv(T) if self.key_pinv is None else np.asarray(self.key_pinv, dtype=float)
        if np.abs(Tp @ T - np.eye(T.shape[1])).max() > 1e-9:
            raise ValueError("key does not have full column rank (T^+ T != I)")
        object.__setattr__(self, "key", T)
        object.__setattr__(self, "key_pinv", Tp)

    @classmethod
    def random(cls, n, m=None, seed=None):
        """Random key mapping R^n into R^m (square when ``m`` is None).

        Built as ``U diag(s) V^T`` with singular values in [0.5, 2] so the
        left-inverse check holds to machine precision.
        """
        rng = check_random_state(seed)
        m = n if m is None else m
        U = np.linalg.qr(rng.standard_normal((m, n)))[0]
        V = random_rotation(n, rng) if n >= 2 else np.ones((1, 1))
        s = rng.uniform(0.5, 2.0, size=n)
        return cls((U * s) @ V.T)

    def encode(self, e_o):
        return self.key @ np.asarray(e_o, dtype=float)

    def decode(self, e_m):
        return self.key_pinv @ np.asarray(e_m, dtype=float)


def matrixkey_residual(scheme, e_o, attack=None):
    """``||e_o - T^+ attack(T e_o)||``: how far decoding drifts after an attack."""
    e_o = np.asarray(e_o, dtype=float)
    if e_o.shape != (scheme.key.shape[1],):
        raise ValueError(f"embedding must have dimension {scheme.key.shape[1]}")
    e_m = scheme.encode(e_o)
    if attack is not None:
        e_m = apply_rst(e_m[None, :], attack)[0]
    return float(np.linalg.norm(e_o - scheme.decode(e_m)))


def scaling_attack(n, alpha):
    return RstParams(np.eye(n), alpha, np.zeros(n))


def translation_attack(d):
    d = np.asarray(d, dtype=float)
    return RstParams(np.eye(d.shape[0]), 1.0, d)
