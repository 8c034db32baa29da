"""Seeded RST attacks on embedding clouds.

Default ranges: rotation angle in [-180, 180] degrees inside a random plane,
scale factor in [0.1, 10], translation either a fixed length along a random
direction or with each component drawn from [-10, 10]. One set of parameters is applied to every
row of a cloud.
"""

from dataclasses import dataclass, replace

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_cloud
from .geometry import (ORDERS, RstParams, apply_rst, parse_order,
                       random_rotation_in_plane, random_unit_direction)

KINDS = ("rotation", "scaling", "translation", "mixed")
DEGREE_RANGE = (-180.0, 180.0)
SCALE_RANGE = (0.1, 10.0)
TRANSLATION_RANGE = (-10.0, 10.0)

# Column headers of the single-attack parameter grids.
ROTATION_GRID = (-180.0, -120.0, -60.0, 30.0, 90.0, 150.0)
SCALE_GRID = (0.2, 0.4, 0.8, 2.0, 4.0, 8.0)
TRANSLATION_GRID = (1.0, 2.0, 4.0, 6.0, 8.0, 10.0)


def _in_range(name, value, lo, hi):
    if value is not None and not lo <= value <= hi:
        raise ValueError(f"{name} must lie in [{lo:g}, {hi:g}], got {value}")


@dataclass(frozen=True)
class AttackSpec:
    """What to attack with. ``None`` parameters are drawn from their range.

    For a single-kind attack only that kind's parameter is used and the other
    two transforms are the identity. ``translation_len`` selects fixed-length
    translation along a seeded random direction; leaving it ``None`` draws each
    component uniformly from [-10, 10].
    """

    kind: str = "mixed"
    rotation_degrees: float = None
    scale_factor: float = None
    translation_len: float = None
    order: str = "RST"
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        _in_range("rotation_degrees", self.rotation_degrees, *DEGREE_RANGE)
        _in_range("scale_factor", self.scale_factor, *SCALE_RANGE)
        _in_range("translation_len", self.translation_len, 0.0, TRANSLATION_RANGE[1])
        object.__setattr__(self, "order", parse_order(self.order))

    def with_seed(self, seed):
        return replace(self, seed=seed)


def sample_attack(spec, n):
    """Draw concrete ``RstParams`` in dimension ``n`` for ``spec``."""
    kind = spec.kind
    R = np.eye(n)
    alpha = 1.0
    d = np.zeros(n)
    if kind in ("rotation", "mixed"):
        rng = np.random.default_rng([spec.seed, 1])
        deg = spec.rotation_degrees
        if deg is None:
            deg = rng.uniform(*DEGREE_RANGE)
        R = random_rotation_in_plane(n, deg, rng)
    if kind in ("scaling", "mixed"):
        alpha = spec.scale_factor
        if alpha is None:
            alpha = np.random.default_rng([spec.seed, 2]).uniform(*SCALE_RANGE)
    if kind in ("translation", "mixed"):
        if spec.translation_len is not None:
            d = spec.translation_len * random_unit_direction(n, spec.seed)
        else:
            d = np.random.default_rng([spec.seed, 3]).uniform(*TRANSLATION_RANGE, size=n)
    return RstParams(R, alpha, d, spec.order)


def attack(cloud, spec):
    """Apply one globally sampled RST attack; returns ``(attacked, params)``."""
    X = check_cloud(cloud)
    params = sample_attack(spec, X.shape[1])
    return apply_rst(X, params), params


def grid_specs(seed=0):
    """Single-kind specs over the parameter grids, cycling through all six orders."""
    specs = []
    for i, deg in enumerate(ROTATION_GRID):
        specs.append(AttackSpec("rotation", rotation_degrees=deg, order=ORDERS[i % 6], seed=seed + i))
    for i, a in enumerate(SCALE_GRID):
        specs.append(AttackSpec("scaling", scale_factor=a, order=ORDERS[(i + 2) % 6], seed=seed + 6 + i))
    for i, L in enumerate(TRANSLATION_GRID):
        specs.append(AttackSpec("translation", translation_len=L, order=ORDERS[(i + 4) % 6],
                                seed=seed + 12 + i))
    return specs


class RstAttack(TransformerMixin, BaseEstimator):
    """Transformer form of :func:`attack`; ``fit`` draws the parameters."""

    def __init__(self, kind="mixed", rotation_degrees=None, scale_factor=None,
                 translation_len=None, order="RST", seed=0):
        self.kind = kind
        self.rotation_degrees = rotation_degrees
        self.scale_factor = scale_factor
        self.translation_len = translation_len
        self.order = order
        self.seed = seed

    def fit(self, X, y=None):
        X = check_cloud(X)
        spec = AttackSpec(self.kind, self.rotation_degrees, self.scale_factor,
                          self.translation_len, self.order, self.seed)
        self.params_ = sample_attack(spec, X.shape[1])
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "params_")
        return apply_rst(X, self.params_)
