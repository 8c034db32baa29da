"""Seeded synthetic embedding clouds for desk-scale experiments.

Every model sees the same ``N`` inputs. Each input has a latent position drawn
from a Gaussian mixture (``clusters`` centres with within-cluster ``spread``),
and a clean encoder maps it to ``normalize(latent + model noise)`` where the
model noise has per-coordinate std ``innocent_noise``. The victim and every
reference or innocent model are such clean encoders with their own noise
draw. Reference models differ slightly in how noisy they are (``heterogeneity``
spreads their noise levels evenly over ``innocent_noise * (1 +/- h)``), the
way differently trained clean models drift by different amounts. An extracted
copy is the victim output plus small per-coordinate noise
``suspect_noise``, not renormalised.
"""

from dataclasses import dataclass, replace

import numpy as np

from .geometry import random_rotation_in_plane

# Stream tags passed alongside the seed so that each role draws independently.
_LATENT, _VICTIM, _REFERENCE, _INNOCENT = 0, 1, 2, 3


@dataclass(frozen=True)
class SynthConfig:
    N: int = 5000
    n: int = 128
    clusters: int = 10
    suspect_noise: float = 0.01
    innocent_noise: float = 0.3
    seed: int = 0
    spread: float = 0.5
    heterogeneity: float = 0.02

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"dimension must be >= 2, got {self.n}")
        if self.N < self.n + 1:
            raise ValueError(f"N >= n + 1 is required for the sphere fit, got N={self.N}, n={self.n}")
        if self.clusters < 1:
            raise ValueError("need at least one cluster")
        if not 0 <= self.suspect_noise < self.innocent_noise:
            raise ValueError("need 0 <= suspect_noise < innocent_noise")
        if self.spread < 0:
            raise ValueError("spread must be nonnegative")
        if not 0 <= self.heterogeneity < 1:
            raise ValueError("heterogeneity must lie in [0, 1)")


def normalize_rows(X):
    norms = np.linalg.norm(X, axis=1, keepdims=True)
    if np.any(norms == 0):
        raise FloatingPointError("zero-norm row")
    return X / norms


def gen_latent(cfg):
    """Unnormalised per-input latent positions shared by every model."""
    rng = np.random.default_rng([cfg.seed, _LATENT])
    centers = rng.standard_normal((cfg.clusters, cfg.n))
    labels = rng.integers(cfg.clusters, size=cfg.N)
    return centers[labels] + cfg.spread * rng.standard_normal((cfg.N, cfg.n))


def _clean_model(latent, noise, rng):
    while True:
        X = latent + noise * rng.standard_normal(latent.shape)
        try:
            return normalize_rows(X)
        except FloatingPointError:
            continue


def gen_victim(cfg):
    return _clean_model(gen_latent(cfg), cfg.innocent_noise,
                        np.random.default_rng([cfg.seed, _VICTIM]))


def gen_suspect(victim, noise, seed=None):
    """Extraction proxy: ``victim`` plus i.i.d. Gaussian noise of std ``noise``."""
    if noise < 0:
        raise ValueError("noise must be nonnegative")
    victim = np.asarray(victim, dtype=float)
    rng = np.random.default_rng(seed)
    return victim + noise * rng.standard_normal(victim.shape)


def gen_references(cfg, M=3, seed=None, independent=False, rotation_degrees=0.0):
    """``M`` clean reference clouds answering the same inputs as the victim.

    With ``independent=True`` each reference gets its own latent mixture, so it
    shares nothing with the victim beyond the cloud size. ``rotation_degrees``
    additionally rotates each reference in its own random plane.
    """
    if M < 2:
        raise ValueError(f"need M >= 2 references, got {M}")
    seed = cfg.seed if seed is None else seed
    latent = None if independent else gen_latent(cfg)
    levels = cfg.innocent_noise * (1.0 + cfg.heterogeneity * np.linspace(-1.0, 1.0, M))
    refs = []
    for i in range(M):
        rng = np.random.default_rng([seed, _REFERENCE, i])
        base = latent
        if independent:
            base = gen_latent(replace(cfg, seed=int(rng.integers(2 ** 31))))
        Y = _clean_model(base, levels[i], rng)
        if rotation_degrees:
            Y = Y @ random_rotation_in_plane(cfg.n, rotation_degrees, rng).T
        refs.append(Y)
    return refs


def gen_innocent(cfg, seed=None, independent=False):
    """A fresh clean model on the same inputs, not derived from the victim."""
    seed = cfg.seed if seed is None else seed
    rng = np.random.default_rng([seed, _INNOCENT])
    if independent:
        latent = gen_latent(replace(cfg, seed=int(rng.integers(2 ** 31))))
        return _clean_model(latent, cfg.innocent_noise, rng)
    return _clean_model(gen_latent(cfg), cfg.innocent_noise, rng)


def gen_scenario(cfg, M=3):
    """Victim, extracted suspect, references and an innocent model for ``cfg``."""
    victim = gen_victim(cfg)
    return {
        "victim": victim,
        "suspect": gen_suspect(victim, cfg.suspect_noise, [cfg.seed, 9]),
        "references": gen_references(cfg, M),
        "innocent": gen_innocent(cfg),
    }
