"""Fingerprint verification of embedding models under rotation, scaling and translation."""

from ._validation import DegenerateFitError, DegenerateReferencesError
from .attacksim import AttackSpec, RstAttack, attack, sample_attack
from .estimator import (AlignmentEstimate, PointCloudAligner, SphereFit, align,
                        apply_alignment, estimate_rotation_translation, estimate_scale,
                        fit_hypersphere)
from .geometry import (ORDERS, RstParams, apply_rst, random_rotation, random_rotation_in_plane,
                       random_unit_direction, rotate, scale, translate)
from .verifier import FingerprintVerifier, VerificationReport, similarity_score, t_test, verify

__all__ = [
    "AlignmentEstimate", "AttackSpec", "DegenerateFitError", "DegenerateReferencesError",
    "FingerprintVerifier", "ORDERS", "PointCloudAligner", "RstAttack", "RstParams", "SphereFit",
    "VerificationReport", "align", "apply_alignment", "apply_rst", "attack",
    "estimate_rotation_translation", "estimate_scale", "fit_hypersphere", "random_rotation",
    "random_rotation_in_plane", "random_unit_direction", "rotate", "sample_attack", "scale",
    "similarity_score", "t_test", "translate", "verify",
]
__version__ = "0.1.0"
