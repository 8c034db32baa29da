"""Similarity scoring and the one-sample t-test behind the ownership verdict."""

from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.special import betainc
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import DegenerateReferencesError, check_cloud, check_pair
from .estimator import AlignmentEstimate, PointCloudAligner, check_unit_rows

DEFAULT_THRESHOLD = 1e-3
STOLEN = "stolen"
NOT_PROVEN = "not-proven"


def similarity_score(aligned, reference):
    """Mean squared row distance; smaller means more similar."""
    A, B = check_pair(aligned, reference, ("aligned", "reference"))
    diff = A - B
    return float(np.mean(np.einsum("ij,ij->i", diff, diff)))


def student_t_sf2(t, df):
    """Two-tailed tail mass ``P(|T| >= |t|)`` of Student's t with ``df`` degrees of freedom."""
    t = float(t)
    return float(betainc(0.5 * df, 0.5, df / (df + t * t)))


def t_test(s, S):
    """One-sample t-test of the suspect score ``s`` against reference scores ``S``.

    Returns ``(t, p)`` with ``t = (mean(S) - s) / (std(S, ddof=1) / sqrt(|S|))``
    and ``p`` the two-tailed Student-t probability with ``|S| - 1`` degrees of
    freedom. A positive ``t`` means the suspect is closer to the victim than the
    references are.
    """
    S = np.asarray(S, dtype=float).ravel()
    if S.size < 2:
        raise DegenerateReferencesError(f"need at least 2 reference scores, got {S.size}")
    mu = S.mean()
    sigma = S.std(ddof=1)
    if not sigma > 0:
        raise DegenerateReferencesError("reference scores have zero spread")
    t = (mu - s) / (sigma / np.sqrt(S.size))
    return float(t), student_t_sf2(t, S.size - 1)


@dataclass
class VerificationReport:
    s: float
    reference_scores: list
    mu: float
    sigma: float
    t_value: float
    p_value: float
    threshold: float = DEFAULT_THRESHOLD
    alignment: AlignmentEstimate = field(default=None, repr=False)

    @property
    def verdict(self):
        return STOLEN if self.p_value <= self.threshold else NOT_PROVEN

    @property
    def stolen(self):
        return self.verdict == STOLEN

    def to_dict(self):
        d = asdict(self)
        d.pop("alignment")
        d["verdict"] = self.verdict
        return d


def score_references(aligned, victim, references):
    s = similarity_score(aligned, victim)
    S = [similarity_score(aligned, ref) for ref in references]
    return s, S


def verify(suspect, victim, references, threshold=DEFAULT_THRESHOLD):
    """Align ``suspect`` onto ``victim`` once and test its score against the references."""
    return FingerprintVerifier(threshold=threshold).fit(victim, references).verify(suspect)


class FingerprintVerifier(BaseEstimator):
    """Decide whether a suspect embedding cloud was derived from a victim cloud.

    ``fit`` stores the victim cloud and ``M >= 2`` reference clouds produced by
    clean models on the same inputs. ``verify`` aligns a suspect cloud onto the
    victim, scores the aligned cloud against the victim and against every
    reference with the same alignment, and runs a one-sample t-test of the
    victim score against the reference scores.

    Parameters
    ----------
    threshold : float, default=1e-3
        p-values at or below this give the verdict ``"stolen"``.
    unit_tol : float, default=1e-6
        Allowed deviation of victim row norms from one.
    """

    def __init__(self, threshold=DEFAULT_THRESHOLD, unit_tol=1e-6):
        self.threshold = threshold
        self.unit_tol = unit_tol

    def fit(self, X, references):
        Q = check_cloud(X, "victim")
        check_unit_rows(Q, self.unit_tol)
        refs = [check_cloud(R, "reference") for R in references]
        if len(refs) < 2:
            raise DegenerateReferencesError(f"need at least 2 reference clouds, got {len(refs)}")
        for R in refs:
            if R.shape != Q.shape:
                raise ValueError(f"reference shape {R.shape} differs from victim shape {Q.shape}")
        self.victim_ = Q
        self.references_ = refs
        self.n_features_in_ = Q.shape[1]
        return self

    def verify(self, suspect):
        check_is_fitted(self, "victim_")
        aligner = PointCloudAligner(unit_tol=self.unit_tol).fit(suspect, self.victim_)
        aligned = aligner.transform(suspect)
        s, S = score_references(aligned, self.victim_, self.references_)
        t, p = t_test(s, S)
        S_arr = np.asarray(S)
        return VerificationReport(
            s=s, reference_scores=S, mu=float(S_arr.mean()), sigma=float(S_arr.std(ddof=1)),
            t_value=t, p_value=p, threshold=self.threshold, alignment=aligner.estimate_)

    def predict(self, suspect):
        return self.verify(suspect).verdict
