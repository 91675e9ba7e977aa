"""Exact performance measures for classifiers with a reject option.

Every evaluated sample carries two binary attributes, accurate vs
misclassified and kept vs rejected, which split the sample set into four
counts: an (accurate kept), mn (misclassified kept), ar (accurate
rejected), mr (misclassified rejected).  All measures here are computed
from those counts with integer arithmetic and converted to double
precision by a single exact division at the end, so algebraic identities
between measures hold as tightly as doubles allow.

Measures:

* nonrejected accuracy  A = an / (an + mn), undefined when nothing is kept
* classification quality  Q = (an + mr) / n, the fraction of samples the
  combined classifier-plus-rejector handled correctly
* rejection quality  phi = (mr / ar) / ((mn + mr) / (an + ar)), the odds
  ratio of misclassification among rejected samples against the whole set
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exceptions import InputError

__all__ = [
    "LabeledPredictions",
    "PartitionCounts",
    "OperatingPoint",
    "RejectionCurve",
    "TIE_POLICIES",
    "accuracy_vector",
    "partition_counts",
    "nonrejected_accuracy",
    "classification_quality",
    "rejection_quality",
    "measures_closed_form",
    "operating_point",
    "rejection_curve",
    "rejection_mask_for_fraction",
    "is_threshold_consistent",
]

# Rejection-threshold tie handling for confidence-ranked sweeps.
# "group": samples sharing a confidence value are kept or rejected together,
#          so only cuts between distinct values are achievable.
# "stable": ties are broken by original sample index, every cut is achievable.
TIE_POLICIES = ("group", "stable")


def _as_binary(values, name: str) -> np.ndarray:
    arr = np.asarray(values)
    if arr.ndim != 1 or arr.size == 0:
        raise InputError(f"{name} must be a nonempty one-dimensional sequence")
    if not np.isin(arr, (0, 1)).all():
        raise InputError(f"{name} entries must be 0 or 1")
    return arr.astype(np.int64)


def _as_confidence(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise InputError("confidence must be a nonempty one-dimensional sequence")
    if not np.isfinite(arr).all():
        raise InputError("confidence values must be finite")
    return arr


@dataclass(frozen=True)
class LabeledPredictions:
    """Ground-truth labels, predicted labels, and optional confidences.

    Labels are positive integers; 0 is reserved for "rejected" in combined
    classifier-with-rejection outputs and is never a valid class id here.
    """

    y_true: np.ndarray
    y_pred: np.ndarray
    confidence: np.ndarray | None = None

    def __post_init__(self):
        y_true = np.asarray(self.y_true)
        y_pred = np.asarray(self.y_pred)
        for name, arr in (("y_true", y_true), ("y_pred", y_pred)):
            if arr.ndim != 1 or arr.size == 0:
                raise InputError(f"{name} must be a nonempty one-dimensional sequence")
            if not np.issubdtype(arr.dtype, np.integer):
                if not np.issubdtype(arr.dtype, np.number) or not (arr == arr.astype(np.int64)).all():
                    raise InputError(f"{name} labels must be integers")
            if (arr < 1).any():
                raise InputError(f"{name} labels must be >= 1 (0 is reserved for rejection)")
        if y_true.shape != y_pred.shape:
            raise InputError("y_true and y_pred must have the same length")
        object.__setattr__(self, "y_true", y_true.astype(np.int64))
        object.__setattr__(self, "y_pred", y_pred.astype(np.int64))
        if self.confidence is not None:
            conf = np.asarray(self.confidence, dtype=np.float64)
            if conf.shape != y_true.shape:
                raise InputError("confidence must have the same length as the labels")
            object.__setattr__(self, "confidence", conf)

    @property
    def n(self) -> int:
        return int(self.y_true.size)


@dataclass(frozen=True)
class PartitionCounts:
    """The four-way split of an evaluated sample set.

    an: accurate and kept, mn: misclassified and kept,
    ar: accurate and rejected, mr: misclassified and rejected.
    """

    an: int
    mn: int
    ar: int
    mr: int

    def __post_init__(self):
        for name in ("an", "mn", "ar", "mr"):
            value = getattr(self, name)
            if isinstance(value, bool) or not float(value) == int(value):
                raise InputError(f"count {name} must be an integer")
            value = int(value)
            if value < 0:
                raise InputError(f"count {name} must be nonnegative")
            object.__setattr__(self, name, value)
        if self.n < 1:
            raise InputError("partition must contain at least one sample")

    @property
    def n(self) -> int:
        return self.an + self.mn + self.ar + self.mr

    @property
    def kept(self) -> int:
        return self.an + self.mn

    @property
    def rejected(self) -> int:
        return self.ar + self.mr

    @property
    def accurate(self) -> int:
        """Samples the base classifier got right, kept or not."""
        return self.an + self.ar

    @property
    def misclassified(self) -> int:
        return self.mn + self.mr


@dataclass(frozen=True)
class OperatingPoint:
    """Measure values of one rejector configuration on one sample set.

    A is None when every sample was rejected; phi may be math.inf when the
    rejected set contains no accurately classified sample.
    """

    r: float
    A: float | None
    Q: float
    phi: float
    n: int


def accuracy_vector(preds: LabeledPredictions) -> np.ndarray:
    """Per-sample 0/1 correctness of the base classifier."""
    return (preds.y_true == preds.y_pred).astype(np.int64)


def partition_counts(a, mask) -> PartitionCounts:
    """Split samples by correctness vector ``a`` and rejection ``mask`` (1 = rejected)."""
    a = _as_binary(a, "accuracy vector")
    mask = _as_binary(mask, "rejection mask")
    if a.shape != mask.shape:
        raise InputError("accuracy vector and rejection mask must have the same length")
    an = int(((a == 1) & (mask == 0)).sum())
    mn = int(((a == 0) & (mask == 0)).sum())
    ar = int(((a == 1) & (mask == 1)).sum())
    mr = int(((a == 0) & (mask == 1)).sum())
    return PartitionCounts(an=an, mn=mn, ar=ar, mr=mr)


def nonrejected_accuracy(counts: PartitionCounts) -> float | None:
    """Accuracy over kept samples; None when everything was rejected.

    Undefined is a value here, not an error, so downstream serialization
    can carry it (empty CSV field, JSON null).
    """
    if counts.kept == 0:
        return None
    return counts.an / counts.kept


def classification_quality(counts: PartitionCounts) -> float:
    """Fraction of all samples handled correctly: kept-and-accurate plus rejected-and-misclassified."""
    return (counts.an + counts.mr) / counts.n


def rejection_quality(counts: PartitionCounts) -> float:
    """Odds ratio of misclassification among rejected samples vs the whole set.

    Conventions for the degenerate denominators:

    * nothing rejected: phi = 1 (a vacuous rejector neither helps nor hurts)
    * rejected set contains no accurate sample (ar = 0, some rejected):
      phi = +inf, the rejector found only errors
    * the classifier made no errors at all: phi = 1
    """
    if counts.rejected == 0:
        return 1.0
    if counts.ar == 0:
        return math.inf
    if counts.misclassified == 0:
        return 1.0
    return (counts.mr * counts.accurate) / (counts.ar * counts.misclassified)


def operating_point(counts: PartitionCounts) -> OperatingPoint:
    """Bundle the three measures and the rejected fraction for one partition."""
    return OperatingPoint(
        r=counts.rejected / counts.n,
        A=nonrejected_accuracy(counts),
        Q=classification_quality(counts),
        phi=rejection_quality(counts),
        n=counts.n,
    )


def measures_closed_form(a_full, a_kept, r) -> tuple[float, float]:
    """Evaluate Q and phi from accuracies alone, without the four counts.

    ``a_full`` is the classifier's accuracy with no rejection, ``a_kept``
    its accuracy over the kept samples when a fraction ``r`` is rejected.
    Returns ``(Q, phi)``.  Arithmetic is exact (inputs are taken as the
    rationals the floats represent) with one rounding at the end.

    phi follows the same conventions as the count-based form: r = 0 gives
    1, a perfect base classifier gives 1, and a zero denominator with
    r > 0 gives +inf.  The numerator (the rejected-error mass) and the
    denominator (the rejected-accurate mass) are snapped to zero below
    1e-12 in magnitude: float inputs carry ~1e-16 representation error,
    so smaller values are indistinguishable from a true zero, and without
    the snap a partition whose rejections are all errors would come back
    as a huge noise-signed ratio instead of +inf.
    """
    for name, value in (("a_full", a_full), ("a_kept", a_kept), ("r", r)):
        if value is None or isinstance(value, bool):
            raise InputError(f"{name} must be a real number")
        if not 0 <= value <= 1:
            raise InputError(f"{name} must lie in [0, 1]")
    a0 = Fraction(a_full)
    ak = Fraction(a_kept)
    rf = Fraction(r)
    kept_accurate = ak * (1 - rf)

    q = 2 * kept_accurate + rf - a0

    snap = Fraction(1, 10**12)
    if rf == 0:
        phi = 1.0
    elif a0 == 1:
        phi = 1.0
    else:
        den = a0 - kept_accurate
        num = rf - a0 + kept_accurate
        if abs(den) < snap:
            den = Fraction(0)
        if abs(num) < snap:
            num = Fraction(0)
        if den == 0:
            phi = math.inf
        else:
            phi = float((num / den) * (a0 / (1 - a0)))
    return float(q), phi


def _ranked(confidence: np.ndarray):
    """Descending stable order, the reordered confidences, and sample count."""
    order = np.argsort(-confidence, kind="stable")
    return order, confidence[order]


def _achievable_kept_counts(sorted_conf: np.ndarray, tie_policy: str) -> list[int]:
    """Kept-sample counts reachable by a confidence threshold, descending.

    Keeping the top k is always possible for k = n and k = 0.  Under the
    group policy an interior cut exists only where the sorted confidences
    strictly decrease, since samples sharing a value stand or fall together.
    """
    n = sorted_conf.size
    if tie_policy == "stable":
        return list(range(n, -1, -1))
    keeps = [n]
    for k in range(n - 1, 0, -1):
        if sorted_conf[k - 1] > sorted_conf[k]:
            keeps.append(k)
    keeps.append(0)
    return keeps


def _check_tie_policy(tie_policy: str) -> None:
    if tie_policy not in TIE_POLICIES:
        raise InputError(f"tie_policy must be one of {TIE_POLICIES}, got {tie_policy!r}")


@dataclass(frozen=True)
class RejectionCurve:
    """Operating points swept over every achievable rejected fraction.

    ``points[i]`` is derived from ``counts[i]``; rejected fractions are
    strictly increasing and always start at r = 0.
    """

    points: list[OperatingPoint]
    counts: list[PartitionCounts]
    tie_policy: str

    @property
    def n(self) -> int:
        return self.points[0].n

    def index_at_fraction(self, fraction: float) -> int:
        """Index of the last point whose rejected fraction is <= ``fraction``."""
        if not 0 <= fraction <= 1:
            raise InputError("fraction must lie in [0, 1]")
        target = fraction * self.n + 1e-9
        best = 0
        for i, c in enumerate(self.counts):
            if c.rejected <= target:
                best = i
            else:
                break
        return best

    def point_at(self, fraction: float) -> OperatingPoint:
        return self.points[self.index_at_fraction(fraction)]


def rejection_curve(a, confidence, tie_policy: str = "group") -> RejectionCurve:
    """Sweep a confidence-ranked rejector over all achievable cut points.

    ``a`` is the per-sample 0/1 correctness vector and ``confidence`` the
    score the rejector ranks by (low confidence is rejected first).  Every
    emitted point corresponds to a threshold-consistent rejection mask.
    """
    _check_tie_policy(tie_policy)
    a = _as_binary(a, "accuracy vector")
    conf = _as_confidence(confidence)
    if a.shape != conf.shape:
        raise InputError("accuracy vector and confidence must have the same length")
    n = int(a.size)
    order, sorted_conf = _ranked(conf)
    prefix = np.concatenate(([0], np.cumsum(a[order])))
    total_accurate = int(prefix[n])

    points: list[OperatingPoint] = []
    counts: list[PartitionCounts] = []
    for kept in _achievable_kept_counts(sorted_conf, tie_policy):
        an = int(prefix[kept])
        c = PartitionCounts(
            an=an,
            mn=kept - an,
            ar=total_accurate - an,
            mr=(n - kept) - (total_accurate - an),
        )
        counts.append(c)
        points.append(operating_point(c))
    return RejectionCurve(points=points, counts=counts, tie_policy=tie_policy)


def rejection_mask_for_fraction(confidence, fraction: float, tie_policy: str = "group") -> np.ndarray:
    """Build the 0/1 rejection mask for a requested rejected fraction.

    The rejected count is the fraction rounded to the nearest integer; the
    group policy then shrinks it to the largest achievable cut that does
    not split a confidence tie.
    """
    _check_tie_policy(tie_policy)
    conf = _as_confidence(confidence)
    if not 0 <= fraction <= 1:
        raise InputError("fraction must lie in [0, 1]")
    n = conf.size
    target_rejected = int(round(fraction * n))
    order, sorted_conf = _ranked(conf)
    if tie_policy == "group":
        achievable = [n - kept for kept in _achievable_kept_counts(sorted_conf, "group")]
        rejected = max(k for k in achievable if k <= target_rejected)
    else:
        rejected = target_rejected
    mask = np.zeros(n, dtype=np.int64)
    if rejected:
        mask[order[n - rejected:]] = 1
    return mask


def is_threshold_consistent(confidence, mask) -> bool:
    """Whether the mask rejects exactly a lower tail of the confidence ranking.

    Requires every rejected confidence to be strictly below every kept one;
    a shared value on both sides would mean a tie was split.
    """
    conf = _as_confidence(confidence)
    mask = _as_binary(mask, "rejection mask")
    if conf.shape != mask.shape:
        raise InputError("confidence and rejection mask must have the same length")
    rejected = conf[mask == 1]
    kept = conf[mask == 0]
    if rejected.size == 0 or kept.size == 0:
        return True
    return float(rejected.max()) < float(kept.min())
