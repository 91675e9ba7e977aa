"""Recovering the four-way partition from summary measures.

The triple (A, Q, r) at a known n pins down all four counts:

    an = n * A * (1 - r)          accurate kept
    mn = n * (1 - r) * (1 - A)    misclassified kept
    mr = n * (Q - A * (1 - r))    misclassified rejected
    ar = n * (r - Q + A * (1 - r)) accurate rejected

so rejection quality adds no information once those three are known.
Reconstruction validates that the implied counts are nonnegative integers
up to a tolerance of 1e-6 * n and fails loudly otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exceptions import (
    InconsistentCountError,
    InfeasibleTripletError,
    InputError,
    NotRepresentableError,
)
from .measures import PartitionCounts, classification_quality, nonrejected_accuracy

__all__ = ["MeasureTriplet", "triplet", "reconstruct"]


@dataclass(frozen=True)
class MeasureTriplet:
    """Nonrejected accuracy, classification quality, rejected fraction, and n."""

    A: float
    Q: float
    r: float
    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or self.n != int(self.n) or self.n < 1:
            raise InputError("n must be a positive integer")
        object.__setattr__(self, "n", int(self.n))
        for name in ("A", "Q", "r"):
            value = getattr(self, name)
            if value is None or isinstance(value, bool):
                raise InputError(f"{name} must be a real number")
            if not 0 <= value <= 1:
                raise InputError(f"{name} must lie in [0, 1]")
        if self.r == 1:
            raise InputError("r must be below 1; with everything rejected A is undefined")


def triplet(counts: PartitionCounts) -> MeasureTriplet:
    """Summarize a partition by (A, Q, r, n); requires at least one kept sample."""
    a = nonrejected_accuracy(counts)
    if a is None:
        raise NotRepresentableError(
            "nonrejected accuracy is undefined with everything rejected; "
            "this partition has no measure-triplet form"
        )
    return MeasureTriplet(
        A=a,
        Q=classification_quality(counts),
        r=counts.rejected / counts.n,
        n=counts.n,
    )


def reconstruct(t: MeasureTriplet) -> PartitionCounts:
    """Invert a measure triplet back into the four counts.

    Raises InconsistentCountError when n * r, n * A * (1 - r), or n * Q
    misses an integer by more than 1e-6 * n, and InfeasibleTripletError
    when the implied counts are negative (the triple lies outside the
    feasible region 0 <= Q - A(1-r) <= r with A(1-r) <= 1 - r).
    """
    n = t.n
    a = Fraction(t.A)
    q = Fraction(t.Q)
    r = Fraction(t.r)
    tol = Fraction(1, 10**6) * n

    kept_accurate_raw = n * a * (1 - r)
    rejected_raw = n * r
    handled_raw = n * q

    an = _nearest_count(kept_accurate_raw, tol, "n * A * (1 - r)")
    rejected = _nearest_count(rejected_raw, tol, "n * r")
    handled = _nearest_count(handled_raw, tol, "n * Q")

    mn = n - rejected - an
    mr = handled - an
    ar = rejected - mr

    if mr < 0:
        raise InfeasibleTripletError(
            f"infeasible triplet: Q = {t.Q} is below A * (1 - r) = {float(a * (1 - r))}; "
            "the rejected set cannot contain negative errors"
        )
    if ar < 0:
        raise InfeasibleTripletError(
            f"infeasible triplet: Q - A * (1 - r) = {float(q - a * (1 - r))} exceeds r = {t.r}; "
            "more correct rejections than rejected samples"
        )
    if mn < 0:
        raise InfeasibleTripletError(
            "infeasible triplet: A * (1 - r) exceeds the kept fraction 1 - r"
        )
    if an < 0:
        raise InfeasibleTripletError("infeasible triplet: negative accurate-kept count")
    return PartitionCounts(an=an, mn=mn, ar=ar, mr=mr)


def _nearest_count(raw: Fraction, tol: Fraction, label: str) -> int:
    nearest = int(round(raw))
    if abs(raw - nearest) > tol:
        raise InconsistentCountError(
            f"{label} = {float(raw)} is not an integer within tolerance {float(tol)}; "
            "the measures are inconsistent with this n"
        )
    return nearest
