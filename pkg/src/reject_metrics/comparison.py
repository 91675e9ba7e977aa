"""Comparing rejector operating points.

Two layers of comparison are provided.  Count-level dominance settles the
order for every rejection cost at once when one of three coordinate ties
holds.  Measure-level relative optimality (beta) grades an operating point
against a reference on a [-1, 1] scale for confidence-ranked sweeps and
maps directly to the rejection-cost threshold at which the preference
flips: with cost L(A, r) = (1 - r)(1 - A) n + rho r n and points at
rejected fractions r1 > r0,

    sgn(L(p0) - L(p1)) = sgn((beta + 1) / 2 - rho)

so the more-rejecting point is strictly cheaper exactly for rho below
(beta + 1) / 2.

Exactness: floats are absorbed as the rationals they represent and every
derived quantity is rounded once on the way out, which keeps sign laws and
round-trip identities intact.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exceptions import InputError, NotApplicableError
from .measures import PartitionCounts

__all__ = [
    "CostSpec",
    "ReferencePoint",
    "RelativeOptimality",
    "EnvelopeBounds",
    "ComparisonVerdict",
    "DOMINATES",
    "DOMINATED",
    "COST_DEPENDENT",
    "EQUIVALENT",
    "CASE_EQUAL_R",
    "CASE_EQUAL_AN",
    "CASE_EQUAL_MN",
    "dominance",
    "relative_optimality",
    "cost",
    "delta_cost_sign",
    "rho_threshold",
    "envelopes",
    "compare_rejectors",
    "beta_from_counts",
    "beta_from_quality",
    "beta_matrix",
    "beta_matrix_from_points",
    "beta_matrix_from_quality",
    "min_rho_no_rejection",
]

DOMINATES = "dominates"
DOMINATED = "dominated"
COST_DEPENDENT = "cost-dependent"
EQUIVALENT = "equivalent"

CASE_EQUAL_R = "equal-R"
CASE_EQUAL_AN = "equal-AN"
CASE_EQUAL_MN = "equal-MN"

# Cost deltas closer to zero than this (per sample) are reported as ties;
# it absorbs the representation error of decimal-entered measure values.
_TIE_BAND = Fraction(1, 10**9)


@dataclass(frozen=True)
class CostSpec:
    """Rejection cost weight: a rejected sample costs rho, an error costs 1."""

    rho: float

    def __post_init__(self):
        if not 0 <= self.rho <= 1:
            raise InputError("rho must lie in [0, 1]")


@dataclass(frozen=True)
class ReferencePoint:
    """A (nonrejected accuracy, rejected fraction) pair to compare against."""

    A0: float
    r0: float
    counts: PartitionCounts | None = None

    def __post_init__(self):
        if not 0 <= self.A0 <= 1:
            raise InputError("A0 must lie in [0, 1]")
        if not 0 <= self.r0 < 1:
            raise InputError("r0 must lie in [0, 1)")


@dataclass(frozen=True)
class RelativeOptimality:
    """beta value plus which branch (more or less rejecting) produced it."""

    beta: float
    direction: str  # "r1>r0" or "r1<r0"


@dataclass(frozen=True)
class EnvelopeBounds:
    """Attainable nonrejected-accuracy band at a new rejected fraction.

    ``best_raw`` and ``worst_raw`` are the unclamped beta = +1 and beta = -1
    solutions; ``best`` and ``worst`` are clamped to [0, 1], with the
    feasibility flags recording whether clamping was needed.
    """

    best_raw: float
    worst_raw: float
    best: float
    worst: float
    best_feasible: bool
    worst_feasible: bool


@dataclass(frozen=True)
class ComparisonVerdict:
    """Outcome of comparing an operating point against a reference.

    ``kind`` is one of dominates / dominated / cost-dependent / equivalent,
    always stated for the first argument of the comparison.  For
    cost-dependent verdicts ``beta`` and ``rho_threshold`` describe the
    canonical direction (the more-rejecting point against the
    less-rejecting one; ``swapped`` records whether the arguments were
    flipped to get there) and ``outcome`` answers for the first argument
    at the evaluated ``rho``.
    """

    kind: str
    beta: float | None = None
    rho_threshold: float | None = None
    dominance_case: str | None = None
    rho: float | None = None
    outcome: str | None = None
    swapped: bool = False


def _check_point(point, name: str) -> tuple[float, float]:
    try:
        a, r = point
    except (TypeError, ValueError):
        raise InputError(f"{name} must be an (accuracy, rejected fraction) pair") from None
    if a is None:
        raise InputError(f"{name} has undefined nonrejected accuracy; comparison needs a defined A")
    if isinstance(a, bool) or isinstance(r, bool):
        raise InputError(f"{name} must contain real numbers")
    if not 0 <= a <= 1:
        raise InputError(f"{name} accuracy must lie in [0, 1]")
    if not 0 <= r <= 1:
        raise InputError(f"{name} rejected fraction must lie in [0, 1]")
    return float(a), float(r)


def _kept_accurate_mass(a: float, r: float) -> Fraction:
    """Exact A * (1 - r), the accurate-and-kept fraction of all samples."""
    return Fraction(a) * (1 - Fraction(r))


def dominance(c1: PartitionCounts, c2: PartitionCounts) -> ComparisonVerdict | None:
    """Cost-free ordering of two partitions of the same classifier output.

    Three coordinate ties settle the comparison for every rho in [0, 1]:
    equal rejected counts (more kept-accurate wins), equal kept-accurate
    (more rejections win, they can only have removed errors), and equal
    kept-misclassified (fewer rejections win, the extra ones only removed
    accurate samples).  Returns None when no tie applies or when the
    deciding coordinate is itself tied.
    """
    if c1.n != c2.n:
        raise InputError("partitions cover different sample counts and are not comparable")
    if c1.accurate != c2.accurate:
        raise InputError(
            "partitions disagree on the classifier's accurate total; "
            "dominance assumes the same classifier output"
        )
    if c1.rejected == c2.rejected:
        if c1.an == c2.an:
            return None
        first_wins = c1.an > c2.an
        case = CASE_EQUAL_R
    elif c1.an == c2.an:
        first_wins = c1.rejected > c2.rejected
        case = CASE_EQUAL_AN
    elif c1.mn == c2.mn:
        first_wins = c1.rejected < c2.rejected
        case = CASE_EQUAL_MN
    else:
        return None
    return ComparisonVerdict(kind=DOMINATES if first_wins else DOMINATED, dominance_case=case)


def relative_optimality(p1, p0) -> RelativeOptimality:
    """Grade point p1 = (A1, r1) against reference p0 = (A0, r0).

    For confidence-ranked sweeps beta lands in [-1, 1]: +1 means the
    rejection change removed only misclassified samples, -1 only accurate
    ones.  Requires r1 != r0; equal fractions are ordered by accuracy
    alone, see dominance().
    """
    a1, r1 = _check_point(p1, "p1")
    a0, r0 = _check_point(p0, "p0")
    if r1 == r0:
        raise NotApplicableError(
            "beta is undefined at equal rejected fractions; compare with dominance()"
        )
    d = _kept_accurate_mass(a1, r1) - _kept_accurate_mass(a0, r0)
    dr = Fraction(r1) - Fraction(r0)
    if r1 > r0:
        beta = 2 * d / dr + 1
        direction = "r1>r0"
    else:
        beta = -2 * d / dr - 1
        direction = "r1<r0"
    return RelativeOptimality(beta=float(beta), direction=direction)


def _cost_fraction(a: float | None, r: float, spec: CostSpec) -> Fraction:
    rf = Fraction(r)
    if a is None:
        if r != 1:
            raise InputError("nonrejected accuracy may be undefined only when everything is rejected")
        kept_err = Fraction(0)
    else:
        kept_err = (1 - rf) * (1 - Fraction(a))
    return kept_err + Fraction(spec.rho) * rf


def cost(a: float | None, r: float, n: int, spec: CostSpec) -> float:
    """Expected operating cost: one per kept error plus rho per rejection, times n."""
    if isinstance(n, bool) or n != int(n) or n < 1:
        raise InputError("n must be a positive integer")
    if a is not None:
        af, rf = _check_point((a, r), "point")
        return float(_cost_fraction(af, rf, spec) * int(n))
    if not 0 <= r <= 1:
        raise InputError("point rejected fraction must lie in [0, 1]")
    return float(_cost_fraction(None, float(r), spec) * int(n))


def delta_cost_sign(p1, p0, spec: CostSpec) -> int:
    """Sign of L(p0) - L(p1) per sample: +1 when p1 is cheaper, 0 on a tie.

    Differences inside a 1e-9 per-sample band count as ties, absorbing the
    float representation of decimal inputs.
    """
    a1, r1 = _check_point(p1, "p1")
    a0, r0 = _check_point(p0, "p0")
    dl = _cost_fraction(a0, r0, spec) - _cost_fraction(a1, r1, spec)
    if abs(dl) < _TIE_BAND:
        return 0
    return 1 if dl > 0 else -1


def rho_threshold(beta: float) -> float:
    """Rejection cost at which the preference between the points flips."""
    return float((Fraction(beta) + 1) / 2)


def envelopes(p0, r1: float) -> EnvelopeBounds:
    """Attainable accuracy band at rejected fraction r1, seen from p0.

    The bounds are the beta = +1 and beta = -1 solutions: moving from r0
    to r1 shifts kept-accurate mass by at most the rejected-mass change,
    so the best case keeps every accurate sample and the worst case loses
    accurate samples one for one.  Raw solutions outside [0, 1] are
    unreachable for any actual partition and are flagged infeasible.
    """
    if isinstance(p0, ReferencePoint):
        a0, r0 = p0.A0, p0.r0
    else:
        a0, r0 = _check_point(p0, "p0")
    if not 0 <= r1 < 1:
        raise InputError("r1 must lie in [0, 1)")
    if r1 == r0:
        raise NotApplicableError("envelopes need a changed rejected fraction; r1 equals r0")
    mass0 = _kept_accurate_mass(a0, r0)
    dr = Fraction(r1) - Fraction(r0)
    if dr > 0:
        best_mass = mass0
        worst_mass = mass0 - dr
    else:
        best_mass = mass0 - dr
        worst_mass = mass0
    kept1 = 1 - Fraction(r1)
    best_raw = best_mass / kept1
    worst_raw = worst_mass / kept1
    best_feasible = 0 <= best_raw <= 1
    worst_feasible = 0 <= worst_raw <= 1
    clamp = lambda v: float(min(max(v, Fraction(0)), Fraction(1)))
    return EnvelopeBounds(
        best_raw=float(best_raw),
        worst_raw=float(worst_raw),
        best=clamp(best_raw),
        worst=clamp(worst_raw),
        best_feasible=best_feasible,
        worst_feasible=worst_feasible,
    )


def compare_rejectors(p1, p0, spec: CostSpec | None = None) -> ComparisonVerdict:
    """Compare two operating points, optionally at a specific cost weight.

    Equal rejected fractions reduce to the accuracy ordering.  Otherwise
    the pair is normalized so the more-rejecting point is graded against
    the less-rejecting one (swapping flips the reported outcome, not beta
    or the threshold), and when a CostSpec is given the verdict at that
    rho is stated for p1.
    """
    a1, r1 = _check_point(p1, "p1")
    a0, r0 = _check_point(p0, "p0")
    if r1 == r0:
        if a1 == a0:
            return ComparisonVerdict(kind=EQUIVALENT)
        return ComparisonVerdict(
            kind=DOMINATES if a1 > a0 else DOMINATED,
            dominance_case=CASE_EQUAL_R,
        )
    swapped = r1 < r0
    (a_hi, r_hi), (a_lo, r_lo) = ((a0, r0), (a1, r1)) if swapped else ((a1, r1), (a0, r0))
    d = _kept_accurate_mass(a_hi, r_hi) - _kept_accurate_mass(a_lo, r_lo)
    dr = Fraction(r_hi) - Fraction(r_lo)
    beta = 2 * d / dr + 1
    threshold = (beta + 1) / 2

    outcome = None
    rho = None
    if spec is not None:
        rho = spec.rho
        dl = dr * (threshold - Fraction(rho))  # L(lo) - L(hi) per sample
        if abs(dl) < _TIE_BAND:
            outcome = "equivalent"
        elif (dl > 0) != swapped:
            outcome = "outperforms"
        else:
            outcome = "outperformed"
    return ComparisonVerdict(
        kind=COST_DEPENDENT,
        beta=float(beta),
        rho_threshold=float(threshold),
        rho=rho,
        outcome=outcome,
        swapped=swapped,
    )


def beta_from_counts(c1: PartitionCounts, c0: PartitionCounts) -> float:
    """beta between two partitions of the same classifier output, exactly.

    Reduces to an integer ratio: the change in correctly handled samples
    over the absolute change in rejections.
    """
    if c1.n != c0.n:
        raise InputError("partitions cover different sample counts and are not comparable")
    if c1.accurate != c0.accurate:
        raise InputError("partitions disagree on the classifier's accurate total")
    if c1.rejected == c0.rejected:
        raise NotApplicableError(
            "beta is undefined at equal rejected counts; compare with dominance()"
        )
    dq = (c1.an + c1.mr) - (c0.an + c0.mr)
    return dq / abs(c1.rejected - c0.rejected)


def _sweep_threads() -> int:
    raw = os.environ.get("REJECT_METRICS_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise InputError(f"REJECT_METRICS_THREADS must be an integer, got {raw!r}") from None


def beta_matrix(counts: list[PartitionCounts]) -> list[list[float | None]]:
    """Pairwise beta values; entry [i][j] grades point i against reference j.

    Computed from counts so every entry is an exactly rounded integer
    ratio.  Entries are None on the diagonal and wherever two points share
    a rejected count.
    """
    m = len(counts)
    if m < 2:
        raise InputError("beta matrix needs at least two operating points")
    n = counts[0].n
    accurate = counts[0].accurate
    for c in counts[1:]:
        if c.n != n or c.accurate != accurate:
            raise InputError("all partitions must cover the same classifier output")
    q = np.array([c.an + c.mr for c in counts], dtype=np.int64)
    rej = np.array([c.rejected for c in counts], dtype=np.int64)
    dq = q[:, None] - q[None, :]
    drej = np.abs(rej[:, None] - rej[None, :])
    with np.errstate(divide="ignore", invalid="ignore"):
        raw = dq / drej
    return [
        [None if drej[i, j] == 0 else float(raw[i, j]) for j in range(m)]
        for i in range(m)
    ]


def _rows_parallel(row, m: int) -> list[list[float | None]]:
    """Evaluate row(i) for i in range(m), spread over REJECT_METRICS_THREADS."""
    threads = _sweep_threads()
    if threads == 1:
        return [row(i) for i in range(m)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(row, range(m)))


def beta_matrix_from_points(points) -> list[list[float | None]]:
    """Pairwise beta values from (A, r) pairs alone.

    For inputs that only exist as measures (no counts).  Points with
    undefined accuracy or equal rejected fractions yield None entries.
    """
    pts = list(points)
    if len(pts) < 2:
        raise InputError("beta matrix needs at least two operating points")

    def row(i) -> list[float | None]:
        ai, ri = pts[i]
        out: list[float | None] = []
        for j, (aj, rj) in enumerate(pts):
            if i == j or ai is None or aj is None or ri == rj:
                out.append(None)
            else:
                out.append(relative_optimality((ai, ri), (aj, rj)).beta)
        return out

    return _rows_parallel(row, len(pts))


def beta_from_quality(q1: float, r1: float, q0: float, r0: float) -> float:
    """beta via the quality slope: (Q1 - Q0) / |r1 - r0|, exactly.

    Valid when both points measure the same classifier output; the shared
    no-rejection accuracy cancels out of the quality difference.  Unlike
    the accuracy route this also grades the all-rejected point, where Q
    stays defined.
    """
    for name, value in (("q1", q1), ("r1", r1), ("q0", q0), ("r0", r0)):
        if value is None or isinstance(value, bool) or not 0 <= value <= 1:
            raise InputError(f"{name} must lie in [0, 1]")
    if r1 == r0:
        raise NotApplicableError(
            "beta is undefined at equal rejected fractions; compare with dominance()"
        )
    return float((Fraction(q1) - Fraction(q0)) / abs(Fraction(r1) - Fraction(r0)))


def beta_matrix_from_quality(qs, rs) -> list[list[float | None]]:
    """Pairwise beta values from per-point (Q, r), via the quality slope.

    The rows must belong to a single classifier's sweep.  Entries are None
    on the diagonal and wherever two points share a rejected fraction.
    """
    qs = list(qs)
    rs = list(rs)
    if len(qs) != len(rs):
        raise InputError("quality and fraction lists differ in length")
    if len(qs) < 2:
        raise InputError("beta matrix needs at least two operating points")

    def row(i) -> list[float | None]:
        out: list[float | None] = []
        for j in range(len(qs)):
            if i == j or rs[i] == rs[j]:
                out.append(None)
            else:
                out.append(beta_from_quality(qs[i], rs[i], qs[j], rs[j]))
        return out

    return _rows_parallel(row, len(qs))


def min_rho_no_rejection(counts: list[PartitionCounts]) -> list[float | None]:
    """Per point, the smallest rho at which not rejecting is weakly cheaper.

    The reference is the curve's r = 0 partition; the answer is the cost
    threshold (beta + 1) / 2 of each point against it.  The r = 0 entry
    itself is None.
    """
    ref = None
    for c in counts:
        if c.rejected == 0:
            ref = c
            break
    if ref is None:
        raise InputError("no r = 0 partition present; the no-rejection reference is required")
    out: list[float | None] = []
    for c in counts:
        if c.rejected == ref.rejected:
            out.append(None)
        else:
            dq = (c.an + c.mr) - (ref.an + ref.mr)
            beta = Fraction(dq, abs(c.rejected - ref.rejected))
            out.append(float((beta + 1) / 2))
    return out
