"""Evaluation toolkit for classifiers with a reject option.

Computes the three standard measures of a classify-or-reject system
(nonrejected accuracy, classification quality, rejection quality), sweeps
them across rejection thresholds, compares rejectors with and without an
explicit rejection cost, reconstructs the underlying four-way confusion
counts from summary measures, and ships a fully analytic four-Gaussian
benchmark for controlled experiments.
"""

from .comparison import (
    CASE_EQUAL_AN,
    CASE_EQUAL_MN,
    CASE_EQUAL_R,
    COST_DEPENDENT,
    DOMINATED,
    DOMINATES,
    EQUIVALENT,
    ComparisonVerdict,
    CostSpec,
    EnvelopeBounds,
    ReferencePoint,
    RelativeOptimality,
    beta_from_counts,
    beta_from_quality,
    beta_matrix,
    beta_matrix_from_points,
    beta_matrix_from_quality,
    compare_rejectors,
    cost,
    delta_cost_sign,
    dominance,
    envelopes,
    min_rho_no_rejection,
    relative_optimality,
    rho_threshold,
)
from .exceptions import (
    DataFormatError,
    InconsistentCountError,
    InfeasibleTripletError,
    InputError,
    NotApplicableError,
    NotRepresentableError,
    RejectMetricsError,
    UsageError,
)
from .measures import (
    TIE_POLICIES,
    LabeledPredictions,
    OperatingPoint,
    PartitionCounts,
    RejectionCurve,
    accuracy_vector,
    classification_quality,
    is_threshold_consistent,
    measures_closed_form,
    nonrejected_accuracy,
    operating_point,
    partition_counts,
    rejection_curve,
    rejection_mask_for_fraction,
    rejection_quality,
)
from .reconstruction import MeasureTriplet, reconstruct, triplet
from .synth import (
    CENTERS,
    SyntheticDataset,
    classify_nearest_center,
    confidence_breaking_ties,
    confidence_max_prob,
    generate_gaussians,
    posterior_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # measures
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
    # comparison
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
    # reconstruction
    "MeasureTriplet",
    "triplet",
    "reconstruct",
    # synthetic benchmark
    "CENTERS",
    "SyntheticDataset",
    "generate_gaussians",
    "posterior_matrix",
    "classify_nearest_center",
    "confidence_max_prob",
    "confidence_breaking_ties",
    # errors
    "RejectMetricsError",
    "InputError",
    "DataFormatError",
    "UsageError",
    "NotApplicableError",
    "NotRepresentableError",
    "InfeasibleTripletError",
    "InconsistentCountError",
]
