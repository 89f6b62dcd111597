"""Approximate counting of margin-constrained tables and graphs.

Estimates the number of non-negative integer tables with given row and
column sums, and the number of labeled simple graphs with a given degree
sequence, via a maximum-entropy product model, a Gaussian local-limit
step, and a third/fourth-cumulant correction.  Exact DP oracles,
characteristic-function quadrature, and Monte Carlo moment checks
validate the estimates.
"""

from .errors import (
    BudgetExceeded,
    DimensionTooLarge,
    EntropyCountError,
    InfeasibleMargins,
    MaxEntBoundary,
    NoConvergence,
    NotPositiveDefinite,
    SingularCovariance,
)
from .estimator import (
    CountReport,
    closed_form_table_report,
    estimate_graph,
    estimate_table,
    gaussian_only,
    validity_diagnostics,
)
from .kernels import BACKEND
from .maxent import (
    BernoulliFit,
    DegreeSpec,
    GeometricFit,
    MarginSpec,
    entropy_graph,
    entropy_table,
    fit_graph,
    fit_table,
)
from .moments import (
    CovarianceModel,
    CumulantSummary,
    EdgeCoefficients,
    PairCovariances,
    build_graph_covariance,
    build_table_covariance,
    closed_form_equal_margins,
    closed_form_regular_graph,
    closed_form_two_class_log_det,
    edge_pair_covariances,
    graph_edge_coefficients,
    kappa3,
    kappa4,
    log_det,
    table_edge_coefficients,
)
from .oracle import (
    ExactCount,
    MCEstimate,
    charfn_quadrature_table,
    exact_count_graphs,
    exact_count_tables,
    mc_gaussian_moments,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BernoulliFit",
    "BudgetExceeded",
    "CountReport",
    "CovarianceModel",
    "CumulantSummary",
    "DegreeSpec",
    "DimensionTooLarge",
    "EdgeCoefficients",
    "EntropyCountError",
    "ExactCount",
    "GeometricFit",
    "InfeasibleMargins",
    "MCEstimate",
    "MarginSpec",
    "MaxEntBoundary",
    "NoConvergence",
    "NotPositiveDefinite",
    "PairCovariances",
    "SingularCovariance",
    "build_graph_covariance",
    "build_table_covariance",
    "charfn_quadrature_table",
    "closed_form_equal_margins",
    "closed_form_regular_graph",
    "closed_form_table_report",
    "closed_form_two_class_log_det",
    "edge_pair_covariances",
    "entropy_graph",
    "entropy_table",
    "estimate_graph",
    "estimate_table",
    "exact_count_graphs",
    "exact_count_tables",
    "fit_graph",
    "fit_table",
    "gaussian_only",
    "graph_edge_coefficients",
    "kappa3",
    "kappa4",
    "log_det",
    "mc_gaussian_moments",
    "table_edge_coefficients",
    "validity_diagnostics",
    "__version__",
]
