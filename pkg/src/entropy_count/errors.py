"""Exception hierarchy shared by all modules."""


class EntropyCountError(Exception):
    """Base class for all errors raised by this package."""


class InfeasibleMargins(EntropyCountError):
    """Margins (or degrees) cannot be realized: sum mismatch, nonpositive
    entry, or out-of-range degree."""


class NoConvergence(EntropyCountError):
    """The dual solver failed to reach the residual tolerance within the
    iteration budget."""


class MaxEntBoundary(EntropyCountError):
    """The dual parameters diverge: no interior maximum-entropy solution
    exists for the requested margins/degrees."""


class SingularCovariance(EntropyCountError):
    """The margin-sum covariance is structurally singular (graphs with
    n < 3)."""


class NotPositiveDefinite(EntropyCountError):
    """A symmetric factorization hit a nonpositive pivot."""


class BudgetExceeded(EntropyCountError):
    """An exact counter exceeded the configured state budget."""


class DimensionTooLarge(EntropyCountError):
    """Characteristic-function quadrature requested for d > 3."""
