"""Exception types shared across the package."""


class CatqedError(Exception):
    """Base class for all package-specific failures."""


class RegimeError(CatqedError, ValueError):
    """Raised when parameters fall outside the regime a formula is valid in,
    e.g. unequal dot couplings or overdamped decay."""


class NumericalIntegrityError(CatqedError, ArithmeticError):
    """Raised when a computed quantity violates a guaranteed bound by more
    than roundoff can explain (signals a formula or solver defect)."""


class TruncationError(CatqedError, ValueError):
    """Raised when an occupation-number cutoff is too small for the requested
    state. Carries the smallest sufficient cutoff."""

    def __init__(self, message, required_cutoff):
        super().__init__(message)
        self.required_cutoff = required_cutoff


class BudgetError(CatqedError, RuntimeError):
    """Raised when the oracle would exceed the configured dimension budget.
    Carries the cutoff and dimension that would be required."""

    def __init__(self, message, required_cutoff, required_dim, budget):
        super().__init__(message)
        self.required_cutoff = required_cutoff
        self.required_dim = required_dim
        self.budget = budget


class ScenarioError(CatqedError, ValueError):
    """Raised for malformed or unsupported scenario configurations."""
