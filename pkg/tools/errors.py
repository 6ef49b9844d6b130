class IsingEvoError(Exception):
    """Base class for all errors raised by this package."""


class BudgetExhausted(IsingEvoError):
    """Raised when an evaluation is requested after the budget is spent."""


class DomainViolation(IsingEvoError):
    """Raised when a candidate outside [lo, hi) reaches the evaluator."""


class ConfigurationError(IsingEvoError):
    """Raised for invalid experiment or CLI configuration."""
