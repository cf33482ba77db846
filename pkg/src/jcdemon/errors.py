"""Exception types shared across the package."""


class TruncationError(Exception):
    """Raised when a state or operator does not fit the Fock truncation."""


class DimensionMismatch(Exception):
    """Raised when operator/state dimensions are inconsistent."""


class DomainError(Exception):
    """Raised when a scalar argument lies outside its mathematical domain."""


class ConfigError(Exception):
    """Raised for invalid run configurations or config files."""


class InvariantViolation(Exception):
    """Raised when a completed run violates the thermodynamic invariant suite."""
