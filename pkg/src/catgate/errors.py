"""Exception types shared across the package.

The CLI maps these onto exit codes, so every operation raises one of the
classes below rather than bare ValueError/RuntimeError.
"""


class CatgateError(Exception):
    """Base class for all package errors."""


class DomainError(CatgateError, ValueError):
    """Input outside the physically meaningful domain of an operation."""


class ContractError(CatgateError, ValueError):
    """Arguments violate an interface contract (grid mismatch, bad norm, ...)."""


class DegenerateOutcomeError(CatgateError, RuntimeError):
    """Measurement outcome incompatible with the input state (output norm ~ 0)."""
