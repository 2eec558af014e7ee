"""Semantic exception hierarchy.

Every error the library raises deliberately derives from CovineqError so
callers can catch library failures without swallowing programming errors.
The CLI maps these onto its exit codes (config -> 2, numerical -> 3).
"""

from __future__ import annotations


class CovineqError(Exception):
    """Base class for all library errors."""


class DomainError(CovineqError, ValueError):
    """An argument is outside the mathematical domain of the operation."""


class IngestionError(CovineqError, ValueError):
    """Tabulated density data violates the ingestion preconditions."""


class IntegrationError(CovineqError, RuntimeError):
    """Adaptive quadrature failed to meet its tolerance.

    Carries the best available estimate and the achieved error bound so
    callers can report partial results.
    """

    def __init__(self, message: str, estimate: float, error_bound: float):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class ComputationError(CovineqError, RuntimeError):
    """A numerical computation produced an unusable intermediate value."""


class UnsupportedMeasureError(CovineqError, TypeError):
    """The measure lacks structure this check requires (e.g. log-concavity)."""


class HypothesisViolatedError(CovineqError, RuntimeError):
    """A conditional inequality's hypothesis fails on this instance.

    Distinct from a certificate failure: the inequality is inapplicable,
    not false.  ``condition`` names the failing hypothesis and ``value``
    is its computed magnitude.
    """

    def __init__(self, condition: str, value: float):
        super().__init__(f"hypothesis violated: {condition} (computed value {value!r})")
        self.condition = condition
        self.value = value


class DivergentNormError(CovineqError, RuntimeError):
    """No finite scaling brings the Orlicz modular below one."""


class ConfigError(CovineqError, ValueError):
    """Run configuration is invalid; ``errors`` lists every problem found."""

    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = list(errors)


class ExpressionError(CovineqError, ValueError):
    """A function expression does not conform to the grammar."""
