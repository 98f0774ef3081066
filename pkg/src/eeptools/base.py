"""Shared result type and exception classes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

Number = Union[float, complex]


class DomainError(ValueError):
    """Raised when an argument lies outside the region where a formula is valid."""


class ConvergenceError(ArithmeticError):
    """Raised when a series or quadrature misses its tolerance within budget."""

    def __init__(self, message: str, result: "EvalResult | None" = None):
        super().__init__(message)
        self.result = result


@dataclass(frozen=True)
class EvalResult:
    """A numerical value together with how much it can be trusted.

    Attributes
    ----------
    value : float or complex
    abs_error_estimate : float
        Estimated absolute error (tail bound plus rounding estimate).
    terms_used : int
        Series terms summed, or integrand evaluations for quadrature.
    converged : bool
        False whenever the tolerance was not met inside the term budget.
    """

    value: Number
    abs_error_estimate: float
    terms_used: int
    converged: bool

    def __post_init__(self):
        if not self.abs_error_estimate >= 0.0:
            raise ValueError("abs_error_estimate must be nonnegative")
        if self.terms_used < 0:
            raise ValueError("terms_used must be nonnegative")

    def __float__(self) -> float:
        if isinstance(self.value, complex):
            raise TypeError("complex EvalResult cannot be converted to float")
        return float(self.value)

    def __complex__(self) -> complex:
        return complex(self.value)

    def require_converged(self, what: str = "evaluation") -> "EvalResult":
        if not self.converged:
            raise ConvergenceError(
                f"{what} did not converge after {self.terms_used} terms "
                f"(error estimate {self.abs_error_estimate:.3g})",
                self,
            )
        return self
