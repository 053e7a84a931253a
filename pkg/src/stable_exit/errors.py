"""Exception hierarchy shared by all modules.

Domain errors signal invalid parameters (CLI exit code 2); numeric errors
signal a computation that did not reach its tolerance (CLI exit code 3) and
carry the best available estimate so callers can decide on a fallback.
"""

from __future__ import annotations

import math


class StableExitError(Exception):
    """Base class for all package errors."""


class DomainError(StableExitError, ValueError):
    """Input outside the mathematical domain of an operation."""


class AdmissibilityError(DomainError):
    """(alpha, rho) pair outside the admissible parameter region."""


class UnsupportedRegimeError(DomainError):
    """Law outside the parameter regime covered by the requested formula."""


class NonConvergenceError(StableExitError, RuntimeError):
    """Quadrature or series summation failed to reach its tolerance.

    Carries the best estimate reached, the error estimate attached to it,
    and the number of evaluations spent.
    """

    def __init__(self, message, best_estimate=math.nan,
                 abs_err_estimate=math.inf, evaluations=0):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.abs_err_estimate = abs_err_estimate
        self.evaluations = evaluations


class ResonanceError(NonConvergenceError):
    """The rational-alpha policy failed to tame a resonant series term."""


class TabulationError(StableExitError, RuntimeError):
    """Building a numeric inverse-CDF table failed."""
