"""Parameterization, validation and classification of strictly alpha-stable laws.

A law is indexed by the stability index ``alpha`` and the positivity
coefficient ``rho = P(X_t >= 0)``; the skewness ``beta`` is kept when the law
was built from ``(alpha, beta)``.  The characteristic exponent convention is

    |z|^alpha * (1 - i * beta * tan(pi*alpha/2) * sgn z),

so that ``rho = 1/2 + arctan(beta * tan(pi*alpha/2)) / (pi*alpha)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import AdmissibilityError, DomainError

#: absolute tolerance for all equality tests on (alpha, rho) manifolds
CLASS_TOL = 1e-12


class Classification(enum.Enum):
    """Special parameter manifolds of the (alpha, rho) plane.

    Spectrally one-sided laws have jumps of a single sign: for alpha > 1 the
    endpoints of the rho band, for alpha < 1 the monotone laws (rho = 1 is the
    increasing one, rho = 0 its mirror image).  The rational-trigonometric
    ladder-exponent class covers alpha in [1/2, 1) with 1 - rho = 1/alpha - 1.
    """

    SPECTRALLY_POSITIVE = "spectrally_positive"
    SPECTRALLY_NEGATIVE = "spectrally_negative"
    SYMMETRIC = "symmetric"
    DONEY_C11_DUAL = "doney_c11_dual"
    GENERAL = "general"


def rho_from_beta(alpha: float, beta: float) -> float:
    """Positivity coefficient P(X_t >= 0) from the skewness parameter.

    Uses the principal arctan branch, which reproduces the one-sided
    endpoints exactly: beta = -1 gives rho = 1/alpha for alpha > 1 and
    rho = 0 for alpha < 1; beta = +1 mirrors them.
    """
    if not (0.0 < alpha < 2.0) or not math.isfinite(alpha):
        raise DomainError(f"alpha must lie in (0, 2), got {alpha}")
    if not (-1.0 <= beta <= 1.0):
        raise DomainError(f"beta must lie in [-1, 1], got {beta}")
    if alpha == 1.0:
        if beta != 0.0:
            raise DomainError("alpha = 1 requires beta = 0")
        return 0.5
    return 0.5 + math.atan(beta * math.tan(math.pi * alpha / 2)) / (math.pi * alpha)


def _beta_from_rho(alpha: float, rho: float) -> float:
    """Inverse of rho_from_beta on the admissible band (internal)."""
    if alpha == 1.0:
        return 0.0
    beta = math.tan(math.pi * alpha * (rho - 0.5)) / math.tan(math.pi * alpha / 2)
    return min(1.0, max(-1.0, beta))


def _admissible_rho_band(alpha: float) -> tuple[float, float]:
    if alpha <= 1.0:
        return 0.0, 1.0
    return 1.0 - 1.0 / alpha, 1.0 / alpha


@dataclass(frozen=True)
class StableLaw:
    """A validated strictly alpha-stable law.

    alpha = 2 is admitted only as a limiting parameter for ladder-exponent
    series tests; the exit-law operations reject it.
    """

    alpha: float
    rho: float
    beta: float | None = None

    def __post_init__(self):
        a, r = self.alpha, self.rho
        if not (math.isfinite(a) and math.isfinite(r)):
            raise AdmissibilityError("alpha and rho must be finite")
        if not (0.0 < a <= 2.0):
            raise AdmissibilityError(f"alpha must lie in (0, 2], got {a}")
        if a == 2.0 or a == 1.0:
            if abs(r - 0.5) > CLASS_TOL:
                raise AdmissibilityError(f"alpha = {a} forces rho = 1/2, got {r}")
        else:
            lo, hi = _admissible_rho_band(a)
            if r < lo - CLASS_TOL or r > hi + CLASS_TOL:
                raise AdmissibilityError(
                    f"rho = {r} outside admissible band [{lo}, {hi}] for alpha = {a}")
        if self.beta is not None:
            ref = rho_from_beta(a, self.beta)
            if abs(r - ref) > CLASS_TOL:
                raise AdmissibilityError(
                    f"rho = {r} inconsistent with beta = {self.beta} "
                    f"(implies rho = {ref})")


def new_from_alpha_rho(alpha: float, rho: float) -> StableLaw:
    """Build a validated law from (alpha, rho); beta is left unset."""
    return StableLaw(float(alpha), float(rho))


def new_from_alpha_beta(alpha: float, beta: float) -> StableLaw:
    """Build a validated law from (alpha, beta), deriving rho."""
    return StableLaw(float(alpha), rho_from_beta(alpha, beta), float(beta))


def dual(law: StableLaw) -> StableLaw:
    """Law of the negated process: rho -> 1 - rho, beta -> -beta."""
    b = None if law.beta is None else -law.beta
    return StableLaw(law.alpha, 1.0 - law.rho, b)


def classify(law: StableLaw) -> Classification:
    """Classify a law, resolving overlaps by priority.

    Priority: DONEY_C11_DUAL, then the spectrally one-sided endpoints, then
    SYMMETRIC.  Equality is tested with absolute tolerance CLASS_TOL since
    all special classes are measure-zero manifolds.
    """
    a, r = law.alpha, law.rho
    if 0.5 <= a < 1.0 and abs((1.0 - r) - (1.0 / a - 1.0)) <= CLASS_TOL:
        return Classification.DONEY_C11_DUAL
    if a > 1.0:
        if abs(r - (1.0 - 1.0 / a)) <= CLASS_TOL:
            return Classification.SPECTRALLY_POSITIVE
        if abs(r - 1.0 / a) <= CLASS_TOL:
            return Classification.SPECTRALLY_NEGATIVE
    elif a < 1.0:
        if abs(r - 1.0) <= CLASS_TOL:
            return Classification.SPECTRALLY_POSITIVE
        if abs(r) <= CLASS_TOL:
            return Classification.SPECTRALLY_NEGATIVE
    if abs(r - 0.5) <= CLASS_TOL:
        return Classification.SYMMETRIC
    return Classification.GENERAL
