"""Ascending-ladder bivariate exponent kappa(1, theta) of a strictly stable law,
its dual, closed-form specializations, and the Stieltjes-inversion density.

For theta in (0, 1) the exponent is the exponential of a double power series
in theta and theta^alpha whose coefficients involve 1/sin(m pi / alpha) and
1/sin(alpha k pi).  Values at theta > 1 follow from the scaling relation
kappa(1, theta) = theta^(alpha rho) * kappa(1, 1/theta).  Rational (and
near-rational) alpha make individual terms blow up in canceling pairs; the
evaluator handles them by a symmetric perturbation of alpha or by analytic
pair combination.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NonConvergenceError, ResonanceError
from .numerics import QuadratureConfig, SeriesConfig, integrate_semi_infinite
from .stable_law import Classification, StableLaw, classify

#: |sin| below this triggers the resonant-term policy
_RESONANCE_TOL = 1e-8
#: |log theta| below this switches to the symmetric extrapolation around theta = 1
_NEAR_ONE_CUT = 5e-3
#: extrapolation nodes in u = -log(theta), all safely inside the convergent zone
_NODE_US = (6e-3, 9e-3, 1.35e-2, 2.025e-2, 3.0375e-2)


class RationalAlphaPolicy(enum.Enum):
    PERTURB = "perturb"
    PAIRED_CANCELLATION = "paired_cancellation"


class _Resonance(Exception):
    """Internal: a series denominator fell below the resonance threshold."""


@dataclass(frozen=True)
class KappaEvaluator:
    """Immutable evaluator for one law; all operations are pure.

    The perturbation is relative: on resonance the whole series is
    re-evaluated at alpha * (1 +/- perturbation) and the two values averaged.
    """

    law: StableLaw
    series_cfg: SeriesConfig = field(default_factory=SeriesConfig)
    # paired cancellation is the default: the analytic pair limits are exact
    # in double precision, while the perturbed series floors near 1e-4
    # relative for laws with an undamped low-order resonance (the rounding of
    # the near-pole sine arguments scales like eps/perturbation^2)
    rational_alpha_policy: RationalAlphaPolicy = RationalAlphaPolicy.PAIRED_CANCELLATION
    perturbation: float = 1e-7

    def __post_init__(self):
        if not (0.0 < self.perturbation <= 1e-4):
            raise DomainError(
                f"perturbation must lie in (0, 1e-4], got {self.perturbation}")
        # derived-coefficient cache for the near-1 extrapolation, keyed by
        # (alpha, rho); recomputation under a race is idempotent
        object.__setattr__(self, "_near_one_cache", {})


def _pair_limit(m0: int, j: int, rho: float, log_theta: float) -> float:
    """Analytic limit of the resonant term pair with exponents m0 and alpha*j.

    Derived by expanding both terms around the resonance alpha -> m0/j; the
    1/sin poles cancel and leave a finite contribution.
    """
    sigma = 1.0 if (m0 + j) % 2 == 0 else -1.0
    srm = math.sin(math.pi * rho * m0)
    crm = math.cos(math.pi * rho * m0)
    return (sigma * math.exp(m0 * log_theta)
            * ((1.0 - m0 * log_theta) * srm - rho * m0 * math.pi * crm)
            / (m0 * j * math.pi))


def _log_kappa_series(alpha: float, rho: float, theta: float,
                      cfg: SeriesConfig, paired: bool) -> float:
    """log kappa(1, theta) for theta in (0, 1) by exponent-merged summation.

    Terms from the integer-exponent stream (exponent m) and the
    alpha-multiples stream (exponent alpha*k) are consumed in increasing
    exponent order so that near-resonant pairs sit next to each other and
    partial sums stay bounded.  At a resonance the two stream pointers are
    necessarily adjacent: with ``paired`` the pair is replaced by its
    analytic limit, otherwise _Resonance is raised for the caller's
    perturbation policy.
    """
    log_theta = math.log(theta)
    total = 0.0
    m = 1
    k = 1
    small_run = 0
    count = 0
    pi = math.pi

    while count < cfg.max_terms:
        take_m = m <= alpha * k

        if take_m:
            denom = math.sin(pi * m / alpha)
            if abs(denom) < _RESONANCE_TOL:
                if not paired:
                    raise _Resonance(f"m = {m}")
                if round(m / alpha) != k:
                    raise _Resonance(f"unpairable m = {m}")
                term = _pair_limit(m, k, rho, log_theta)
                m += 1
                k += 1
                count += 2
            else:
                sign = 1.0 if m % 2 == 1 else -1.0
                term = sign * math.exp(m * log_theta) * math.sin(pi * rho * m) / (m * denom)
                m += 1
                count += 1
        else:
            denom = math.sin(pi * alpha * k)
            if abs(denom) < _RESONANCE_TOL:
                if not paired:
                    raise _Resonance(f"k = {k}")
                if round(alpha * k) != m:
                    raise _Resonance(f"unpairable k = {k}")
                term = _pair_limit(m, k, rho, log_theta)
                m += 1
                k += 1
                count += 2
            else:
                sign = 1.0 if k % 2 == 1 else -1.0
                term = (sign * math.exp(alpha * k * log_theta)
                        * math.sin(pi * rho * alpha * k) / (k * denom))
                k += 1
                count += 1

        total += term
        if abs(term) <= max(cfg.rel_tol * abs(total), 1e-17):
            small_run += 1
            if small_run >= 3:
                return total
        else:
            small_run = 0

    raise NonConvergenceError(
        f"ladder-exponent series did not converge within {cfg.max_terms} terms "
        f"(alpha={alpha}, rho={rho}, theta={theta})",
        best_estimate=math.exp(total), evaluations=cfg.max_terms)


def _near_one_coeffs(ev: KappaEvaluator, alpha: float, rho: float,
                     paired: bool) -> np.ndarray:
    """Coefficients of g as a quartic in (u/u_max)^2, where
    log kappa(1, e^u) = alpha*rho*u/2 + g(u) and g is even in u.

    g is sampled at five nodes just outside the slow-convergence sliver;
    the symmetric interpolation reaches near machine precision on |u| < 5e-3.
    """
    key = (alpha, rho)
    cache = ev._near_one_cache
    if key not in cache:
        scale = _NODE_US[-1]
        v = np.array([(u / scale) ** 2 for u in _NODE_US])
        g = np.array([
            _log_kappa_series(alpha, rho, math.exp(-u), ev.series_cfg, paired)
            + alpha * rho * u / 2.0
            for u in _NODE_US
        ])
        coeffs = np.linalg.solve(np.vander(v, 5, increasing=True), g)
        cache[key] = coeffs
    return cache[key]


def _kappa_raw(ev: KappaEvaluator, alpha: float, rho: float, theta: float,
               paired: bool) -> float:
    if theta == 0.0:
        return 1.0
    u = math.log(theta)
    au = abs(u)
    if au >= _NEAR_ONE_CUT:
        s = _log_kappa_series(alpha, rho, math.exp(-au), ev.series_cfg, paired)
        if u < 0:
            return math.exp(s)
        return math.exp(alpha * rho * u + s)
    coeffs = _near_one_coeffs(ev, alpha, rho, paired)
    v = (au / _NODE_US[-1]) ** 2
    g = float(np.polynomial.polynomial.polyval(v, coeffs))
    return math.exp(alpha * rho * u / 2.0 + g)


def _kappa_with_policy(ev: KappaEvaluator, rho: float, theta: float) -> float:
    alpha = ev.law.alpha
    paired = ev.rational_alpha_policy is RationalAlphaPolicy.PAIRED_CANCELLATION
    # at alpha = 1 every term resonates and the perturbed series loses ~1e-4
    # of accuracy to sine rounding near the poles; the analytic pairs are
    # exact there, so they take precedence regardless of policy
    if alpha == 1.0:
        paired = True
    try:
        return _kappa_raw(ev, alpha, rho, theta, paired)
    except _Resonance:
        pass
    eps = ev.perturbation
    try:
        hi = _kappa_raw(ev, alpha * (1.0 + eps), rho, theta, False)
        lo = _kappa_raw(ev, alpha * (1.0 - eps), rho, theta, False)
    except _Resonance as exc:
        raise ResonanceError(
            f"rational-alpha policy failed near alpha = {alpha}: "
            f"perturbed evaluation still resonates ({exc})") from exc
    return 0.5 * (hi + lo)


def kappa(ev: KappaEvaluator, theta: float) -> float:
    """Ladder exponent kappa(1, theta), normalized so kappa(1, 0) = 1.

    Strictly positive, continuous, and nondecreasing in theta.
    """
    if not math.isfinite(theta) or theta < 0:
        raise DomainError(f"theta must be finite and >= 0, got {theta}")
    if theta == 0.0:
        return 1.0
    return _kappa_with_policy(ev, ev.law.rho, theta)


def kappa_dual(ev: KappaEvaluator, theta: float) -> float:
    """Ladder exponent of the negated process (rho -> 1 - rho)."""
    if not math.isfinite(theta) or theta < 0:
        raise DomainError(f"theta must be finite and >= 0, got {theta}")
    if theta == 0.0:
        return 1.0
    return _kappa_with_policy(ev, 1.0 - ev.law.rho, theta)


def kappa_closed_form(law: StableLaw, theta: float) -> float | None:
    """Closed form of kappa(1, theta) where one exists, else None.

    Spectrally negative with alpha > 1: 1 + theta.  Rational-trigonometric
    class (alpha in [1/2, 1), 1 - rho = 1/alpha - 1):
    (theta^(2 alpha) - 2 theta^alpha cos(alpha pi) + 1) / (1 + theta).
    Used as the oracle for the series path, never substituted into it.
    """
    if theta < 0:
        raise DomainError(f"theta must be >= 0, got {theta}")
    kind = classify(law)
    a = law.alpha
    if kind is Classification.SPECTRALLY_NEGATIVE and a > 1.0:
        return 1.0 + theta
    if kind is Classification.DONEY_C11_DUAL:
        return (theta ** (2 * a) - 2 * theta ** a * math.cos(a * math.pi) + 1.0) / (1.0 + theta)
    return None


def stieltjes_density_l(ev: KappaEvaluator, x: float) -> float:
    """Density recovered by Stieltjes inversion of 1 / kappa(1, .).

    l(x) = sin(rho alpha pi)/pi * x^alpha * kappa_dual(1, x)
           / (x^(2 alpha) + 2 x^alpha cos(rho alpha pi) + 1),
    defined for rho in (0, 1] away from rho = 1/alpha, where the denominator
    would vanish at x = 1.
    """
    a, r = ev.law.alpha, ev.law.rho
    if x <= 0:
        raise DomainError(f"x must be > 0, got {x}")
    if r <= 0.0:
        raise DomainError("stieltjes_density_l requires rho > 0")
    if abs(r - 1.0 / a) <= 1e-12:
        raise DomainError("rho = 1/alpha is excluded (inversion degenerates); "
                          "use the spectrally negative closed form instead")
    ra = r * a * math.pi
    xa = x ** a
    return (math.sin(ra) / math.pi * xa * kappa_dual(ev, x)
            / (xa * xa + 2.0 * xa * math.cos(ra) + 1.0))


def inv_kappa_via_stieltjes(ev: KappaEvaluator, theta: float,
                            qcfg: QuadratureConfig | None = None) -> float:
    """Quadrature of int_0^inf l(x) / (x + theta) dx.

    The identity with 1 / kappa(1, theta) is checked by the verification
    suite, not enforced here.
    """
    if theta <= 0:
        raise DomainError(f"theta must be > 0, got {theta}")

    def integrand(x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return np.array([stieltjes_density_l(ev, float(xi)) / (xi + theta)
                         for xi in x])

    res = integrate_semi_infinite(integrand, qcfg or QuadratureConfig(),
                                  zero_exponent=ev.law.alpha)
    return res.value
