"""Law of the first exit time from the positive half-line.

Covers the Laplace transform for every non-spectrally-positive strictly
stable law, exit-time densities in the regimes that admit them (alpha > 1
through a subordinator mixture, the Cauchy closed form, and the symmetric
2/3-stable series form), the factor density m of the multiplicative
decomposition of the exit time, and the closed forms available on the
rational-trigonometric ladder class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, UnsupportedRegimeError
from .kappa import KappaEvaluator, kappa
from .numerics import (QuadratureConfig, gauss_legendre, integrate_finite,
                       integrate_semi_infinite, _wynn_epsilon)
from .special_fn import gamma_upper_scaled, hyp1f2, subordinator_density
from .stable_law import CLASS_TOL, Classification, StableLaw, classify

_GAMMA_4_3 = math.gamma(4.0 / 3.0)
#: switch point between the direct 1F2 series and the large-argument form
_BRACKET_SWITCH = 8.0


def _is_spectrally_positive_exit(law: StableLaw) -> bool:
    return law.alpha > 1.0 and abs(law.rho - (1.0 - 1.0 / law.alpha)) <= CLASS_TOL


@dataclass(frozen=True)
class ExitLaw:
    """Exit problem for one law started at ``start`` > 0.

    Spectrally positive laws with alpha > 1 are admitted and served by the
    subordinator closed form; the increasing laws (alpha < 1, rho = 1) never
    exit the half-line and are rejected.
    """

    law: StableLaw
    start: float = 1.0
    kev: KappaEvaluator | None = None
    qcfg: QuadratureConfig = field(default_factory=QuadratureConfig)

    def __post_init__(self):
        if self.start <= 0 or not math.isfinite(self.start):
            raise DomainError(f"start must be > 0, got {self.start}")
        if self.law.alpha >= 2.0:
            raise DomainError("exit-law operations require alpha < 2")
        if self.law.alpha < 1.0 and abs(self.law.rho - 1.0) <= CLASS_TOL:
            raise DomainError(
                "rho = 1 with alpha < 1 is an increasing process that never "
                "exits the positive half-line")
        if self.kev is None:
            object.__setattr__(self, "kev", KappaEvaluator(self.law))


@dataclass(frozen=True)
class MDensity:
    """Density of the positive factor variable in the exit-time product law."""

    law: StableLaw
    kev: KappaEvaluator | None = None

    def __post_init__(self):
        a, r = self.law.alpha, self.law.rho
        if a >= 2.0:
            raise DomainError("factor density requires alpha < 2")
        if not (0.0 <= r < 1.0) or abs(r - (1.0 - 1.0 / a)) <= CLASS_TOL:
            raise DomainError(
                f"factor density requires rho in [0, 1) away from 1 - 1/alpha, "
                f"got rho = {r}")
        if self.kev is None:
            object.__setattr__(self, "kev", KappaEvaluator(self.law))


def _transform_angle(law: StableLaw) -> float:
    """(1 - rho) * alpha * pi, the phase entering the transform denominators."""
    return (1.0 - law.rho) * law.alpha * math.pi


def laplace_tau(el: ExitLaw, t: float) -> float:
    """E[exp(-t * tau)] for the exit time tau started at el.start.

    Computed at the rescaled argument t * start^alpha of the start-1
    transform.  Spectrally positive laws with alpha > 1 use the subordinator
    identity exp(-t^(1/alpha) * start) directly.
    """
    if t < 0 or not math.isfinite(t):
        raise DomainError(f"t must be finite and >= 0, got {t}")
    if t == 0.0:
        return 1.0
    law = el.law
    a = law.alpha
    u = t * el.start ** a
    if _is_spectrally_positive_exit(law):
        return math.exp(-u ** (1.0 / a))

    ang = _transform_angle(law)
    s, c = math.sin(ang), math.cos(ang)
    rate = u ** (1.0 / a)
    kev = el.kev

    # substitute x = v / rate so the exponential mass sits at v = O(1)
    # whatever the transform argument is
    def integrand(v):
        v = np.atleast_1d(np.asarray(v, dtype=float))
        x = v / rate
        xa = x ** a
        kv = np.array([kappa(kev, float(xi)) for xi in x])
        return np.exp(-v) * v ** (a - 1.0) * kv / (xa * xa + 2.0 * c * xa + 1.0)

    res = integrate_semi_infinite(integrand, el.qcfg, zero_exponent=a - 1.0)
    return s / math.pi * rate ** (-a) * res.value


def density_regime(law: StableLaw) -> str:
    """Name of the density formula serving this law.

    "spectrally_positive" (subordinator closed form), "subordinator_mix"
    (alpha > 1 mixture), "cauchy" (alpha = 1), or "sym23" (symmetric
    2/3-stable series form).  Raises UnsupportedRegimeError otherwise.
    """
    a, r = law.alpha, law.rho
    if _is_spectrally_positive_exit(law):
        return "spectrally_positive"
    if a > 1.0:
        return "subordinator_mix"
    if a == 1.0:
        return "cauchy"
    if abs(a - 2.0 / 3.0) <= CLASS_TOL and abs(r - 0.5) <= CLASS_TOL:
        return "sym23"
    raise UnsupportedRegimeError(
        f"no density formula for alpha = {a}, rho = {r}; supported regimes: "
        "alpha > 1, the Cauchy law, and the symmetric 2/3-stable law")


def density_tau(el: ExitLaw, s: float) -> float:
    """Density of the exit time at s > 0 for the law started at el.start.

    The start-1 density is rescaled algebraically:
    h_y(s) = y^(-alpha) h_1(s * y^(-alpha)).
    """
    if s <= 0 or not math.isfinite(s):
        raise DomainError(f"s must be finite and > 0, got {s}")
    law = el.law
    a = law.alpha
    scale = el.start ** (-a)
    s1 = s * scale
    regime = density_regime(law)

    if regime == "spectrally_positive":
        return scale * subordinator_density(1.0 / a, 1.0, s1)
    if regime == "cauchy":
        return scale * kappa(el.kev, s1) / (math.pi * (s1 * s1 + 1.0))
    if regime == "sym23":
        return scale * density_tau_sym23(s1, el.qcfg)

    # alpha > 1: mixture of subordinator densities against the ladder kernel,
    # in the variable y = x^alpha (removes the endpoint factor) rescaled by
    # y = s1 * z so the subordinator peak sits at z = O(1) for every s1
    ang = _transform_angle(law)
    sn, cs = math.sin(ang), math.cos(ang)
    kev = el.kev
    g = 1.0 / a

    def integrand(z):
        z = np.atleast_1d(np.asarray(z, dtype=float))
        out = np.empty_like(z)
        for i, zi in enumerate(z):
            eta = subordinator_density(g, 1.0, 1.0 / zi)
            if eta == 0.0:
                out[i] = 0.0
                continue
            y = s1 * zi
            out[i] = (eta / zi * kappa(kev, y ** g)
                      / (y * y + 2.0 * cs * y + 1.0))
        return out

    res = integrate_semi_infinite(integrand, el.qcfg, zero_exponent=g)
    return scale * sn / (math.pi * a) * res.value


def m_density(md: MDensity, x: float) -> float:
    """Density of the factor variable at x > 0.

    m(x) = sin((1-rho) alpha pi) / (pi alpha) * kappa(1, x^(1/alpha))
           / (x^2 + 2 x cos((1-rho) alpha pi) + 1).
    """
    if x <= 0 or not math.isfinite(x):
        raise DomainError(f"x must be finite and > 0, got {x}")
    law = md.law
    a = law.alpha
    ang = _transform_angle(law)
    kv = kappa(md.kev, x ** (1.0 / a))
    return (math.sin(ang) / (math.pi * a) * kv
            / (x * x + 2.0 * x * math.cos(ang) + 1.0))


def _require_doney(law: StableLaw, op: str) -> None:
    if classify(law) is not Classification.DONEY_C11_DUAL:
        raise UnsupportedRegimeError(
            f"{op} requires the rational-trigonometric ladder class "
            f"(alpha in [1/2, 1), 1 - rho = 1/alpha - 1); "
            f"got alpha = {law.alpha}, rho = {law.rho}")


def laplace_tau_doney(law: StableLaw, t: float) -> float:
    """Closed-form E[exp(-t tau)] on the rational-trigonometric ladder class.

    sin(alpha pi)/pi * Gamma(alpha) * Gamma(1 - alpha, t^(1/alpha))
    * exp(t^(1/alpha)); equals 1 at t = 0 by the reflection formula.
    """
    _require_doney(law, "laplace_tau_doney")
    if t < 0 or not math.isfinite(t):
        raise DomainError(f"t must be finite and >= 0, got {t}")
    a = law.alpha
    z = t ** (1.0 / a)
    return math.sin(a * math.pi) / math.pi * math.gamma(a) * gamma_upper_scaled(1.0 - a, z)


def stieltjes_tau_doney(law: StableLaw, x: float,
                        qcfg: QuadratureConfig | None = None) -> float:
    """E[1 / (x + tau)] on the rational-trigonometric ladder class.

    The two exponentially growing terms of the textbook integrand are fused
    analytically into exp(z) Gamma(1-alpha, z) / (x Gamma(1-alpha)) with
    z = (u/x)^(1/alpha), which is positive and cancellation-free.
    """
    _require_doney(law, "stieltjes_tau_doney")
    if x <= 0 or not math.isfinite(x):
        raise DomainError(f"x must be finite and > 0, got {x}")
    a = law.alpha
    g1a = math.gamma(1.0 - a)

    def integrand(u):
        u = np.atleast_1d(np.asarray(u, dtype=float))
        out = np.empty_like(u)
        for i, ui in enumerate(u):
            z = (ui / x) ** (1.0 / a)
            out[i] = math.exp(-ui) * gamma_upper_scaled(1.0 - a, z)
        return out

    res = integrate_semi_infinite(integrand, qcfg or QuadratureConfig())
    return res.value / (x * g1a)


# ---------------------------------------------------------------------------
# symmetric 2/3-stable density
# ---------------------------------------------------------------------------

# rising factorials (2/3)_{2j+1} for the large-argument correction series
_ASYM_COEFFS = []
_acc = 2.0 / 3.0  # (2/3)_1
for _j in range(14):
    _ASYM_COEFFS.append(_acc)
    _acc *= (2.0 / 3.0 + 2 * _j + 1) * (2.0 / 3.0 + 2 * _j + 2)
_ASYM_COEFFS = np.array(_ASYM_COEFFS)


def _bracket23_direct(t: np.ndarray) -> np.ndarray:
    """sin(t^{3/2}) + sqrt(t) 1F2(1; 2/3, 7/6; -t^3/4) / Gamma(4/3), t <= 8."""
    z = -0.25 * t ** 3
    term = np.ones_like(t)
    total = np.ones_like(t)
    for k in range(200):
        # a = 1 makes the (a+k) factor cancel the k! increment
        term = term * z / ((2.0 / 3.0 + k) * (7.0 / 6.0 + k))
        total += term
        if np.all(np.abs(term) <= 1e-17 * np.maximum(np.abs(total), 1.0)):
            break
    return np.sin(t ** 1.5) + np.sqrt(t) * total / _GAMMA_4_3


def _bracket23_asym(t: np.ndarray) -> np.ndarray:
    """Large-t form: sqrt(3) sin(t^{3/2} + pi/6) plus an algebraic tail."""
    corr = np.zeros_like(t)
    for j, cj in enumerate(_ASYM_COEFFS):
        add = cj * t ** (-2.5 - 3.0 * j)
        if j % 2 == 0:
            corr -= add
        else:
            corr += add
        if np.all(np.abs(add) < 1e-17):
            break
    return math.sqrt(3.0) * np.sin(t ** 1.5 + math.pi / 6.0) + corr / (3.0 * _GAMMA_4_3)


def _bracket23(t) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty_like(t)
    lo = t <= _BRACKET_SWITCH
    if np.any(lo):
        out[lo] = _bracket23_direct(t[lo])
    if np.any(~lo):
        out[~lo] = _bracket23_asym(t[~lo])
    return out


def _bracket23_algebraic_tail(t: np.ndarray) -> np.ndarray:
    """Only the algebraic part of the large-t form (no oscillation)."""
    corr = np.zeros_like(t)
    for j, cj in enumerate(_ASYM_COEFFS):
        add = cj * t ** (-2.5 - 3.0 * j)
        if j % 2 == 0:
            corr -= add
        else:
            corr += add
    return corr / (3.0 * _GAMMA_4_3)


def density_tau_sym23(x: float, qcfg: QuadratureConfig | None = None) -> float:
    """Density at x > 0 of the exit time of the symmetric 2/3-stable process
    started at 1.

    (1/pi) int_0^inf e^(-t x) [sin(t^{3/2})
        + t^{1/2} 1F2(1; 2/3, 7/6; -t^3/4) / Gamma(4/3)] dt.
    The integrand oscillates like sin(t^{3/2}); beyond the exactly-summable
    region the oscillatory part is integrated on sign-aligned panels
    (zeros at t = (k pi)^{2/3}) with epsilon-algorithm acceleration of the
    alternating panel sums, and the smooth algebraic remainder separately.
    """
    if x <= 0 or not math.isfinite(x):
        raise DomainError(f"x must be finite and > 0, got {x}")
    cfg = qcfg or QuadratureConfig()

    # panels up to the series/asymptotic switch carry the exact bracket
    k_switch = int(_BRACKET_SWITCH ** 1.5 / math.pi)  # last full panel under 8
    t_start = (k_switch * math.pi) ** (2.0 / 3.0)

    # truncate where the damping has extinguished the integrand so the
    # boundary layer at large x stays visible to the coarse panels; the
    # direct bracket series carries ~1e-10 cancellation noise near the
    # switch point, which floors the attainable quadrature accuracy
    t_head = min(t_start, 45.0 / x)
    head = integrate_finite(lambda t: np.exp(-x * t) * _bracket23(t),
                            0.0, t_head,
                            QuadratureConfig(rel_tol=1e-9, abs_tol=1e-11,
                                             max_subdivisions=cfg.max_subdivisions))
    total = head.value
    if t_head < t_start:
        return total / math.pi

    if math.exp(-x * t_start) > 1e-18 * max(abs(total), 1e-12):
        # smooth algebraic remainder of the bracket on (t_start, inf)
        def alg(v):
            v = np.atleast_1d(np.asarray(v, dtype=float))
            t = t_start + v
            return np.exp(-x * t) * _bracket23_algebraic_tail(t)

        total += integrate_semi_infinite(alg, QuadratureConfig(rel_tol=1e-11)).value

        # oscillatory part on sign-aligned panels, accelerated
        nodes, weights = gauss_legendre(24)
        partial = []
        run = 0.0
        k = k_switch
        sqrt3 = math.sqrt(3.0)
        for _ in range(600):
            a = (k * math.pi) ** (2.0 / 3.0)
            b = ((k + 1) * math.pi) ** (2.0 / 3.0)
            mid, half = 0.5 * (a + b), 0.5 * (b - a)
            t = mid + half * nodes
            p = half * float(np.dot(weights, np.exp(-x * t)
                                    * sqrt3 * np.sin(t ** 1.5 + math.pi / 6.0)))
            run += p
            partial.append(run)
            k += 1
            if abs(p) < 1e-17 * max(abs(total + run), 1e-12):
                total += run
                break
            if len(partial) >= 24 and len(partial) % 8 == 0:
                est, stab = _wynn_epsilon(partial[-72:])
                if stab <= 1e-13 * max(abs(total + est), 1e-12):
                    total += est
                    break
        else:
            est, _ = _wynn_epsilon(partial[-72:])
            total += est

    return total / math.pi
