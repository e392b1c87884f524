"""Chi-square distribution function and Gaussian central mass.

The chi-square CDF is the regularized lower incomplete gamma function
P(s/2, x/2), evaluated with the power series below ``a + 1`` and a modified
Lentz continued fraction for the upper tail above it.
"""

from __future__ import annotations

import math

_EPS = 1e-17
_TINY = 1e-300
_MAX_ITER = 1_000_000


def _log_prefactor(a: float, x: float) -> float:
    return a * math.log(x) - x - math.lgamma(a)


def _lower_series(a: float, x: float) -> float:
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if term < total * _EPS:
            break
    else:
        raise ArithmeticError(f"incomplete gamma series did not converge (a={a}, x={x})")
    return total * math.exp(_log_prefactor(a, x))


def _upper_fraction(a: float, x: float) -> float:
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    frac = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        step = d * c
        frac *= step
        if abs(step - 1.0) < 3e-16:
            break
    else:
        raise ArithmeticError(f"incomplete gamma continued fraction did not converge (a={a}, x={x})")
    return math.exp(_log_prefactor(a, x)) * frac


def regularized_lower_gamma(a: float, x: float) -> float:
    """P(a, x) for a > 0; results are clamped to [0, 1]."""
    if a <= 0:
        raise ValueError("shape must be positive")
    if x <= 0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < a + 1.0:
        p = _lower_series(a, x)
    else:
        p = 1.0 - _upper_fraction(a, x)
    return min(max(p, 0.0), 1.0)


def regularized_upper_gamma(a: float, x: float) -> float:
    """Q(a, x) = 1 - P(a, x), computed without cancellation in the tail."""
    if a <= 0:
        raise ValueError("shape must be positive")
    if x <= 0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        q = 1.0 - _lower_series(a, x)
    else:
        q = _upper_fraction(a, x)
    return min(max(q, 0.0), 1.0)


def chi_square_cdf(dof: int, x: float) -> float:
    """Distribution function of the chi-square law with ``dof`` degrees of freedom.

    Returns 0 for ``x < 0``.  For very large ``dof`` (beyond ~1e5) the
    log-space normalisation limits relative accuracy to about ``1e-16 * dof``.
    """
    if dof < 1:
        raise ValueError("degrees of freedom must be >= 1")
    if x < 0:
        return 0.0
    return regularized_lower_gamma(0.5 * dof, 0.5 * x)


def chi_square_sf(dof: int, x: float) -> float:
    """Survival function ``1 - chi_square_cdf(dof, x)``."""
    if dof < 1:
        raise ValueError("degrees of freedom must be >= 1")
    if x < 0:
        return 1.0
    return regularized_upper_gamma(0.5 * dof, 0.5 * x)


def gaussian_central_mass(delta: float) -> float:
    """P(|Z| <= delta) for a standard Gaussian Z."""
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    return math.erf(delta / math.sqrt(2.0))


def gaussian_cdf(x: float) -> float:
    if x >= 0:
        return 0.5 + 0.5 * gaussian_central_mass(x)
    return 0.5 - 0.5 * gaussian_central_mass(-x)
