"""Self-contained regularized incomplete gamma and chi-square tail.

Series expansion below the a+1 crossover, Lentz continued fraction
above; accurate to ~1e-12 relative over the ranges exercised here and
validated against tabulated values in the test suite.
"""

from __future__ import annotations

import math

_MAX_ITER = 10_000
_EPS = 1e-15
_TINY = 1e-300


def _lower_series(a: float, x: float) -> float:
    """P(a, x) by series; requires x < a + 1."""
    term = 1.0 / a
    total = term
    n = a
    for _ in range(_MAX_ITER):
        n += 1.0
        term *= x / n
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    log_prefactor = a * math.log(x) - x - math.lgamma(a)
    return total * math.exp(log_prefactor)


def _upper_continued_fraction(a: float, x: float) -> float:
    """Q(a, x) by modified Lentz continued fraction; requires x >= a + 1."""
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
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
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    log_prefactor = a * math.log(x) - x - math.lgamma(a)
    return math.exp(log_prefactor) * h if log_prefactor > -745 else 0.0


def gammainc_lower(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x)."""
    if a <= 0.0:
        raise ValueError(f"shape parameter must be positive, got {a}")
    if x < 0.0:
        raise ValueError(f"argument must be nonnegative, got {x}")
    if x == 0.0:
        return 0.0
    if x < a + 1.0:
        return min(_lower_series(a, x), 1.0)
    return max(1.0 - _upper_continued_fraction(a, x), 0.0)


def gammainc_upper(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x)."""
    if a <= 0.0:
        raise ValueError(f"shape parameter must be positive, got {a}")
    if x < 0.0:
        raise ValueError(f"argument must be nonnegative, got {x}")
    if x == 0.0:
        return 1.0
    if x < a + 1.0:
        return max(1.0 - _lower_series(a, x), 0.0)
    return min(_upper_continued_fraction(a, x), 1.0)


def chi2_sf(chi2: float, dof: int) -> float:
    """Upper tail P(X >= chi2) of the chi-square distribution."""
    if dof < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {dof}")
    if chi2 < 0.0:
        raise ValueError(f"chi-square statistic must be >= 0, got {chi2}")
    return gammainc_upper(0.5 * dof, 0.5 * chi2)
