"""
Hyperbolic helper functions, Bessel first zeros and the quadratures the
eigenvalue bounds need.

Every function here is pure and safe to call from several threads.
"""

from dataclasses import dataclass
from typing import Union
import logging
import math

import numpy as np
from scipy import integrate, optimize, special

logger = logging.getLogger('Specfun')

ArrayLike = Union[float, np.ndarray]

# Below this argument sinh is evaluated directly, above it the exponential form.
CSCH_SWITCHOVER = 20.0

TAIL_TOLERANCE = 1e-14
SCAN_STEP = 0.1
SCAN_WIDTH = 10.0


@dataclass(frozen=True)
class QuadratureResult:
    """Value of a definite integral with its absolute error estimate."""
    value: float
    abs_error_estimate: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError(f"Quadrature value is not finite: {self.value}")
        if not self.abs_error_estimate >= 0:
            raise ValueError("abs_error_estimate must be non-negative")


def csch_sq(t: ArrayLike) -> ArrayLike:
    """
    Evaluate 1/sinh^2(t) without overflow.

    Args:
        t: Positive argument (scalar or array)

    Returns:
        1/sinh^2(t), same shape as the input. Underflows to 0.0 once
        4*exp(-2t) leaves the double range (t above roughly 372).

    Raises:
        ValueError: If any argument is not positive
    """
    if isinstance(t, (int, float)):
        if not t > 0:
            raise ValueError("csch_sq requires t > 0")
        if t < CSCH_SWITCHOVER:
            return 1.0 / math.sinh(t) ** 2
        decay = math.exp(-2.0 * t)
        return 4.0 * decay / (1.0 - decay) ** 2

    arr = np.asarray(t, dtype=float)
    if np.any(~(arr > 0)):
        raise ValueError("csch_sq requires t > 0")

    small = arr < CSCH_SWITCHOVER
    with np.errstate(over='ignore', under='ignore'):
        direct = 1.0 / np.sinh(np.where(small, arr, 1.0)) ** 2
        decay = np.exp(-2.0 * np.where(small, CSCH_SWITCHOVER, arr))
        asymptotic = 4.0 * decay / (1.0 - decay) ** 2
    result = np.where(small, direct, asymptotic)

    if np.ndim(t) == 0:
        return float(result)
    return result


def log_sinh(t: ArrayLike) -> ArrayLike:
    """
    Evaluate log(sinh t) for t > 0 without overflow.

    Raises:
        ValueError: If any argument is not positive
    """
    arr = np.asarray(t, dtype=float)
    if np.any(~(arr > 0)):
        raise ValueError("log_sinh requires t > 0")

    small = arr < 1.0
    with np.errstate(over='ignore'):
        direct = np.log(np.sinh(np.where(small, arr, 1.0)))
    large = arr + np.log1p(-np.exp(-2.0 * np.where(small, 1.0, arr))) - math.log(2.0)
    result = np.where(small, direct, large)

    if np.ndim(t) == 0:
        return float(result)
    return result


def bessel_first_zero(p: float) -> float:
    """
    First positive zero j_{p,1} of the Bessel function J_p.

    The zero is bracketed by a sign scan of step 0.1 on [p, p + 10] and then
    refined with Brent's method.

    Args:
        p: Order, p >= 0

    Returns:
        j_{p,1}

    Raises:
        ValueError: If p is negative or no sign change is found
    """
    if p < 0:
        raise ValueError(f"Bessel order must be non-negative, got {p}")

    grid = p + np.arange(0.0, SCAN_WIDTH + SCAN_STEP / 2, SCAN_STEP)
    if p == 0:
        grid = grid[1:]
    values = special.jv(p, grid)
    # J_p is positive just above the origin, so the first sign change is j_{p,1}
    changes = np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)[0]
    if changes.size == 0:
        raise ValueError(f"No zero of J_{p} found on [{p}, {p + SCAN_WIDTH}]")

    i = int(changes[0])
    return float(optimize.brentq(lambda x: special.jv(p, x), grid[i], grid[i + 1],
                                 xtol=1e-15, rtol=4 * np.finfo(float).eps))


def _t2_csch2(t: float) -> float:
    if t == 0.0:
        return 1.0
    if t < CSCH_SWITCHOVER:
        return (t / math.sinh(t)) ** 2
    return t * t * csch_sq(t)


def _tail_bound(cutoff: float) -> float:
    """Bound on the integral of t^2/sinh^2 t over [cutoff, inf)."""
    decay = math.exp(-2.0 * cutoff)
    polynomial = cutoff * cutoff / 2 + cutoff / 2 + 0.25
    return 4.0 * decay * polynomial / (1.0 - decay) ** 2


def truncation_point(start: float = 1.0) -> float:
    """Smallest integer cutoff >= start whose tail bound is below 1e-14."""
    cutoff = max(1.0, math.ceil(start))
    while _tail_bound(cutoff) >= TAIL_TOLERANCE:
        cutoff += 1.0
    return cutoff


def integral_t2_csch2(a: float, b: float) -> QuadratureResult:
    """
    Adaptive quadrature of the integral of t^2/sinh^2(t) over [a, b].

    The integrand is continued by 1 at t = 0. An infinite upper limit is
    truncated where the analytic tail bound drops below 1e-14 and the bound is
    added to the error estimate.

    Args:
        a: Lower limit, a >= 0
        b: Upper limit, b >= a, may be math.inf

    Returns:
        QuadratureResult
    """
    if a < 0:
        raise ValueError(f"Lower limit must be non-negative, got {a}")
    if b < a:
        raise ValueError(f"Upper limit {b} is below lower limit {a}")
    if a == b:
        return QuadratureResult(0.0, 0.0)

    tail = 0.0
    upper = b
    cutoff = truncation_point(a)
    if b > cutoff:
        upper = cutoff
        tail = _tail_bound(cutoff)

    value, abserr = integrate.quad(_t2_csch2, a, upper, epsabs=1e-15, epsrel=1e-13, limit=200)
    return QuadratureResult(value, abserr + tail)


def sine_mode_integral(r: float) -> QuadratureResult:
    """
    Integral of v^2/sinh^2(t) over [0, r] for v = sqrt(2/r) sin(pi t/r).

    This is the potential term of the Rayleigh quotient of the free sine mode.
    The integrand is continued by 2 pi^2 / r^3 at t = 0.
    """
    if not r > 0:
        raise ValueError(f"Radius must be positive, got {r}")

    k = math.pi / r

    def integrand(t: float) -> float:
        if t == 0.0:
            return 2.0 / r * k * k
        if t < CSCH_SWITCHOVER:
            return 2.0 / r * (math.sin(k * t) / math.sinh(t)) ** 2
        return 2.0 / r * math.sin(k * t) ** 2 * csch_sq(t)

    value, abserr = integrate.quad(integrand, 0.0, r, epsabs=1e-15, epsrel=1e-13, limit=200)
    return QuadratureResult(value, abserr)
