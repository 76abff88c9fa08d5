"""
Closed-form bounds for the first two Dirichlet eigenvalues of geodesic balls
in hyperbolic space and for their gap.

All bounds are written for curvature -1 and transferred to curvature -k^2
by the scaling identity lambda(n, k, r) = k^2 lambda(n, 1, k r).
"""

from dataclasses import dataclass, asdict
from typing import Dict, Any, List, Tuple, Optional
import math

from .specfun import csch_sq, sine_mode_integral

PI2 = math.pi ** 2
PI4 = math.pi ** 4

KINDS = ('lower', 'upper', 'exact')


@dataclass(frozen=True)
class BoundReport:
    """One bound on an eigenvalue or on the gap."""
    name: str
    kind: str
    value: float
    valid: bool
    reference: str
    strict: bool = True

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"Unknown bound kind: {self.kind}")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _check(n: int, r: float, k: float) -> None:
    if n < 2:
        raise ValueError(f"Dimension must be at least 2, got {n}")
    if not r > 0:
        raise ValueError("radius must be positive")
    if not k > 0:
        raise ValueError("curvature parameter k must be positive")


def _base(n: int, r: float) -> float:
    return (n - 1) ** 2 / 4 + PI2 / r ** 2


def lambda1_bounds(n: int, r: float, k: float = 1.0) -> List[BoundReport]:
    """
    All bounds on the first eigenvalue of the ball of radius r.

    Bounds outside their dimension range are still emitted with valid=False
    so that tables keep a fixed set of columns.

    Args:
        n: Dimension, n >= 2
        r: Geodesic radius
        k: Curvature parameter (sectional curvature -k^2)

    Returns:
        List[BoundReport]: schrodinger lower, savo lower, gage upper,
            rayleigh upper, upper via lambda2, exact value
    """
    _check(n, r, k)
    s = k * r
    scale = k * k
    base = _base(n, s)
    csch2 = csch_sq(s)

    return [
        BoundReport('lambda1_lower_schrodinger', 'lower',
                    scale * (base + (n - 1) * (n - 3) / 4 * csch2),
                    n > 3, 'Schrodinger comparison with the boundary potential'),
        BoundReport('lambda1_lower_savo', 'lower',
                    scale * (base - 4 * PI2 / ((n - 1) * s ** 3)),
                    True, 'Savo uniform lower bound'),
        BoundReport('lambda1_upper_gage', 'upper',
                    scale * (0.25 + PI2 / s ** 2 - csch2 / 4),
                    n == 2, 'Gage upper bound for the hyperbolic plane'),
        BoundReport('lambda1_upper_rayleigh', 'upper',
                    scale * lambda1_alpha_upper(n, max(n - 3, 0), s),
                    n >= 3, 'Rayleigh quotient of the free sine mode',
                    strict=n != 3),
        BoundReport('lambda1_upper_via_lambda2', 'upper',
                    scale * lambda1_alpha_upper(n, n + 1, s),
                    True, 'lambda1 < lambda2 <= Rayleigh bound of the l = 1 mode'),
        BoundReport('lambda1_exact_n3', 'exact',
                    scale * (1 + PI2 / s ** 2),
                    n == 3, 'closed form in dimension three', strict=False),
    ]


def lambda2_bounds(n: int, r: float, k: float = 1.0) -> List[BoundReport]:
    """
    Bounds on the second eigenvalue, the first eigenvalue of the l = 1 mode.
    """
    _check(n, r, k)
    s = k * r
    scale = k * k
    base = _base(n, s)

    return [
        BoundReport('lambda2_lower_schrodinger', 'lower',
                    scale * (base + (n * n - 1) / 4 * csch_sq(s)),
                    True, 'Schrodinger comparison with the boundary potential'),
        BoundReport('lambda2_upper_rayleigh', 'upper',
                    scale * lambda1_alpha_upper(n, n + 1, s),
                    True, 'Rayleigh quotient of the free sine mode'),
    ]


def lambda1_alpha_upper(n: int, alpha: float, r: float) -> float:
    """
    Closed-form upper bound for the first eigenvalue of
    -u'' + (n-1)/4 (n-1 + alpha/sinh^2 t) u = lambda u on [0, r].

    Raises:
        ValueError: If alpha is negative
    """
    if alpha < 0:
        raise ValueError(f"alpha must be non-negative, got {alpha}")
    _check(n, r, 1.0)
    return _base(n, r) + (n - 1) * alpha * PI4 / (12 * r ** 3)


def rayleigh_upper(n: int, alpha: float, r: float) -> float:
    """
    Rayleigh quotient of v = sqrt(2/r) sin(pi t/r) for the alpha potential.

    Tighter than lambda1_alpha_upper, which replaces sin|x| by |x| and extends
    the integral to infinity.
    """
    if alpha < 0:
        raise ValueError(f"alpha must be non-negative, got {alpha}")
    _check(n, r, 1.0)
    if alpha == 0:
        return _base(n, r)
    return _base(n, r) + (n - 1) * alpha / 4 * sine_mode_integral(r).value


def gap_constant(n: int) -> float:
    """C(n) = pi^4 (n^2 - 1)/12 + 4 pi^2/(n - 1), the cubic gap coefficient."""
    if n < 2:
        raise ValueError(f"Dimension must be at least 2, got {n}")
    return PI4 * (n * n - 1) / 12 + 4 * PI2 / (n - 1)


def gap_bounds(n: int, R: float, k: float = 1.0) -> Tuple[float, float, float]:
    """
    Lower and upper bounds on the fundamental gap of the ball B_R.

    The upper bound is the difference of the l = 1 Rayleigh bound and the Savo
    lower bound on the first eigenvalue.

    Returns:
        (lower, upper, C_n)
    """
    _check(n, R, k)
    s = k * R
    C_n = gap_constant(n)
    lower = k * k * (n - 1) * csch_sq(s)
    upper = k * k * C_n / s ** 3
    return lower, upper, C_n


def gap_reports(n: int, R: float, k: float = 1.0) -> List[BoundReport]:
    """gap_bounds as BoundReport rows for tables."""
    lower, upper, _ = gap_bounds(n, R, k)
    return [
        BoundReport('gap_lower_ball', 'lower', lower, True,
                    'difference of the mode potentials at the boundary'),
        BoundReport('gap_upper_cubic', 'upper', upper, True,
                    'second-eigenvalue Rayleigh bound minus Savo lower bound'),
    ]


def bracket(reports: List[BoundReport]) -> Tuple[Optional[float], Optional[float]]:
    """Tightest valid (lower, upper) pair, None where no valid bound exists."""
    lowers = [b.value for b in reports if b.valid and b.kind in ('lower', 'exact')]
    uppers = [b.value for b in reports if b.valid and b.kind in ('upper', 'exact')]
    return (max(lowers) if lowers else None, min(uppers) if uppers else None)


def sandwich(reports: List[BoundReport], value: float, error_estimate: float,
             multiplier: float = 10.0, exact_tolerance: float = 1e-8) -> Tuple[float, str]:
    """
    Smallest margin by which value sits inside every valid bound.

    Strict bounds must clear value by more than multiplier * error_estimate.
    Equality-type bounds (strict=False) must agree to exact_tolerance relative.

    Returns:
        (margin, name of the bound with that margin)
    """
    worst = (math.inf, '')
    for bound in reports:
        if not bound.valid:
            continue
        if not bound.strict:
            margin = exact_tolerance * abs(value) - abs(value - bound.value)
        elif bound.kind == 'lower':
            margin = value - bound.value - multiplier * error_estimate
        else:
            margin = bound.value - value - multiplier * error_estimate
        worst = min(worst, (margin, bound.name))
    return worst
