"""
Gap bound for horoconvex domains of hyperbolic space.

A horoconvex domain of diameter D contains a geodesic ball of radius at least
D/4 once D >= 4 ln 2, and its gap is bounded through the cubic gap bound of
that ball. Domains themselves are never represented: the certificate only
consumes the dimension and the diameter.
"""

from dataclasses import dataclass, field, asdict
from typing import Dict, Any, List, Optional
import logging
import math

from config.config import SolverConfig
from .bounds import gap_constant
from .eigensolve import BallSpec, gap

logger = logging.getLogger('Horoconvex')

LN2 = math.log(2.0)
DIAMETER_THRESHOLD = 4 * LN2

ASSUMPTIONS = (
    'Benguria-Linde: the second eigenvalue of the domain is at most that of the '
    'geodesic ball with the same first eigenvalue',
    'inradius comparison: the domain contains a geodesic ball of radius D/4 '
    'when D >= 4 ln 2',
    'reference_numeric_gap is the computed gap of the ball of radius D/4 and '
    'is informational, not a bound for the domain',
)


@dataclass(frozen=True)
class HoroconvexInput:
    """Dimension and diameter of a horoconvex domain."""
    n: int
    D: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"dimension must be an integer >= 2, got {self.n}")
        if not self.D > 0:
            raise ValueError("diameter must be positive")


@dataclass(frozen=True)
class GapCertificate:
    """Certified upper bound on the fundamental gap of a horoconvex domain."""
    n: int
    D: float
    C_n: float
    certified_bound: float
    ball_radius_floor: float
    reference_numeric_gap: Optional[float]
    reference_certified: bool = False
    assumptions: List[str] = field(default_factory=lambda: list(ASSUMPTIONS))

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def bm_excess(r: float) -> float:
    """
    Upper bound ln((1 + sqrt(tau))^2 / (1 + tau)), tau = tanh(r/2), on the
    difference of circumradius and inradius of a horoconvex domain of
    inradius r.

    Rounds to ln 2 in double precision above r of about 18; use bm_deficit
    to compare against ln 2.

    Raises:
        ValueError: If r is not positive
    """
    if not r > 0:
        raise ValueError(f"inradius must be positive, got {r}")
    root = math.sqrt(math.tanh(r / 2))
    return 2 * math.log1p(root) - math.log1p(root * root)


def bm_deficit(r: float) -> float:
    """
    ln 2 - bm_excess(r), evaluated as log1p(q^2) with
    q = (1 - sqrt(tau)) / (1 + sqrt(tau)) = (1 - tau) / (1 + sqrt(tau))^2.

    Raises:
        ValueError: If r is not positive
    """
    if not r > 0:
        raise ValueError(f"inradius must be positive, got {r}")
    decay = math.exp(-r)
    one_minus_tau = 2 * decay / (1 + decay)
    root = math.sqrt(math.tanh(r / 2))
    q = one_minus_tau / (1 + root) ** 2
    return math.log1p(q * q)


def inradius_floor(D: float) -> float:
    """
    Lower bound D/2 - ln 2 on the inradius of a horoconvex domain of diameter D.

    Not clipped: non-positive values for D <= 2 ln 2 are returned as-is.
    """
    return D / 2 - LN2


def horoconvex_constant(n: int) -> float:
    """64 C(n), the coefficient of D^-3 in the horoconvex gap bound."""
    return 64 * gap_constant(n)


def certify_gap_bound(spec: HoroconvexInput, config: Optional[SolverConfig] = None,
                      compute_reference: bool = True) -> GapCertificate:
    """
    Certify gap(domain) <= 64 C(n) / D^3 for a horoconvex domain.

    Args:
        spec: Dimension and diameter
        config: Solver settings for the reference gap
        compute_reference: Solve for the gap of the ball of radius D/4

    Returns:
        GapCertificate

    Raises:
        ValueError: If D < 4 ln 2
        SolverError: If the reference gap cannot be computed
    """
    if spec.D < DIAMETER_THRESHOLD:
        raise ValueError(
            f"diameter {spec.D} is below the threshold 4 ln 2 = {DIAMETER_THRESHOLD:.6f}")

    C_n = gap_constant(spec.n)
    radius = spec.D / 4
    bound = horoconvex_constant(spec.n) / spec.D ** 3

    reference = None
    if compute_reference:
        _, _, reference = gap(BallSpec(spec.n, 1.0, radius), config)
        if reference > bound:
            logger.warning(f"Reference gap {reference} exceeds the certified bound {bound} "
                           f"for n={spec.n}, D={spec.D}")

    return GapCertificate(
        n=spec.n,
        D=spec.D,
        C_n=C_n,
        certified_bound=bound,
        ball_radius_floor=radius,
        reference_numeric_gap=reference,
    )
