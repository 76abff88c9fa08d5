"""
Property checks of the solvers against the closed-form bounds and the
known limits, run over parameter grids.

Every check reports the point with the smallest margin. A check passes
exactly when that margin is positive. Failures, including solver errors,
are recorded in the report and never raised.
"""

from dataclasses import dataclass, asdict
from typing import Dict, Any, List, Optional, Sequence, Tuple, Callable
import json
import logging
import math

from config.config import SolverConfig, VerifyConfig
from .bounds import (
    lambda1_bounds,
    lambda2_bounds,
    lambda1_alpha_upper,
    rayleigh_upper,
    gap_bounds,
    gap_constant,
    sandwich,
)
from .eigensolve import (
    BallSpec,
    RadialMode,
    EigenResult,
    SolverError,
    first_eigenvalue,
    alpha_first_eigenvalue,
    fd_eigenvalue,
    log_derivative_profile,
    origin_slope,
)
from .horoconvex import HoroconvexInput, bm_deficit, certify_gap_bound
from .specfun import bessel_first_zero, integral_t2_csch2
from .utils import GridUtils

logger = logging.getLogger('Verify')

QUADRATURE_TOLERANCE = 1e-10
BM_SHARPNESS_RADIUS = 20.0
BM_SHARPNESS_TOLERANCE = 1e-6


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one property check over its grid."""
    check_name: str
    passed: bool
    worst_case: str
    margin: float
    points: int = 0
    error: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        if not math.isfinite(self.margin):
            data['margin'] = None
        return data


class _Tally:
    """Running minimum of the margins of one check."""

    def __init__(self, name: str):
        self.name = name
        self.margin = math.inf
        self.worst_case = ''
        self.points = 0
        self.error: Optional[str] = None

    def add(self, margin: float, point: str) -> None:
        self.points += 1
        if math.isnan(margin):
            margin = -math.inf
        if margin < self.margin:
            self.margin, self.worst_case = margin, point

    def fail(self, point: str, error: Exception) -> None:
        logger.warning(f"{self.name} failed at {point}: {error}")
        self.points += 1
        if self.error is None:
            self.error = f"{point}: {type(error).__name__}: {error}"
        if -math.inf < self.margin or not self.worst_case:
            self.margin, self.worst_case = -math.inf, point

    def result(self) -> CheckResult:
        if self.points == 0:
            return CheckResult(self.name, False, 'no grid points', -math.inf, 0,
                               'empty grid')
        return CheckResult(self.name, self.margin > 0, self.worst_case, self.margin,
                           self.points, self.error)


class VerificationRunner:
    """
    Runs the property checks with one solver configuration.

    Eigenvalues are cached per (n, k, r, l) for the lifetime of the runner,
    so checks sharing points solve each mode once.
    """

    CHECK_NAMES = (
        'sandwich_lambda1', 'sandwich_lambda2', 'gap_sandwich', 'n3_exactness',
        'scaling_invariance', 'oracle_equivalence', 'small_ball_lambda1',
        'small_ball_gap', 'gap_decay', 'log_concavity', 'bm_excess_bound',
        'quadrature_constant', 'alpha_chain', 'horoconvex_reference',
    )

    def __init__(self, config: Optional[SolverConfig] = None,
                 verify_config: Optional[VerifyConfig] = None):
        self.config = config or SolverConfig()
        self.config.validate()
        self.verify = verify_config or VerifyConfig()
        self.multiplier = self.verify.error_multiplier
        self._cache: Dict[Tuple[int, float, float, int], EigenResult] = {}

        self.checks: Dict[str, Callable[[List[BallSpec]], CheckResult]] = {
            name: getattr(self, f"check_{name}") for name in self.CHECK_NAMES
        }

    def eigen(self, n: int, r: float, l: int, k: float = 1.0) -> EigenResult:
        key = (n, k, r, l)
        if key not in self._cache:
            self._cache[key] = first_eigenvalue(BallSpec(n, k, r), RadialMode(l), self.config)
        return self._cache[key]

    def run(self, grid: List[BallSpec], checks: Optional[Sequence[str]] = None) -> List[CheckResult]:
        """
        Run the selected checks (all by default) in a fixed order.

        Raises:
            ValueError: If the grid is empty or a check name is unknown
        """
        if not grid:
            raise ValueError("verification grid must not be empty")
        names = list(self.checks) if checks is None else list(checks)
        unknown = [name for name in names if name not in self.checks]
        if unknown:
            raise ValueError(f"Unknown checks: {', '.join(unknown)}")

        results = []
        for name in names:
            logger.info(f"Running {name}")
            result = self.checks[name](grid)
            logger.info(f"{name}: passed={result.passed} margin={result.margin!r} "
                        f"at {result.worst_case}")
            results.append(result)
        return results

    # -- bounds against the solver -------------------------------------------

    def _sandwich(self, name: str, grid: List[BallSpec], l: int, bound_fn) -> CheckResult:
        tally = _Tally(name)
        for spec in grid:
            point = GridUtils.format_point(n=spec.n, k=spec.k, r=spec.r)
            try:
                result = self.eigen(spec.n, spec.r, l, spec.k)
            except (SolverError, ValueError) as e:
                tally.fail(point, e)
                continue
            margin, bound = sandwich(bound_fn(spec.n, spec.r, spec.k), result.eigenvalue,
                                     result.error_estimate, self.multiplier,
                                     self.verify.exactness_tolerance)
            tally.add(margin, f"{point}, bound={bound}")
        return tally.result()

    def check_sandwich_lambda1(self, grid: List[BallSpec]) -> CheckResult:
        return self._sandwich('sandwich_lambda1', grid, 0, lambda1_bounds)

    def check_sandwich_lambda2(self, grid: List[BallSpec]) -> CheckResult:
        return self._sandwich('sandwich_lambda2', grid, 1, lambda2_bounds)

    def check_gap_sandwich(self, grid: List[BallSpec]) -> CheckResult:
        tally = _Tally('gap_sandwich')
        for spec in grid:
            point = GridUtils.format_point(n=spec.n, k=spec.k, r=spec.r)
            try:
                first = self.eigen(spec.n, spec.r, 0, spec.k)
                second = self.eigen(spec.n, spec.r, 1, spec.k)
            except (SolverError, ValueError) as e:
                tally.fail(point, e)
                continue
            value = second.eigenvalue - first.eigenvalue
            slack = self.multiplier * (first.error_estimate + second.error_estimate)
            lower, upper, _ = gap_bounds(spec.n, spec.r, spec.k)
            tally.add(value - lower - slack, f"{point}, bound=gap_lower_ball")
            tally.add(upper - value - slack, f"{point}, bound=gap_upper_cubic")
        return tally.result()

    def check_n3_exactness(self, grid: List[BallSpec]) -> CheckResult:
        tally = _Tally('n3_exactness')
        specs = [spec for spec in grid if spec.n == 3]
        if not specs:
            specs = [BallSpec(3, 1.0, r) for r in sorted({spec.r for spec in grid})]
        for spec in specs:
            point = GridUtils.format_point(n=3, k=spec.k, r=spec.r)
            try:
                value = self.eigen(3, spec.r, 0, spec.k).eigenvalue
            except (SolverError, ValueError) as e:
                tally.fail(point, e)
                continue
            exact = spec.k ** 2 + math.pi ** 2 / spec.r ** 2
            tally.add(self.verify.exactness_tolerance * exact - abs(value - exact), point)
        return tally.result()

    def check_scaling_invariance(self, grid: List[BallSpec]) -> CheckResult:
        tally = _Tally('scaling_invariance')
        for n, r in self.verify.scaling_points:
            for c in self.verify.scaling_factors:
                point = GridUtils.format_point(n=n, r=r, c=c)
                try:
                    base = self.eigen(n, r, 0).eigenvalue
                    scaled = self.eigen(n, c * r, 0, 1.0 / c).eigenvalue
                except (SolverError, ValueError) as e:
                    tally.fail(point, e)
                    continue
                deviation = GridUtils.relative_error(scaled, base / c ** 2)
                tally.add(self.verify.exactness_tolerance - deviation, point)
        return tally.result()

    def check_oracle_equivalence(self, grid: List[BallSpec]) -> CheckResult:
        tally = _Tally('oracle_equivalence')
        for spec in grid:
            for l in (0, 1):
                point = GridUtils.format_point(n=spec.n, k=spec.k, r=spec.r, l=l)
                try:
                    shot = self.eigen(spec.n, spec.r, l, spec.k)
                    oracle = fd_eigenvalue(spec, RadialMode(l), self.config.fd_mesh_size)
                except (SolverError, ValueError) as e:
                    tally.fail(point, e)
                    continue
                deviation = GridUtils.relative_error(shot.eigenvalue, oracle.eigenvalue)
                tally.add(self.verify.oracle_tolerance - deviation, point)
        return tally.result()

    # -- limits ---------------------------------------------------------------

    def check_small_ball_lambda1(self, grid: List[BallSpec]) -> CheckResult:
        tally = _Tally('small_ball_lambda1')
        r = self.verify.small_ball_radius
        for n in self.verify.small_ball_dimensions:
            point = GridUtils.format_point(n=n, r=r)
            try:
                value = self.eigen(n, r, 0).eigenvalue
            except (SolverError, ValueError) as e:
                tally.fail(point, e)
                continue
            target = bessel_first_zero(n / 2 - 1) ** 2
            tally.add(self.verify.small_ball_tolerance - abs(r * r * value - target), point)
        return tally.result()

    def check_small_ball_gap(self, grid: List[BallSpec]) -> CheckResult:
        tally = _Tally('small_ball_gap')
        r = self.verify.small_ball_radius
        for n in self.verify.small_ball_dimensions:
            point = GridUtils.format_point(n=n, r=r)
            try:
                value = self.eigen(n, r, 1).eigenvalue - self.eigen(n, r, 0).eigenvalue
            except (SolverError, ValueError) as e:
                tally.fail(point, e)
                continue
            target = bessel_first_zero(n / 2) ** 2 - bessel_first_zero(n / 2 - 1) ** 2
            tally.add(self.verify.small_ball_gap_tolerance - abs(r * r * value - target), point)
        return tally.result()

    def check_gap_decay(self, grid: List[BallSpec]) -> CheckResult:
        tally = _Tally('gap_decay')
        for n in self.verify.decay_dimensions:
            C_n = gap_constant(n)
            previous: Optional[Tuple[float, float, float]] = None
            for R in self.verify.decay_radii:
                point = GridUtils.format_point(n=n, R=R)
                try:
                    first = self.eigen(n, R, 0)
                    second = self.eigen(n, R, 1)
                except (SolverError, ValueError) as e:
                    tally.fail(point, e)
                    previous = None
                    continue
                value = second.eigenvalue - first.eigenvalue
                error = self.multiplier * (first.error_estimate + second.error_estimate)
                lower, _, _ = gap_bounds(n, R)

                tally.add(value - lower - error, f"{point}, gap above (n-1)/sinh^2 R")
                tally.add(C_n - R ** 3 * (value + error), f"{point}, R^3 gap below C(n)")
                if previous is not None:
                    prev_R, prev_scaled, prev_error = previous
                    tally.add(prev_scaled - R ** 2 * value - prev_error - R ** 2 * error,
                              f"{point}, R^2 gap below its value at R={prev_R!r}")
                previous = (R, R ** 2 * value, R ** 2 * error)
        return tally.result()

    def check_log_concavity(self, grid: List[BallSpec]) -> CheckResult:
        tally = _Tally('log_concavity')
        for n in self.verify.log_concavity_dimensions:
            for r in self.verify.log_concavity_radii:
                point = GridUtils.format_point(n=n, r=r)
                try:
                    result = self.eigen(n, r, 0)
                    profile = log_derivative_profile(result, self.config)
                    if len(profile) < 2:
                        raise ValueError(f"need two interior samples, got {len(profile)}")
                    slope = origin_slope(profile)
                except (SolverError, ValueError) as e:
                    tally.fail(point, e)
                    continue

                drops = [(a - b, t) for (t, a), (_, b) in zip(profile, profile[1:])]
                drop, where = min(drops)
                tally.add(drop, f"{point}, phi decreasing at t={where!r}")

                expected = -result.eigenvalue / n
                deviation = GridUtils.relative_error(slope, expected)
                tally.add(self.verify.slope_tolerance - deviation, f"{point}, phi'(0)")
                logger.debug(f"{point}: phi from {profile[0][1]!r} to {profile[-1][1]!r}")
        return tally.result()

    def check_alpha_chain(self, grid: List[BallSpec]) -> CheckResult:
        """Eigenvalue <= Rayleigh quotient <= closed-form bound for the alpha family."""
        tally = _Tally('alpha_chain')
        tol = self.verify.exactness_tolerance
        for n in self.verify.chain_dimensions:
            for alpha in (max(n - 3, 0), n + 1):
                for r in self.verify.chain_radii:
                    point = GridUtils.format_point(n=n, alpha=alpha, r=r)
                    try:
                        result = alpha_first_eigenvalue(n, alpha, r, self.config)
                    except (SolverError, ValueError) as e:
                        tally.fail(point, e)
                        continue
                    quotient = rayleigh_upper(n, alpha, r)
                    closed = lambda1_alpha_upper(n, alpha, r)
                    if alpha == 0:
                        tally.add(tol * closed - abs(closed - quotient), f"{point}, quotient = bound")
                        tally.add(tol * quotient - abs(quotient - result.eigenvalue),
                                  f"{point}, eigenvalue = quotient")
                    else:
                        tally.add(closed - quotient, f"{point}, quotient below bound")
                        tally.add(quotient - result.eigenvalue
                                  - self.multiplier * result.error_estimate,
                                  f"{point}, eigenvalue below quotient")
        return tally.result()

    # -- constants and the horoconvex bound -------------------------------------

    def check_bm_excess_bound(self, grid: List[BallSpec]) -> CheckResult:
        tally = _Tally('bm_excess_bound')
        count = self.verify.bm_points
        radii = [self.verify.bm_radius_max * i / count for i in range(1, count + 1)]
        deficits = [bm_deficit(r) for r in radii]

        for r, deficit in zip(radii, deficits):
            tally.add(deficit, GridUtils.format_point(r=r) + ", excess below ln 2")
        for r, a, b in zip(radii[1:], deficits, deficits[1:]):
            tally.add(a - b, GridUtils.format_point(r=r) + ", excess increasing")
        sharp = BM_SHARPNESS_TOLERANCE - bm_deficit(BM_SHARPNESS_RADIUS)
        tally.add(sharp, GridUtils.format_point(r=BM_SHARPNESS_RADIUS) + ", excess near ln 2")
        return tally.result()

    def check_quadrature_constant(self, grid: List[BallSpec]) -> CheckResult:
        tally = _Tally('quadrature_constant')
        result = integral_t2_csch2(0.0, math.inf)
        tally.add(QUADRATURE_TOLERANCE - abs(result.value - math.pi ** 2 / 6),
                  'integral of t^2/sinh^2 t over [0, inf)')
        return tally.result()

    def check_horoconvex_reference(self, grid: List[BallSpec]) -> CheckResult:
        tally = _Tally('horoconvex_reference')
        for n in self.verify.decay_dimensions:
            for D in self.verify.horoconvex_diameters:
                point = GridUtils.format_point(n=n, D=D)
                try:
                    certificate = certify_gap_bound(HoroconvexInput(n, D), self.config)
                except (SolverError, ValueError) as e:
                    tally.fail(point, e)
                    continue
                tally.add(certificate.certified_bound - certificate.reference_numeric_gap, point)
        return tally.result()


def default_grid(verify_config: Optional[VerifyConfig] = None) -> List[BallSpec]:
    """Cartesian product of the configured dimensions and radii at k = 1."""
    verify_config = verify_config or VerifyConfig()
    return [BallSpec(n, 1.0, r) for n in verify_config.dimensions for r in verify_config.radii]


def run_all(grid: List[BallSpec], config: Optional[SolverConfig] = None,
            verify_config: Optional[VerifyConfig] = None,
            checks: Optional[Sequence[str]] = None) -> List[CheckResult]:
    """
    Run every property check.

    Args:
        grid: Balls for the sandwich, exactness and oracle checks
        config: Solver settings
        verify_config: Grids and tolerances of the remaining checks
        checks: Subset of check names to run, all by default

    Returns:
        List[CheckResult] in a fixed order

    Raises:
        ValueError: If the grid is empty, a check is unknown or the
            solver configuration is invalid
    """
    return VerificationRunner(config, verify_config).run(grid, checks)


def report_to_json(results: List[CheckResult]) -> str:
    """Serialize check results as a JSON array; non-finite margins become null."""
    return json.dumps([result.to_dict() for result in results], indent=2)
