"""
First Dirichlet eigenvalue of each separated radial mode of a geodesic ball
in the space form of curvature -k^2.

The radial equation of mode l,

    u'' + (n-1) k coth(k t) u' - l(l+n-2) k^2/sinh^2(k t) u + lambda u = 0,

is scaled to k = 1, written in Schrodinger form -v'' + V v = lambda v with
u = sinh(t)^((1-n)/2) v, and solved by Prufer shooting from a Frobenius start
near the origin. A finite-difference discretization of the weighted radial
form serves as an independent check.
"""

from dataclasses import dataclass, asdict
from typing import Dict, Any, List, Tuple, Optional, Callable
import logging
import math

import numpy as np
from scipy import integrate, optimize
from scipy.linalg import eigh_tridiagonal, eigvalsh_tridiagonal

from config.config import SolverConfig
from .bounds import lambda1_bounds, lambda2_bounds, rayleigh_upper, bracket
from .specfun import csch_sq, log_sinh

logger = logging.getLogger('Eigensolve')

METHODS = ('shooting', 'finite_difference')

# Radii below this multiple of t0_factor are rejected.
DEGENERATE_FACTOR = 1e3

BRACKET_WIDENINGS = 10
BRACKET_PAD = 1e-6


class SolverError(RuntimeError):
    """Raised when shooting cannot integrate, bracket or converge."""

    def __init__(self, message: str, stage: str, last_t: Optional[float] = None):
        super().__init__(message)
        self.stage = stage
        self.last_t = last_t


@dataclass(frozen=True)
class BallSpec:
    """Geodesic ball of radius r in dimension n, sectional curvature -k^2."""
    n: int
    k: float = 1.0
    r: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"dimension must be an integer >= 2, got {self.n}")
        if not self.k > 0:
            raise ValueError("curvature parameter k must be positive")
        if not self.r > 0:
            raise ValueError("radius must be positive")


@dataclass(frozen=True)
class RadialMode:
    """Angular index l of the separated radial equation."""
    l: int = 0

    def __post_init__(self):
        if int(self.l) != self.l or self.l < 0:
            raise ValueError(f"angular index must be a non-negative integer, got {self.l}")

    def angular_term(self, n: int) -> int:
        return self.l * (self.l + n - 2)


@dataclass(frozen=True)
class PotentialSpec:
    """V(t) = constant_part + csch2_coefficient / sinh^2(t)."""
    constant_part: float
    csch2_coefficient: float

    @property
    def exponent(self) -> float:
        """Leading power nu of the solution regular at the origin."""
        if self.csch2_coefficient < -0.25:
            raise ValueError("csch^2 coefficient below -1/4 has no regular solution")
        return 0.5 + math.sqrt(0.25 + self.csch2_coefficient)


@dataclass(frozen=True)
class EigenResult:
    """Converged eigenvalue with its eigenfunction samples and diagnostics."""
    eigenvalue: float
    error_estimate: float
    oscillation_count: int
    samples: Tuple[Tuple[float, float], ...]
    method: str
    spec: Optional[BallSpec] = None
    mode: Optional[RadialMode] = None
    alpha: Optional[float] = None
    evaluations: int = 0
    bracket: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"Unknown method: {self.method}")

    def to_dict(self, include_samples: bool = False) -> Dict[str, Any]:
        data = asdict(self)
        if not include_samples:
            data.pop('samples')
        return data


# ---------------------------------------------------------------------------
# Problem set-up
# ---------------------------------------------------------------------------

def normalize(spec: BallSpec) -> Tuple[BallSpec, float]:
    """
    Map the ball to curvature -1.

    Returns:
        ((n, 1, k r), k^2) with lambda(original) = k^2 * lambda(normalized)
    """
    return BallSpec(spec.n, 1.0, spec.k * spec.r), spec.k ** 2


def schrodinger_potential(n: int, l: int) -> PotentialSpec:
    """Potential of the Schrodinger form of radial mode l in dimension n."""
    if n < 2 or l < 0:
        raise ValueError(f"Invalid dimension/mode: n={n}, l={l}")
    return PotentialSpec((n - 1) ** 2 / 4, (n - 1) * (n - 3) / 4 + l * (l + n - 2))


def alpha_potential(n: int, alpha: float) -> PotentialSpec:
    """Potential (n-1)^2/4 + (n-1) alpha/(4 sinh^2 t) of the alpha family."""
    if alpha < 0:
        raise ValueError(f"alpha must be non-negative, got {alpha}")
    return PotentialSpec((n - 1) ** 2 / 4, (n - 1) * alpha / 4)


def frobenius_init(n: int, l: int, lam: float, t0: float) -> Tuple[float, float]:
    """
    Regular solution of the radial equation near the origin.

    Uses u(t) = t^l (1 + c2 t^2) with c2 = -[lambda + l(2n+l-3)/3] / (2n+4l).

    Returns:
        (u(t0), u'(t0))
    """
    c2 = -(lam + l * (2 * n + l - 3) / 3) / (2 * n + 4 * l)
    u0 = t0 ** l * (1 + c2 * t0 ** 2)
    du0 = (l * t0 ** (l - 1) if l else 0.0) + c2 * (l + 2) * t0 ** (l + 1)
    return u0, du0


def schrodinger_frobenius_init(potential: PotentialSpec, lam: float,
                               t0: float) -> Tuple[float, float]:
    """
    Regular solution of -v'' + V v = lambda v near the origin.

    Uses v(t) = t^nu (1 + d t^2) with d = (C0 - lambda - c/3) / (4 nu + 2).

    Returns:
        (v(t0), v'(t0))
    """
    nu = potential.exponent
    c = potential.csch2_coefficient
    d = (potential.constant_part - lam - c / 3) / (4 * nu + 2)
    v0 = t0 ** nu * (1 + d * t0 ** 2)
    dv0 = nu * t0 ** (nu - 1) + d * (nu + 2) * t0 ** (nu + 1)
    return v0, dv0


def _start_offset(r: float, config: SolverConfig) -> float:
    if r < DEGENERATE_FACTOR * config.t0_factor:
        raise ValueError(
            f"radius {r} is degenerate: below {DEGENERATE_FACTOR * config.t0_factor} "
            f"the series start covers the whole interval")
    return config.t0_factor * min(1.0, r)


# Initial data are (theta, log rho) of the Schrodinger solution at t0.
Initializer = Callable[[float, float], Tuple[float, float]]


def _mode_initializer(n: int, l: int) -> Initializer:
    """Transplant the radial series through v = sinh(t)^((n-1)/2) u."""
    a = (n - 1) / 2

    def init(lam: float, t0: float) -> Tuple[float, float]:
        u0, du0 = frobenius_init(n, l, lam, t0)
        s = math.sinh(t0)
        # v and v' divided by the common factor sinh(t0)^(a-1)
        y = s * u0
        x = a * math.cosh(t0) * u0 + s * du0
        return math.atan2(y, x), (a - 1) * math.log(s) + math.log(math.hypot(x, y))

    return init


def _potential_initializer(potential: PotentialSpec) -> Initializer:
    nu = potential.exponent

    def init(lam: float, t0: float) -> Tuple[float, float]:
        v0, dv0 = schrodinger_frobenius_init(potential, lam, t0)
        # divided by t0^(nu-1)
        y = v0 / t0 ** (nu - 1)
        x = dv0 / t0 ** (nu - 1)
        return math.atan2(y, x), (nu - 1) * math.log(t0) + math.log(math.hypot(x, y))

    return init


# ---------------------------------------------------------------------------
# Prufer integration
# ---------------------------------------------------------------------------

def _integrate(potential: PotentialSpec, lam: float, y0: List[float], t0: float,
               t_end: float, config: SolverConfig,
               t_eval: Optional[np.ndarray] = None) -> Any:
    """
    Integrate the Prufer system v = rho sin(theta), v' = rho cos(theta).

    With one initial value only theta is integrated, with two also log(rho).
    """
    c0 = potential.constant_part
    c = potential.csch2_coefficient

    if len(y0) == 1:
        def rhs(t, y):
            q = lam - c0 - c * csch_sq(t)
            s = math.sin(y[0])
            co = math.cos(y[0])
            return [co * co + q * s * s]
        atol = [config.ode_tolerance * t0]
    else:
        def rhs(t, y):
            q = lam - c0 - c * csch_sq(t)
            s = math.sin(y[0])
            co = math.cos(y[0])
            return [co * co + q * s * s, (1.0 - q) * s * co]
        atol = [config.ode_tolerance * t0, config.ode_tolerance]

    sol = integrate.solve_ivp(rhs, (t0, t_end), y0, method='DOP853',
                              rtol=config.ode_tolerance, atol=atol, t_eval=t_eval)
    if sol.status < 0:
        last_t = float(sol.t[-1]) if sol.t.size else t0
        raise SolverError(f"Prufer integration failed at t={last_t}: {sol.message}",
                          stage='integrate', last_t=last_t)
    return sol


def _end_angle(potential: PotentialSpec, init: Initializer, r: float, lam: float,
               config: SolverConfig) -> float:
    t0 = _start_offset(r, config)
    theta0, _ = init(lam, t0)
    sol = _integrate(potential, lam, [theta0], t0, r, config)
    return float(sol.y[0, -1])


def prufer_shoot(spec: BallSpec, mode: RadialMode, lam: float,
                 config: Optional[SolverConfig] = None) -> Tuple[float, int]:
    """
    Shoot radial mode l from the origin to r and return the Prufer angle.

    Args:
        spec: Ball with k = 1 (see normalize)
        mode: Radial mode
        lam: Trial eigenvalue
        config: Solver settings

    Returns:
        (theta(r), floor(theta(r)/pi)); theta(r) increases with lam and the
        first eigenvalue of the mode is where theta(r) = pi

    Raises:
        ValueError: If the ball is not normalized or the radius is degenerate
        SolverError: If the integration fails
    """
    config = config or SolverConfig()
    if spec.k != 1.0:
        raise ValueError("prufer_shoot expects a normalized ball (k = 1)")
    potential = schrodinger_potential(spec.n, mode.l)
    theta = _end_angle(potential, _mode_initializer(spec.n, mode.l), spec.r, lam, config)
    return theta, int(math.floor(theta / math.pi))


def _fallback_upper(n: int, r: float) -> float:
    return (n - 1) ** 2 / 4 + 4 * math.pi ** 2 / r ** 2 + 100.0


def _find_root(potential: PotentialSpec, init: Initializer, n: int, r: float,
               seed: Tuple[Optional[float], Optional[float]],
               config: SolverConfig, abs_tol: float) -> Tuple[float, int, Tuple[float, float]]:
    """Locate theta(r) = pi; returns (lambda, shots, bracket)."""
    evaluations = 0

    def residual(lam: float) -> float:
        nonlocal evaluations
        evaluations += 1
        return _end_angle(potential, init, r, lam, config) - math.pi

    lo, hi = seed
    if lo is not None:
        lo = lo - BRACKET_PAD * abs(lo) - abs_tol
    if hi is not None:
        hi = hi + BRACKET_PAD * abs(hi) + abs_tol

    if lo is None or residual(lo) >= 0:
        logger.debug(f"Lower seed {lo} rejected, falling back to 0")
        lo = 0.0
        if residual(lo) >= 0:
            raise SolverError("theta(r) exceeds pi at lambda = 0", stage='bracket')

    if hi is None or residual(hi) <= 0:
        logger.debug(f"Upper seed {hi} rejected, widening from the fallback bracket")
        hi = _fallback_upper(n, r)
        for _ in range(BRACKET_WIDENINGS):
            if residual(hi) > 0:
                break
            hi *= 2
        else:
            raise SolverError(f"No sign change of theta(r) - pi on [{lo}, {hi}]",
                              stage='bracket')

    root, info = optimize.brentq(residual, lo, hi, xtol=abs_tol,
                                 rtol=max(config.lambda_rel_tol, 4 * np.finfo(float).eps),
                                 maxiter=config.max_bisection_steps,
                                 full_output=True, disp=False)
    if not info.converged:
        raise SolverError(f"No convergence in {config.max_bisection_steps} steps: {info.flag}",
                          stage='converge')
    return float(root), evaluations, (float(lo), float(hi))


def _sample(potential: PotentialSpec, init: Initializer, r: float, lam: float,
            weight_power: float, origin_value: float,
            config: SolverConfig) -> Tuple[List[Tuple[float, float]], int]:
    """
    Eigenfunction samples on a uniform mesh of [0, r] and interior sign changes.

    The Schrodinger solution v is divided by sinh(t)^weight_power.
    """
    t0 = _start_offset(r, config)
    mesh = np.linspace(0.0, r, config.sample_count)
    theta0, log_rho0 = init(lam, t0)
    sol = _integrate(potential, lam, [theta0, log_rho0], t0, r, config, t_eval=mesh[1:])

    theta, log_rho = sol.y
    log_weight = weight_power * log_sinh(mesh[1:]) if weight_power else 0.0
    values = np.sin(theta) * np.exp(log_rho - log_weight)

    samples = [(0.0, origin_value)] + [(float(t), float(u)) for t, u in zip(mesh[1:], values)]
    return samples, _sign_changes(values[:-1])


def _sign_changes(values: np.ndarray) -> int:
    signs = np.sign(values)
    signs = signs[signs != 0]
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


# ---------------------------------------------------------------------------
# Public solvers
# ---------------------------------------------------------------------------

def first_eigenvalue(spec: BallSpec, mode: RadialMode,
                     config: Optional[SolverConfig] = None) -> EigenResult:
    """
    First Dirichlet eigenvalue of radial mode l of the ball by Prufer shooting.

    Mode l = 0 gives lambda_1 of the ball and mode l = 1 gives lambda_2.

    Args:
        spec: Ball
        mode: Radial mode
        config: Solver settings

    Returns:
        EigenResult with method 'shooting'

    Raises:
        ValueError: For a degenerate radius or invalid configuration
        SolverError: If bracketing, integration or convergence fails
    """
    config = config or SolverConfig()
    config.validate()
    norm, scale = normalize(spec)
    n, r, l = norm.n, norm.r, mode.l

    if l == 0:
        seed = bracket(lambda1_bounds(n, r))
    elif l == 1:
        seed = bracket(lambda2_bounds(n, r))
    else:
        seed = (None, None)

    potential = schrodinger_potential(n, l)
    init = _mode_initializer(n, l)
    lam, evaluations, (lo, hi) = _find_root(potential, init, n, r, seed, config,
                                            config.lambda_abs_tol / scale)
    samples, crossings = _sample(potential, init, r, lam, (n - 1) / 2,
                                 1.0 if l == 0 else 0.0, config)

    eigenvalue = scale * lam
    logger.debug(f"n={n} l={l} k={spec.k} r={spec.r}: lambda={eigenvalue!r} "
                 f"after {evaluations} shots")
    return EigenResult(
        eigenvalue=eigenvalue,
        error_estimate=config.lambda_rel_tol * eigenvalue + config.lambda_abs_tol,
        oscillation_count=crossings,
        samples=tuple((t / spec.k, u) for t, u in samples),
        method='shooting',
        spec=spec,
        mode=mode,
        evaluations=evaluations,
        bracket=(scale * lo, scale * hi),
    )


def alpha_first_eigenvalue(n: int, alpha: float, r: float,
                           config: Optional[SolverConfig] = None) -> EigenResult:
    """
    First Dirichlet eigenvalue of -v'' + (n-1)/4 (n-1 + alpha/sinh^2 t) v = lambda v
    on [0, r] at curvature -1.

    alpha = n - 3 reproduces the first ball eigenvalue, alpha = n + 1 the second.
    """
    config = config or SolverConfig()
    config.validate()
    spec = BallSpec(n, 1.0, r)
    potential = alpha_potential(n, alpha)
    init = _potential_initializer(potential)
    seed = ((n - 1) ** 2 / 4 + math.pi ** 2 / r ** 2, rayleigh_upper(n, alpha, r))

    lam, evaluations, (lo, hi) = _find_root(potential, init, n, r, seed, config,
                                            config.lambda_abs_tol)
    samples, crossings = _sample(potential, init, r, lam, 0.0, 0.0, config)
    return EigenResult(
        eigenvalue=lam,
        error_estimate=config.lambda_rel_tol * lam + config.lambda_abs_tol,
        oscillation_count=crossings,
        samples=tuple(samples),
        method='shooting',
        spec=spec,
        alpha=alpha,
        evaluations=evaluations,
        bracket=(lo, hi),
    )


def _fd_matrix(n: int, l: int, r: float, mesh_size: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """
    Symmetric tridiagonal form of the staggered discretization of
    (w u')' + (lambda - L/sinh^2 t) w u = 0, w = sinh^(n-1) t.

    Nodes sit at (i - 1/2) h, i = 1..N, with h = r/(N + 1/2) so that the
    Dirichlet node falls on r and no node sits at the origin, where w vanishes.

    Returns:
        (diagonal, off-diagonal, nodes, h)
    """
    h = r / (mesh_size + 0.5)
    index = np.arange(1, mesh_size + 1)
    nodes = (index - 0.5) * h
    faces = index * h

    log_w = (n - 1) * log_sinh(nodes)
    log_wf = (n - 1) * log_sinh(faces)

    right = np.exp(log_wf - log_w) / h ** 2
    left = np.zeros(mesh_size)
    left[1:] = np.exp(log_wf[:-1] - log_w[1:]) / h ** 2
    diagonal = left + right + l * (l + n - 2) * csch_sq(nodes)
    off = -np.exp(log_wf[:-1] - 0.5 * (log_w[:-1] + log_w[1:])) / h ** 2
    return diagonal, off, nodes, h


def fd_eigenvalue(spec: BallSpec, mode: RadialMode, mesh_size: int = 4000) -> EigenResult:
    """
    Finite-difference oracle for the first eigenvalue of a radial mode.

    The smallest eigenvalue of the symmetric tridiagonal matrix is found by
    Sturm-sequence bisection on meshes N and 2N and Richardson-extrapolated.
    """
    if mesh_size < 100:
        raise ValueError(f"mesh_size must be at least 100, got {mesh_size}")
    norm, scale = normalize(spec)
    n, r, l = norm.n, norm.r, mode.l

    d, e, _, h_coarse = _fd_matrix(n, l, r, mesh_size)
    coarse = eigvalsh_tridiagonal(d, e, select='i', select_range=(0, 0),
                                  lapack_driver='stebz')[0]

    d, e, nodes, h_fine = _fd_matrix(n, l, r, 2 * mesh_size)
    values, vectors = eigh_tridiagonal(d, e, select='i', select_range=(0, 0),
                                       lapack_driver='stebz')
    fine = values[0]

    ratio = h_fine ** 2 / (h_coarse ** 2 - h_fine ** 2)
    extrapolated = fine + (fine - coarse) * ratio

    u = vectors[:, 0] * np.exp(-0.5 * (n - 1) * log_sinh(nodes))
    u = u / u[np.argmax(np.abs(u))]
    stride = max(1, len(nodes) // 1000)
    samples = [(float(t) / spec.k, float(v)) for t, v in zip(nodes[::stride], u[::stride])]
    samples.append((spec.r, 0.0))

    return EigenResult(
        eigenvalue=scale * float(extrapolated),
        error_estimate=scale * abs(float(extrapolated - fine)),
        oscillation_count=_sign_changes(u),
        samples=tuple(samples),
        method='finite_difference',
        spec=spec,
        mode=mode,
    )


def ball_spectrum(spec: BallSpec,
                  config: Optional[SolverConfig] = None) -> Tuple[EigenResult, EigenResult]:
    """Shooting results for modes l = 0 and l = 1 with the same settings."""
    config = config or SolverConfig()
    return first_eigenvalue(spec, RadialMode(0), config), first_eigenvalue(spec, RadialMode(1), config)


def gap(spec: BallSpec, config: Optional[SolverConfig] = None) -> Tuple[float, float, float]:
    """
    Fundamental gap lambda_2 - lambda_1 of the ball.

    Returns:
        (lambda1, lambda2, gap)

    Raises:
        SolverError: If the computed gap is not positive
    """
    first, second = ball_spectrum(spec, config)
    value = second.eigenvalue - first.eigenvalue
    if not value > 0:
        raise SolverError(f"Non-positive gap {value} for {spec}", stage='converge')
    return first.eigenvalue, second.eigenvalue, value


# ---------------------------------------------------------------------------
# Log-concavity
# ---------------------------------------------------------------------------

def log_derivative_profile(result: EigenResult,
                           config: Optional[SolverConfig] = None) -> List[Tuple[float, float]]:
    """
    phi = (log u)' of the first eigenfunction at the interior sample points.

    phi solves phi' = -(n-1) coth(t) phi - lambda - phi^2, integrated from the
    series start in normalized coordinates and mapped back by
    phi(t) = k phi_1(k t).

    Raises:
        ValueError: If the result is not an l = 0 eigenfunction with positive
            interior samples
    """
    config = config or SolverConfig()
    if result.spec is None or result.mode is None or result.mode.l != 0:
        raise ValueError("log_derivative_profile needs an l = 0 ball eigenfunction")
    interior = result.samples[1:-1]
    if not interior or any(u <= 0 for _, u in interior):
        raise ValueError("eigenfunction samples must be positive on (0, r)")

    spec = result.spec
    k = spec.k
    n = spec.n
    lam = result.eigenvalue / k ** 2
    points = np.array([t for t, _ in interior]) * k
    t0 = _start_offset(spec.k * spec.r, config)

    u0, du0 = frobenius_init(n, 0, lam, t0)

    def rhs(t, y):
        return [-(n - 1) / math.tanh(t) * y[0] - lam - y[0] * y[0]]

    sol = integrate.solve_ivp(rhs, (t0, points[-1]), [du0 / u0], method='DOP853',
                              rtol=config.ode_tolerance, atol=config.ode_tolerance * t0,
                              t_eval=points)
    if sol.status < 0:
        raise SolverError(f"Riccati integration failed: {sol.message}",
                          stage='integrate', last_t=float(sol.t[-1]))
    return [(float(t) / k, k * float(phi)) for t, phi in zip(sol.t, sol.y[0])]


def origin_slope(profile: List[Tuple[float, float]]) -> float:
    """
    phi'(0) from the first two profile points, using phi(t)/t = phi'(0) + O(t^2).
    """
    if len(profile) < 2:
        raise ValueError("profile needs at least two points")
    (t1, p1), (t2, p2) = profile[0], profile[1]
    f1, f2 = p1 / t1, p2 / t2
    return (f1 * t2 ** 2 - f2 * t1 ** 2) / (t2 ** 2 - t1 ** 2)
