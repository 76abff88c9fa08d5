from .specfun import QuadratureResult, csch_sq, log_sinh, bessel_first_zero, integral_t2_csch2
from .eigensolve import (
    BallSpec,
    RadialMode,
    PotentialSpec,
    EigenResult,
    SolverError,
    first_eigenvalue,
    fd_eigenvalue,
    gap
)
from .bounds import BoundReport, lambda1_bounds, lambda2_bounds, gap_bounds
from .horoconvex import HoroconvexInput, GapCertificate, certify_gap_bound
from .verify import CheckResult, run_all
from .utils import GridUtils

__all__ = [
    'QuadratureResult',
    'csch_sq',
    'log_sinh',
    'bessel_first_zero',
    'integral_t2_csch2',
    'BallSpec',
    'RadialMode',
    'PotentialSpec',
    'EigenResult',
    'SolverError',
    'first_eigenvalue',
    'fd_eigenvalue',
    'gap',
    'BoundReport',
    'lambda1_bounds',
    'lambda2_bounds',
    'gap_bounds',
    'HoroconvexInput',
    'GapCertificate',
    'certify_gap_bound',
    'CheckResult',
    'run_all',
    'GridUtils'
]
