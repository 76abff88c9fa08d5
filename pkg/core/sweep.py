"""
Radius sweeps: one row of solver values and bounds per radius.
"""

from concurrent.futures import ProcessPoolExecutor
from typing import Dict, Any, List, Optional
import logging

from config.config import SolverConfig
from .bounds import lambda1_bounds, lambda2_bounds, gap_reports
from .eigensolve import BallSpec, ball_spectrum

logger = logging.getLogger('SweepProcessor')

SOLVER_COLUMNS = [
    'n', 'k', 'r',
    'lambda1', 'lambda1_error',
    'lambda2', 'lambda2_error',
    'gap', 'gap_error',
    'r2_gap', 'r3_gap',
]


def sweep_columns(n: int) -> List[str]:
    """
    Column names of a sweep table. Every bound contributes a value column and
    a '<name>_valid' column, so the set is the same for all dimensions.
    """
    columns = list(SOLVER_COLUMNS)
    for report in lambda1_bounds(n, 1.0) + lambda2_bounds(n, 1.0) + gap_reports(n, 1.0):
        columns.extend([report.name, f"{report.name}_valid"])
    return columns


def sweep_row(n: int, r: float, k: float = 1.0,
              config: Optional[SolverConfig] = None) -> Dict[str, Any]:
    """
    Solver values and every bound for the ball of radius r.

    Raises:
        SolverError: If either eigenvalue fails to converge
    """
    first, second = ball_spectrum(BallSpec(n, k, r), config)
    gap = second.eigenvalue - first.eigenvalue
    row: Dict[str, Any] = {
        'n': n,
        'k': k,
        'r': r,
        'lambda1': first.eigenvalue,
        'lambda1_error': first.error_estimate,
        'lambda2': second.eigenvalue,
        'lambda2_error': second.error_estimate,
        'gap': gap,
        'gap_error': first.error_estimate + second.error_estimate,
        'r2_gap': r ** 2 * gap,
        'r3_gap': r ** 3 * gap,
    }
    for report in lambda1_bounds(n, r, k) + lambda2_bounds(n, r, k) + gap_reports(n, r, k):
        row[report.name] = report.value
        row[f"{report.name}_valid"] = report.valid
    return row


def _row_task(args: tuple) -> Dict[str, Any]:
    return sweep_row(*args)


class SweepProcessor:
    """Computes sweep rows, optionally in a process pool."""

    def __init__(self, config: Optional[SolverConfig] = None, workers: int = 1):
        if workers < 1:
            raise ValueError("workers must be at least 1")
        self.config = config or SolverConfig()
        self.config.validate()
        self.workers = workers

    def run(self, n: int, radii: List[float], k: float = 1.0) -> List[Dict[str, Any]]:
        """
        Rows in the order of radii.

        Raises:
            SolverError: From the first radius that fails
        """
        tasks = [(n, r, k, self.config) for r in radii]
        logger.info(f"Sweeping n={n} over {len(radii)} radii with {self.workers} worker(s)")

        if self.workers == 1 or len(tasks) == 1:
            return [_row_task(task) for task in tasks]

        # map preserves input order
        with ProcessPoolExecutor(max_workers=self.workers) as executor:
            return list(executor.map(_row_task, tasks))
