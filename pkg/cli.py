import logging
import os
import sqlite3
import sys
from pathlib import Path
from typing import Any, Optional, Sequence, TextIO

from dotenv import load_dotenv

from config.config import ConfigManager
from core.bounds import lambda1_bounds, lambda2_bounds, gap_reports
from core.eigensolve import BallSpec, SolverError, ball_spectrum
from core.file_manager import FileManager
from core.horoconvex import HoroconvexInput, certify_gap_bound
from core.sweep import SweepProcessor, sweep_columns
from core.verify import VerificationRunner, default_grid
from interface.command_parser import CommandParser, ParsedCommand
from interface.report_formatter import ReportFormatter
from storage.repository import ResultRepository

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_SOLVER = 3
EXIT_IO = 4

DEFAULT_CONFIG_DIR = Path(__file__).resolve().parent / "config"

logger = logging.getLogger('hypergap')


class Session:
    """Configuration, formatting and output shared by the command handlers."""

    def __init__(self, config: ConfigManager, stdout: TextIO):
        self.config = config
        self.formatter = ReportFormatter(config.output)
        self.files = FileManager()
        self.stdout = stdout

    def emit(self, content: str, path: Optional[str] = None) -> None:
        written = self.files.emit(content, path, self.stdout)
        if written:
            logger.info(f"Wrote {written}")

    def archive(self, command: ParsedCommand, payload: Any, passed: Optional[bool] = None) -> None:
        if not command.store_path:
            return
        repository = ResultRepository(command.store_path)
        parameters = dict(command.params, **command.solver_overrides)
        run_id = repository.store_run(command.command, parameters, payload, passed)
        logger.info(f"Archived {command.command} run as #{run_id}")


def cmd_eig(command: ParsedCommand, session: Session) -> int:
    """Print lambda1, lambda2, the gap and every bound for one ball."""
    params = command.params
    spec = BallSpec(params['n'], params['k'], params['r'])
    first, second = ball_spectrum(spec, session.config.solver)
    bounds = (lambda1_bounds(spec.n, spec.r, spec.k) + lambda2_bounds(spec.n, spec.r, spec.k)
              + gap_reports(spec.n, spec.r, spec.k))

    payload = session.formatter.eig_payload(first, second, bounds)
    session.emit(session.formatter.format_eig(payload, command.output_format))
    session.archive(command, payload)
    return EXIT_OK


def cmd_sweep(command: ParsedCommand, session: Session) -> int:
    """Write one table row per radius."""
    params = command.params
    processor = SweepProcessor(session.config.solver, params['workers'])
    rows = processor.run(params['n'], params['radii'], params['k'])

    table = session.formatter.format_sweep(sweep_columns(params['n']), rows,
                                           command.output_format)
    session.emit(table, command.output_path)
    session.archive(command, rows)
    return EXIT_OK


def cmd_horoconvex(command: ParsedCommand, session: Session) -> int:
    """Emit the gap certificate for a horoconvex domain of diameter D."""
    params = command.params
    certificate = certify_gap_bound(HoroconvexInput(params['n'], params['D']),
                                    session.config.solver,
                                    compute_reference=not params['no_reference'])

    session.emit(session.formatter.format_certificate(certificate, command.output_format))
    session.archive(command, certificate.to_dict())
    return EXIT_OK


def cmd_verify(command: ParsedCommand, session: Session) -> int:
    """Run the property checks; exit 1 if any fails."""
    params = command.params
    verify = session.config.verify
    grid = default_grid(verify)
    if params.get('grid_n') or params.get('grid_r'):
        dimensions = params.get('grid_n') or verify.dimensions
        radii = params.get('grid_r') or verify.radii
        grid = [BallSpec(n, 1.0, r) for n in dimensions for r in radii]

    runner = VerificationRunner(session.config.solver, verify)
    results = runner.run(grid, params.get('checks'))
    passed = all(result.passed for result in results)

    session.emit(session.formatter.format_checks(results, command.output_format),
                 command.output_path)
    session.archive(command, [result.to_dict() for result in results], passed)

    for result in results:
        if not result.passed:
            logger.error(f"Check {result.check_name} failed at {result.worst_case} "
                         f"(margin {result.margin!r})")
    return EXIT_OK if passed else EXIT_VERIFY_FAILED


def cmd_history(command: ParsedCommand, session: Session) -> int:
    """List, show or delete archived runs."""
    params = command.params
    repository = ResultRepository(command.store_path)

    if params.get('delete') is not None:
        if not repository.delete_run(params['delete']):
            raise ValueError(f"Run #{params['delete']} not found")
        session.emit(f"Deleted run #{params['delete']}")
        return EXIT_OK

    if params.get('show') is not None:
        run = repository.get_run(params['show'])
        if run is None:
            raise ValueError(f"Run #{params['show']} not found")
        session.emit(session.formatter.format_history([run], 'json'))
        return EXIT_OK

    runs = repository.list_runs(params.get('filter_command'), params['limit'])
    session.emit(session.formatter.format_history(runs, command.output_format))
    return EXIT_OK


HANDLERS = {
    'eig': cmd_eig,
    'sweep': cmd_sweep,
    'horoconvex': cmd_horoconvex,
    'verify': cmd_verify,
    'history': cmd_history,
}


def main(argv: Optional[Sequence[str]] = None,
         stdout: Optional[TextIO] = None,
         stderr: Optional[TextIO] = None) -> int:
    """
    Main entry point.

    Returns:
        Exit code: 0 ok, 1 verification failure, 2 argument error,
        3 solver failure, 4 I/O failure
    """
    argv = sys.argv[1:] if argv is None else list(argv)
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr

    load_dotenv()
    logging.basicConfig(
        level=logging.WARNING,
        format='%(asctime)s %(name)s %(levelname)s: %(message)s',
        stream=stderr
    )

    try:
        config = ConfigManager(config_dir=os.getenv('HYPERGAP_CONFIG_DIR', DEFAULT_CONFIG_DIR))
        parser = CommandParser(config)
        if not argv:
            stderr.write(parser.format_help() + "\n")
            return EXIT_USAGE
        command = parser.parse_command(argv)
        if command.verbose:
            logging.getLogger().setLevel(logging.DEBUG)
        config.update_solver(**command.solver_overrides)
    except ValueError as e:
        stderr.write(f"Error: {e}\n")
        return EXIT_USAGE

    session = Session(config, stdout)
    try:
        return HANDLERS[command.command](command, session)
    except SolverError as e:
        where = '' if e.last_t is None else f" at t={e.last_t!r}"
        stderr.write(f"Solver failure ({e.stage}{where}): {e}\n")
        return EXIT_SOLVER
    except ValueError as e:
        stderr.write(f"Error: {e}\n")
        return EXIT_USAGE
    except (OSError, sqlite3.Error) as e:
        stderr.write(f"I/O error: {e}\n")
        return EXIT_IO
    finally:
        session.files.cleanup_all()


if __name__ == "__main__":
    sys.exit(main())
