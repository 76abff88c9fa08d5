from typing import Dict, Any, List, Optional, Sequence
from dataclasses import dataclass, field
import argparse
import logging

from config.config import ConfigManager
from core.utils import GridUtils, BALL_VALIDATORS, SCALES
from core.verify import VerificationRunner

COMMANDS = ('eig', 'sweep', 'horoconvex', 'verify', 'history')

# Solver settings that can be overridden from the command line.
SOLVER_FLAGS = {
    'tol_rel': 'lambda_rel_tol',
    'tol_abs': 'lambda_abs_tol',
    'tol_ode': 'ode_tolerance',
    'fd_mesh': 'fd_mesh_size',
}


@dataclass
class ParsedCommand:
    """Structured representation of a parsed command."""
    command: str = "eig"
    params: Dict[str, Any] = field(default_factory=dict)
    solver_overrides: Dict[str, Any] = field(default_factory=dict)
    output_format: str = "text"
    output_path: Optional[str] = None
    store_path: Optional[str] = None
    preset_name: Optional[str] = None
    verbose: bool = False


class _RaisingParser(argparse.ArgumentParser):
    """ArgumentParser that raises ValueError instead of exiting on bad input."""

    def error(self, message: str):
        raise ValueError(message)


class CommandParser:
    """Parses and validates command lines for the eigenvalue tools."""

    def __init__(self, config: ConfigManager):
        self.config = config
        self.logger = logging.getLogger('CommandParser')
        self.parser = self._build_parser()

    def _build_parser(self) -> argparse.ArgumentParser:
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument('--verbose', '-v', action='store_true', help='Debug logging')
        common.add_argument('--tol-rel', type=float, dest='tol_rel',
                            help='Relative eigenvalue tolerance')
        common.add_argument('--tol-abs', type=float, dest='tol_abs',
                            help='Absolute eigenvalue tolerance')
        common.add_argument('--tol-ode', type=float, dest='tol_ode',
                            help='ODE integration tolerance')
        common.add_argument('--fd-mesh', type=int, dest='fd_mesh',
                            help='Finite-difference base mesh size')
        common.add_argument('--store', dest='store_path',
                            help='SQLite database archiving the run')

        parser = _RaisingParser(
            prog='hypergap',
            description='Dirichlet eigenvalues and fundamental gaps of hyperbolic geodesic balls')
        subparsers = parser.add_subparsers(dest='command', required=True)

        output = self.config.output
        eig = subparsers.add_parser('eig', parents=[common], help='First two eigenvalues, gap and bounds')
        eig.add_argument('--n', type=int, required=True, help='Dimension (>= 2)')
        eig.add_argument('--r', type=float, required=True, help='Geodesic radius')
        eig.add_argument('--k', type=float, default=1.0, help='Curvature parameter (curvature -k^2)')
        eig.add_argument('--format', choices=['text', 'json'], default=output.default_format)

        sweep = subparsers.add_parser('sweep', parents=[common], help='Eigenvalue table over a radius range')
        sweep.add_argument('--preset', help='Named sweep from presets.yml')
        sweep.add_argument('--n', type=int)
        sweep.add_argument('--r-min', type=float, dest='r_min')
        sweep.add_argument('--r-max', type=float, dest='r_max')
        sweep.add_argument('--points', type=int)
        sweep.add_argument('--scale', choices=list(SCALES))
        sweep.add_argument('--k', type=float, default=1.0)
        sweep.add_argument('--workers', type=int, default=self.config.sweep.workers)
        sweep.add_argument('--format', choices=['csv', 'json'], default='csv')
        sweep.add_argument('--out', dest='output_path', help='Output file (default: stdout)')

        horoconvex = subparsers.add_parser('horoconvex', parents=[common],
                                           help='Certified gap bound for horoconvex domains')
        horoconvex.add_argument('--n', type=int, required=True)
        horoconvex.add_argument('--D', type=float, required=True, help='Diameter')
        horoconvex.add_argument('--format', choices=['text', 'json'], default=output.default_format)
        horoconvex.add_argument('--no-reference', action='store_true', dest='no_reference',
                                help='Skip the numeric gap of the inscribed ball')

        verify = subparsers.add_parser('verify', parents=[common], help='Run the property checks')
        verify.add_argument('--grid-n', type=int, nargs='+', dest='grid_n')
        verify.add_argument('--grid-r', type=float, nargs='+', dest='grid_r')
        verify.add_argument('--checks', nargs='+', help='Subset of checks to run')
        verify.add_argument('--format', choices=['json', 'text'], default='json')
        verify.add_argument('--out', dest='output_path', help='Report file (default: stdout)')

        history = subparsers.add_parser('history', parents=[common], help='List archived runs')
        history.add_argument('--limit', type=int, default=20)
        history.add_argument('--filter', dest='filter_command', choices=list(COMMANDS[:-1]))
        history.add_argument('--show', type=int, help='Print one archived run')
        history.add_argument('--delete', type=int, help='Delete one archived run')
        return parser

    def parse_command(self, argv: Sequence[str]) -> ParsedCommand:
        """
        Parse a command line into structured form.

        Raises:
            ValueError: On unknown flags, missing values or invalid parameters
        """
        args = vars(self.parser.parse_args(list(argv)))
        result = ParsedCommand(command=args.pop('command'))
        result.verbose = args.pop('verbose')
        result.store_path = args.pop('store_path')
        result.output_path = args.pop('output_path', None)
        result.output_format = args.pop('format', None) or (
            'csv' if result.command == 'sweep' else self.config.output.default_format)

        for flag, name in SOLVER_FLAGS.items():
            value = args.pop(flag)
            if value is not None:
                result.solver_overrides[name] = value

        if result.command == 'sweep':
            result.preset_name = args.pop('preset')
            if result.preset_name:
                try:
                    preset = self.config.get_preset(result.preset_name)
                except KeyError:
                    raise ValueError(f"Unknown preset: {result.preset_name}")
                for key in ('n', 'r_min', 'r_max', 'points', 'scale'):
                    if args.get(key) is None and key in preset:
                        args[key] = preset[key]

        result.params = args
        self._validate_command(result)
        return result

    def _validate_command(self, parsed: ParsedCommand) -> None:
        """Validate parsed command for consistency and fill defaults."""
        params = parsed.params
        if parsed.command == 'eig':
            GridUtils.validate_params(params, BALL_VALIDATORS, required=['n', 'r'])

        elif parsed.command == 'sweep':
            params.setdefault('points', None)
            params.setdefault('scale', None)
            if params['points'] is None:
                params['points'] = self.config.sweep.default_points
            if params['scale'] is None:
                params['scale'] = self.config.sweep.default_scale
            GridUtils.validate_params(params, BALL_VALIDATORS, required=['n', 'r_min', 'r_max'])
            # radius_grid checks the range
            params['radii'] = GridUtils.radius_grid(params['r_min'], params['r_max'],
                                                    params['points'], params['scale'])

        elif parsed.command == 'horoconvex':
            GridUtils.validate_params(params, BALL_VALIDATORS, required=['n', 'D'])

        elif parsed.command == 'verify':
            for n in params.get('grid_n') or []:
                GridUtils.validate_params({'n': n}, BALL_VALIDATORS)
            for r in params.get('grid_r') or []:
                GridUtils.validate_params({'r': r}, BALL_VALIDATORS)
            checks = params.get('checks')
            if checks:
                known = VerificationRunner.CHECK_NAMES
                unknown = [name for name in checks if name not in known]
                if unknown:
                    raise ValueError(f"Unknown checks: {', '.join(unknown)}")

        elif parsed.command == 'history':
            if params['limit'] < 1:
                raise ValueError("limit must be at least 1")
            if not parsed.store_path:
                raise ValueError("history needs --store")

    def format_help(self) -> str:
        """Generate help text for available commands."""
        solver = self.config.solver
        help_text = [
            "Available Commands:",
            "  eig --n N --r R [--k K] - First two eigenvalues, gap and all bounds",
            "  sweep --n N --r-min A --r-max B [--points P] [--scale linear|log] [--format csv|json] - Sweep table",
            "  sweep --preset NAME - Sweep from a named preset",
            "  horoconvex --n N --D D - Gap certificate for horoconvex domains (D >= 4 ln 2)",
            "  verify [--grid-n ...] [--grid-r ...] [--checks ...] - Property checks as JSON",
            "  history --store DB [--limit N] [--show ID] [--delete ID] - Archived runs",
            "",
            "Solver Options:",
            f"  --tol-rel [default {solver.lambda_rel_tol:g}]",
            f"  --tol-abs [default {solver.lambda_abs_tol:g}]",
            f"  --tol-ode [default {solver.ode_tolerance:g}]",
            f"  --fd-mesh [default {solver.fd_mesh_size}]",
            "",
            "Presets:"
        ]

        for name, preset in sorted(self.config.presets.items()):
            help_text.append(f"  {name} - {preset.get('description', '')}")

        help_text.extend([
            "",
            "Other Options:",
            "  --format <text|json|csv> - Output format",
            "  --out <path> - Write to a file instead of stdout",
            "  --store <db> - Archive the run in SQLite",
            "  --verbose - Debug logging on stderr",
            "",
            "Environment:",
            "  HYPERGAP_<SETTING> overrides solver settings, e.g. HYPERGAP_LAMBDA_REL_TOL=1e-11"
        ])
        help_text.extend(["", "Examples:"])
        help_text.extend(f"  hypergap {example}" for example in self.get_example_commands())

        return "\n".join(help_text)

    def get_example_commands(self) -> List[str]:
        """Get list of example commands."""
        return [
            "eig --n 3 --r 2",
            "eig --n 3 --k 2 --r 1 --format json",
            "sweep --n 2 --r-min 5 --r-max 40 --points 8 --scale log --out decay.csv",
            "sweep --preset degenerate --workers 4",
            "sweep --preset decay --format json",
            "horoconvex --n 2 --D 10 --format json",
            "verify --grid-n 3 --grid-r 2 --out report.json",
        ]
