from typing import Dict, Any, List, Tuple, Union, Optional
from pathlib import Path
from dataclasses import dataclass, field, fields, replace, asdict
import logging
import os
import yaml

from .grid_presets import (
    DEFAULT_DIMENSIONS,
    DEFAULT_RADII,
    SCALING_FACTORS,
    SCALING_POINTS,
    DECAY_RADII,
    SMALL_BALL_DIMENSIONS,
    LOG_CONCAVITY_GRID,
    CHAIN_RADII,
    CHAIN_DIMENSIONS,
    HOROCONVEX_DIAMETERS
)

ENV_PREFIX = 'HYPERGAP_'


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances and discretization settings for the radial eigensolvers."""
    lambda_rel_tol: float = 1e-10
    lambda_abs_tol: float = 1e-12
    ode_tolerance: float = 1e-12
    t0_factor: float = 1e-6
    max_bisection_steps: int = 200
    sample_count: int = 1001
    fd_mesh_size: int = 4000

    def validate(self) -> None:
        """
        Check that every setting is usable.

        Raises:
            ValueError: If a tolerance is non-positive or a count is too small
        """
        for name in ('lambda_rel_tol', 'lambda_abs_tol', 'ode_tolerance', 't0_factor'):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{name} must be positive, got {value}")
        if self.t0_factor >= 1e-3:
            raise ValueError(f"t0_factor must be below 1e-3, got {self.t0_factor}")
        if self.max_bisection_steps < 1:
            raise ValueError("max_bisection_steps must be at least 1")
        if self.sample_count < 3:
            raise ValueError("sample_count must be at least 3")
        if self.fd_mesh_size < 100:
            raise ValueError("fd_mesh_size must be at least 100")


@dataclass
class VerifyConfig:
    """Parameter grids for the property checks."""
    dimensions: List[int] = field(default_factory=lambda: list(DEFAULT_DIMENSIONS))
    radii: List[float] = field(default_factory=lambda: list(DEFAULT_RADII))
    scaling_factors: List[float] = field(default_factory=lambda: list(SCALING_FACTORS))
    scaling_points: List[Tuple[int, float]] = field(default_factory=lambda: list(SCALING_POINTS))
    decay_radii: List[float] = field(default_factory=lambda: list(DECAY_RADII))
    decay_dimensions: List[int] = field(default_factory=lambda: [2])
    small_ball_radius: float = 1e-2
    small_ball_dimensions: List[int] = field(default_factory=lambda: list(SMALL_BALL_DIMENSIONS))
    small_ball_tolerance: float = 1e-3
    small_ball_gap_tolerance: float = 2e-3
    log_concavity_dimensions: List[int] = field(
        default_factory=lambda: list(LOG_CONCAVITY_GRID["dimensions"]))
    log_concavity_radii: List[float] = field(
        default_factory=lambda: list(LOG_CONCAVITY_GRID["radii"]))
    slope_tolerance: float = 1e-4
    chain_dimensions: List[int] = field(default_factory=lambda: list(CHAIN_DIMENSIONS))
    chain_radii: List[float] = field(default_factory=lambda: list(CHAIN_RADII))
    horoconvex_diameters: List[float] = field(default_factory=lambda: list(HOROCONVEX_DIAMETERS))
    bm_points: int = 200
    bm_radius_max: float = 50.0
    oracle_tolerance: float = 1e-6
    exactness_tolerance: float = 1e-8
    error_multiplier: float = 10.0


@dataclass
class SweepConfig:
    """Defaults for radius sweeps."""
    default_points: int = 8
    default_scale: str = 'log'
    workers: int = 1


@dataclass
class OutputConfig:
    """Output formatting settings."""
    float_format: str = '%.12g'
    default_format: str = 'text'


def _coerce(value: str, target: Any) -> Any:
    """Convert an environment string to the type of an existing default."""
    if isinstance(target, bool):
        return value.strip().lower() in ('1', 'true', 'yes', 'on')
    if isinstance(target, int):
        return int(value)
    if isinstance(target, float):
        return float(value)
    return value


def _reject_unknown(section: str, target: Any, values: Dict[str, Any]) -> None:
    known = {f.name for f in fields(target)}
    unknown = sorted(set(values) - known)
    if unknown:
        raise ValueError(f"Unknown {section} setting: {', '.join(unknown)}")


class ConfigManager:
    """
    Manages solver settings, verification grids and sweep presets.
    """

    def __init__(self, config_dir: Union[str, Path] = "config",
                 environ: Optional[Dict[str, str]] = None):
        """
        Initialize configuration manager.

        Args:
            config_dir: Directory containing configuration files
            environ: Environment mapping to read HYPERGAP_ overrides from
                (defaults to os.environ)
        """
        self.logger = logging.getLogger('ConfigManager')
        self.config_dir = Path(config_dir)

        self.solver = SolverConfig()
        self.verify = VerifyConfig()
        self.sweep = SweepConfig()
        self.output = OutputConfig()

        self.presets = self._load_presets()
        self.load_config()
        self.apply_environment(os.environ if environ is None else environ)

    def _load_presets(self) -> Dict[str, Dict[str, Any]]:
        """
        Load sweep presets from configuration file.

        Returns:
            Dict[str, Dict[str, Any]]: Preset configurations
        """
        preset_path = self.config_dir / "presets.yml"
        if not preset_path.exists():
            return {}

        try:
            with open(preset_path) as f:
                return yaml.safe_load(f) or {}
        except (OSError, yaml.YAMLError) as e:
            self.logger.error(f"Error loading presets: {e}")
            return {}

    def get_preset(self, name: str) -> Dict[str, Any]:
        """
        Get sweep preset by name.

        Args:
            name: Preset name

        Returns:
            Dict[str, Any]: Preset configuration

        Raises:
            KeyError: If preset doesn't exist
        """
        if name not in self.presets:
            raise KeyError(f"Preset '{name}' not found")
        return self.presets[name]

    def update_solver(self, **overrides: Any) -> SolverConfig:
        """
        Replace solver settings, ignoring overrides that are None.

        Raises:
            ValueError: If the resulting configuration is invalid
        """
        changes = {key: value for key, value in overrides.items() if value is not None}
        _reject_unknown('solver', self.solver, changes)
        candidate = replace(self.solver, **changes)
        candidate.validate()
        self.solver = candidate
        return candidate

    def apply_environment(self, environ: Dict[str, str]) -> None:
        """
        Apply HYPERGAP_<FIELD> overrides for solver settings.

        Raises:
            ValueError: If a value cannot be parsed or is out of range
        """
        changes = {}
        for spec_field in fields(SolverConfig):
            key = ENV_PREFIX + spec_field.name.upper()
            if key in environ:
                try:
                    changes[spec_field.name] = _coerce(environ[key], getattr(self.solver, spec_field.name))
                except ValueError:
                    raise ValueError(f"Invalid value for {key}: {environ[key]!r}")
        if changes:
            self.logger.debug(f"Environment overrides: {changes}")
            self.update_solver(**changes)

    def save_config(self) -> None:
        """Save current configuration to files."""
        self.config_dir.mkdir(parents=True, exist_ok=True)
        config_path = self.config_dir / "config.yml"

        verify = asdict(self.verify)
        verify['scaling_points'] = [list(point) for point in self.verify.scaling_points]
        config = {
            'solver': asdict(self.solver),
            'verify': verify,
            'sweep': asdict(self.sweep),
            'output': asdict(self.output),
        }

        with open(config_path, 'w') as f:
            yaml.safe_dump(config, f)

    def load_config(self) -> None:
        """Load configuration from files."""
        config_path = self.config_dir / "config.yml"
        if not config_path.exists():
            return

        try:
            with open(config_path) as f:
                config = yaml.safe_load(f) or {}
        except (OSError, yaml.YAMLError) as e:
            self.logger.error(f"Error loading configuration: {e}")
            return

        if config.get('solver'):
            self.update_solver(**config['solver'])
        for section in ('verify', 'sweep', 'output'):
            _reject_unknown(section, getattr(self, section), config.get(section) or {})
        for key, value in config.get('verify', {}).items():
            if key == 'scaling_points':
                value = [(int(n), float(r)) for n, r in value]
            setattr(self.verify, key, value)
        for key, value in config.get('sweep', {}).items():
            setattr(self.sweep, key, value)
        for key, value in config.get('output', {}).items():
            setattr(self.output, key, value)
