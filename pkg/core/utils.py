import numpy as np
from typing import Dict, Any, Optional, Tuple, List, Callable
import math

SCALES = ('linear', 'log')


class GridUtils:
    """Utility functions for parameter grids and argument checks."""

    @staticmethod
    def radius_grid(r_min: float, r_max: float, points: int, scale: str = 'log') -> List[float]:
        """
        Build a sweep grid of radii.

        Args:
            r_min: Smallest radius, positive
            r_max: Largest radius, above r_min
            points: Number of radii, at least 2
            scale: 'linear' or 'log' spacing

        Returns:
            List of radii including both end points

        Raises:
            ValueError: If the range, count or scale is invalid
        """
        if not r_min > 0:
            raise ValueError("radius must be positive")
        if not r_min < r_max:
            raise ValueError(f"r_min must be below r_max, got {r_min} >= {r_max}")
        if points < 2:
            raise ValueError("points must be at least 2")

        if scale == 'linear':
            grid = np.linspace(r_min, r_max, points)
        elif scale == 'log':
            grid = np.geomspace(r_min, r_max, points)
        else:
            raise ValueError(f"Unknown scale: {scale}")

        values = [float(r) for r in grid]
        # pin the end points exactly
        values[0], values[-1] = float(r_min), float(r_max)
        return values

    @staticmethod
    def relative_error(value: float, reference: float) -> float:
        """|value - reference| / |reference|, or the absolute error at a zero reference."""
        if reference == 0:
            return abs(value)
        return abs(value - reference) / abs(reference)

    @staticmethod
    def format_point(**coordinates: Any) -> str:
        """
        Describe a parameter point, e.g. 'n=2, r=0.5'.

        Floats are written with repr so the description is reproducible.
        """
        parts = []
        for key, value in coordinates.items():
            if isinstance(value, float):
                parts.append(f"{key}={value!r}")
            else:
                parts.append(f"{key}={value}")
        return ', '.join(parts)

    @staticmethod
    def validate_params(params: Dict[str, Any],
                        validators: Dict[str, Tuple[Callable[[Any], bool], str]],
                        required: Optional[List[str]] = None) -> None:
        """
        Validate parameter dictionary against constraints.

        Args:
            params: Parameter dictionary to validate
            validators: Maps a parameter name to (check, message)
            required: List of required parameter names

        Raises:
            ValueError: If validation fails, with the message of the failed check
        """
        if required:
            missing = [param for param in required if params.get(param) is None]
            if missing:
                raise ValueError(f"Missing required parameters: {', '.join(missing)}")

        for param_name, (validator, message) in validators.items():
            value = params.get(param_name)
            if value is None:
                continue
            if isinstance(value, float) and math.isnan(value):
                raise ValueError(f"Invalid value for {param_name}: {value}")
            if not validator(value):
                raise ValueError(message)


BALL_VALIDATORS: Dict[str, Tuple[Callable[[Any], bool], str]] = {
    'n': (lambda v: int(v) == v and v >= 2, "dimension must be an integer >= 2"),
    'r': (lambda v: v > 0, "radius must be positive"),
    'k': (lambda v: v > 0, "curvature parameter k must be positive"),
    'D': (lambda v: v > 0, "diameter must be positive"),
    'points': (lambda v: v >= 2, "points must be at least 2"),
    'workers': (lambda v: v >= 1, "workers must be at least 1"),
}
