# config/grid_presets.py

from typing import List, Tuple

DEFAULT_DIMENSIONS: List[int] = [2, 3, 4, 5, 6]

DEFAULT_RADII: List[float] = [0.25, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0]

SCALING_FACTORS: List[float] = [0.5, 2.0, 10.0]

# (n, r) points for the curvature scaling identity
SCALING_POINTS: List[Tuple[int, float]] = [(2, 1.0), (4, 3.0)]

DECAY_RADII: List[float] = [5.0, 10.0, 20.0, 40.0]

SMALL_BALL_DIMENSIONS: List[int] = [2, 3, 4]

LOG_CONCAVITY_GRID = {
    'dimensions': [2, 3, 4, 5],
    'radii': [0.5, 2.0, 10.0],
}

CHAIN_RADII: List[float] = [1.0, 5.0, 20.0]

CHAIN_DIMENSIONS: List[int] = [2, 3, 4, 5]

HOROCONVEX_DIAMETERS: List[float] = [10.0, 20.0]
