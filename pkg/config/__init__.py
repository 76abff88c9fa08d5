from .config import (
    ConfigManager,
    SolverConfig,
    VerifyConfig,
    SweepConfig,
    OutputConfig
)

__all__ = [
    'ConfigManager',
    'SolverConfig',
    'VerifyConfig',
    'SweepConfig',
    'OutputConfig'
]
