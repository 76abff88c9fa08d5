from .repository import ResultRepository

__all__ = [
    'ResultRepository'
]
