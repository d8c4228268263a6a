"""linelab: computable groups of homeomorphisms of the real line."""

from .config import DEFAULT_BUDGET, DEFAULT_TOL, Budget, Tolerances
from .intervals import IntervalQ
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "Budget", "DEFAULT_BUDGET", "DEFAULT_TOL", "IntervalQ", "Tolerances", "__version__"]
