__version__ = "0.1.0"

from .lp import LinearProgram, Solution, solve, reference_simplex
