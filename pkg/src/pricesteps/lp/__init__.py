"""Sparse LP model, reference simplex, and solver front end."""

from .model import EQ, GE, LE, BasisInfo, LinearProgram, LPError, Solution, primal_residual
from .simplex import SizeCapExceeded
from .solve import (DEFAULT_TOLERANCE, SOLVER_ENV, SOLVERS, SolverError, default_solver,
                    reference_simplex, solve)
from .lpformat import write_lp

__all__ = [
    "EQ", "GE", "LE", "BasisInfo", "LinearProgram", "LPError", "Solution", "primal_residual",
    "SizeCapExceeded", "DEFAULT_TOLERANCE", "SOLVER_ENV", "SOLVERS", "SolverError",
    "default_solver", "reference_simplex", "solve", "write_lp",
]
