"""Recursive blocked solvers for Laplace-like and Kronecker-structured
generalized Sylvester tensor equations."""
from .errors import (ConvergenceError, OracleSizeError, SingularOperatorError,
                     TsylvError)
from .gsylv import (check_solvable_gsylv, mrggsylv, recgsylvten,
                    shifted_kron_problem, solve_gsylv)
from .laplace import (Solvability, check_solvable_laplace, merge_pair, mrglap,
                      reclap, solve_laplace)
from .problems import GSylvProblem, LaplaceProblem, SolverConfig, SolveReport
from .sylvester import solve_gsylv_tri, solve_sylvester_tri

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError", "OracleSizeError", "SingularOperatorError", "TsylvError",
    "GSylvProblem", "LaplaceProblem", "SolverConfig", "SolveReport",
    "Solvability", "check_solvable_laplace", "check_solvable_gsylv",
    "solve_laplace", "solve_gsylv", "reclap", "mrglap", "merge_pair",
    "recgsylvten", "mrggsylv", "shifted_kron_problem",
    "solve_sylvester_tri", "solve_gsylv_tri",
]
