"""Discrete-valued signal reconstruction by weighted l1 minimization.

Signals with entries from a known finite alphabet (with known symbol
probabilities) are recovered from underdetermined linear measurements by
minimizing the probability-weighted sum of absolute deviations from every
symbol, subject to the measurements -- a convex relaxation of the
exponential enumeration problem that reduces exactly to a linear program.
"""

from .alphabet import (Alphabet, PiecewiseLinearObjective, build_objective,
                       difference_set, eval_F, eval_L, mean, new_alphabet,
                       parse_alphabet, prox_L, round_to_alphabet)
from .analysis import (NspCounterexample, check_uniqueness, exact_recovery,
                       nsp_falsify, nsr)
from .estimator import SoavReconstructor, check_measurements
from .lp_form import LinearProgram, build_soav_lp, dump_lp, extract_solution
from .measurement import (AffineProjector, affine_projector, dft_matrix,
                          gaussian_matrix, kernel_basis, kron, realify,
                          subsample_rows, unvec, vec)
from .solvers import (INFEASIBLE, ITERATION_LIMIT, NUMERICAL_FAILURE, OPTIMAL,
                      SolveResult, SolverOptions, admm_solve, basis_pursuit,
                      exhaustive_oracle, simplex_solve)

__version__ = "0.1.0"

__all__ = [
    "Alphabet", "PiecewiseLinearObjective", "new_alphabet", "parse_alphabet",
    "mean", "build_objective", "eval_L", "eval_F", "prox_L",
    "round_to_alphabet", "difference_set",
    "gaussian_matrix", "dft_matrix", "kron", "vec", "unvec", "subsample_rows",
    "realify", "affine_projector", "AffineProjector", "kernel_basis",
    "LinearProgram", "build_soav_lp", "extract_solution", "dump_lp",
    "SolverOptions", "SolveResult", "simplex_solve", "admm_solve",
    "basis_pursuit", "exhaustive_oracle",
    "OPTIMAL", "ITERATION_LIMIT", "INFEASIBLE", "NUMERICAL_FAILURE",
    "check_uniqueness", "nsp_falsify", "NspCounterexample", "nsr",
    "exact_recovery",
    "SoavReconstructor", "check_measurements",
    "__version__",
]
