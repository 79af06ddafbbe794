"""scikit-learn style front end for discrete signal reconstruction.

``SoavReconstructor(alphabet=...).fit(X, y)`` treats the rows of ``X`` as
linear measurement functionals and ``y`` as the observed measurements, and
recovers the finite-alphabet signal as ``coef_`` (real-valued) and
``symbols_`` (rounded to the alphabet), mirroring how sparse linear models
expose basis-pursuit solutions.  The class follows the estimator protocol
(``get_params``/``set_params``/``clone``) so it composes with pipelines and
model-selection tooling.
"""

import warnings

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.exceptions import ConvergenceWarning, NotFittedError

from .alphabet import Alphabet, build_objective, parse_alphabet, round_to_alphabet
from .lp_form import build_soav_lp
from .measurement import realify
from .solvers import OPTIMAL, SolverOptions, admm_solve, simplex_solve


def check_measurements(X, y):
    """Validate a measurement pair; lift complex systems to stacked real form.

    Returns ``(phi_r, y_r)`` ready for the solvers.
    """
    X = np.asarray(X)
    y = np.asarray(y).ravel()
    if X.ndim != 2:
        raise ValueError("X must be a 2-D measurement matrix")
    if X.shape[0] != y.size:
        raise ValueError(
            f"X has {X.shape[0]} rows but y has {y.size} measurements")
    if not np.all(np.isfinite(X.real)) or not np.all(np.isfinite(y.real)):
        raise ValueError("measurements must be finite")
    if np.iscomplexobj(X) or np.iscomplexobj(y):
        if not (np.all(np.isfinite(X.imag)) and np.all(np.isfinite(y.imag))):
            raise ValueError("measurements must be finite")
        return realify(X.astype(np.complex128), y.astype(np.complex128))
    return X.astype(np.float64), y.astype(np.float64)


def check_alphabet(alphabet):
    """Accept an :class:`Alphabet` or a ``symbol:prob`` spec string."""
    if isinstance(alphabet, Alphabet):
        return alphabet
    if isinstance(alphabet, str):
        return parse_alphabet(alphabet)
    raise ValueError("alphabet must be an Alphabet or a spec string")


class SoavReconstructor(RegressorMixin, BaseEstimator):
    """Recover a discrete-valued signal from underdetermined measurements.

    Parameters
    ----------
    alphabet : str or Alphabet, default ``"0:0.5,1:0.5"``
        Symbol values and prior probabilities; ``"0:1"`` reduces the
        objective to plain basis pursuit.
    solver : {"lp", "admm"}, default "lp"
        Exact simplex on the epigraph LP, or Douglas-Rachford splitting.
    max_iterations, feasibility_tol, objective_tol, step
        Passed through to :class:`~soav.solvers.SolverOptions`.

    Attributes
    ----------
    coef_ : ndarray -- the real-valued reconstruction.
    symbols_ : ndarray -- ``coef_`` rounded to the nearest alphabet symbol.
    objective_, status_, n_iter_, residual_ -- solve diagnostics.
    """

    def __init__(self, alphabet="0:0.5,1:0.5", solver="lp",
                 max_iterations=20000, feasibility_tol=1e-7,
                 objective_tol=1e-7, step=1.0):
        self.alphabet = alphabet
        self.solver = solver
        self.max_iterations = max_iterations
        self.feasibility_tol = feasibility_tol
        self.objective_tol = objective_tol
        self.step = step

    def fit(self, X, y):
        phi_r, y_r = check_measurements(X, y)
        alphabet = check_alphabet(self.alphabet)
        objective = build_objective(alphabet)
        opts = SolverOptions(
            max_iterations=self.max_iterations,
            feasibility_tol=self.feasibility_tol,
            objective_tol=self.objective_tol,
            step=self.step,
        )
        if self.solver == "lp":
            result = simplex_solve(build_soav_lp(objective, phi_r, y_r), opts)
        elif self.solver == "admm":
            result = admm_solve(objective, phi_r, y_r, opts)
        else:
            raise ValueError(f"unknown solver {self.solver!r}")
        if result.status != OPTIMAL:
            warnings.warn(
                f"solver finished with status {result.status!r}",
                ConvergenceWarning)
        self.alphabet_ = alphabet
        self.coef_ = result.z
        self.symbols_ = round_to_alphabet(alphabet, result.z)
        self.objective_ = result.objective
        self.status_ = result.status
        self.n_iter_ = result.iterations
        self.residual_ = result.feasibility_residual
        return self

    def predict(self, X):
        """Measurements the fitted signal would produce under ``X``."""
        if not hasattr(self, "coef_"):
            raise NotFittedError("call fit before predict")
        X = np.asarray(X)
        if X.ndim != 2 or X.shape[1] != self.coef_.size:
            raise ValueError("X is not compatible with the fitted signal")
        return X @ self.coef_
