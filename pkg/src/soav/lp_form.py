"""Exact reduction of the reconstruction problem to a linear program.

Writing the per-coordinate cost as L(t) = max_i (a_i t + b_i) and lifting
each coordinate's cost into an epigraph variable theta_n turns

    minimize F(z)  subject to  Phi_R z = y_R

into the equivalent LP over the joint decision vector (z, theta):

    minimize 1' theta
    subject to  Phi_R z = y_R,   a_i z_n + b_i <= theta_n  for all n, i.

At the optimum theta_n = L(z_n), so the LP value equals min F.
"""

from dataclasses import dataclass

import numpy as np

from .alphabet import PiecewiseLinearObjective, eval_L

EPIGRAPH_TOL = 1e-7


@dataclass(frozen=True)
class LinearProgram:
    """Dense LP data over the decision vector x = (z, theta), length 2n.

    Both blocks act on the full decision vector: ``a_eq @ x = b_eq`` holds
    the measurement rows (zero on theta), ``g @ x <= h`` holds the
    n*(L+1) epigraph rows.  All decision variables are free in sign.
    """

    n: int
    c: np.ndarray
    a_eq: np.ndarray
    b_eq: np.ndarray
    g: np.ndarray
    h: np.ndarray
    objective: PiecewiseLinearObjective


def build_soav_lp(objective, phi_r, y_r):
    """Assemble the epigraph LP for the given cost and measurement system."""
    phi_r = np.asarray(phi_r, dtype=np.float64)
    y_r = np.asarray(y_r, dtype=np.float64).ravel()
    if phi_r.ndim != 2:
        raise ValueError("phi_r must be a matrix")
    if phi_r.shape[0] != y_r.size:
        raise ValueError("measurement length must match matrix rows")
    m, n = phi_r.shape
    a = objective.slopes
    b = objective.intercepts
    k = a.size  # L + 1 epigraph rows per coordinate

    c = np.concatenate([np.zeros(n), np.ones(n)])
    a_eq = np.hstack([phi_r, np.zeros((m, n))])
    # Row (n_idx, i): a_i * z_n - theta_n <= -b_i
    g = np.zeros((n * k, 2 * n))
    rows = np.arange(n * k)
    cols = np.repeat(np.arange(n), k)
    g[rows, cols] = np.tile(a, n)
    g[rows, n + cols] = -1.0
    h = -np.tile(b, n)
    return LinearProgram(n=n, c=c, a_eq=a_eq, b_eq=y_r.copy(), g=g, h=h,
                         objective=objective)


def extract_solution(solution, n, objective):
    """Split an LP solution vector into (z, theta) and check the epigraph.

    Raises ValueError on a length mismatch or when some theta_n falls
    below L(z_n) by more than ``EPIGRAPH_TOL`` (a sign the solver failed).
    """
    solution = np.asarray(solution, dtype=np.float64).ravel()
    if solution.size != 2 * n:
        raise ValueError(f"expected a vector of length {2 * n}, got {solution.size}")
    z = solution[:n]
    theta = solution[n:]
    gap = theta - eval_L(objective, z)
    if np.any(gap < -EPIGRAPH_TOL):
        raise ValueError(
            f"epigraph violated by {-gap.min():.3e}; solver output is unusable"
        )
    return z, theta


def dump_lp(lp):
    """Plain-text dump (sections of CSV rows) for debugging and diffing."""
    def fmt(row):
        return ",".join(f"{v:.17g}" for v in np.atleast_1d(row))

    lines = ["minimize", fmt(lp.c), "subject-to-eq"]
    for row, rhs in zip(lp.a_eq, lp.b_eq):
        lines.append(fmt(row) + "," + f"{rhs:.17g}")
    lines.append("subject-to-ineq")
    for row, rhs in zip(lp.g, lp.h):
        lines.append(fmt(row) + "," + f"{rhs:.17g}")
    return "\n".join(lines) + "\n"
