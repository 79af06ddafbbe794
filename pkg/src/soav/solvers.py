"""Reconstruction solvers.

Three routes to a solution of

    minimize F(z) = sum_n L(z_n)   subject to   Phi_R z = y_R:

* :func:`simplex_solve` -- exact: a self-contained dense two-phase simplex
  on the epigraph LP, Bland's rule throughout.  Intended for desk-scale
  instances (up to roughly 2500 tableau rows); above that prefer the
  splitting solver.
* :func:`admm_solve` -- scalable: Douglas-Rachford splitting alternating
  the exact coordinatewise prox of L with projection onto the affine
  feasible set.
* :func:`exhaustive_oracle` -- ground truth by enumeration of all L^N
  candidate signals; exponential, for tiny instances only.

:func:`basis_pursuit` is the min-l1 special case (single-symbol alphabet
{0}) and serves as the comparison baseline.
"""

import time
from dataclasses import dataclass

import numpy as np

from .alphabet import build_objective, eval_F, new_alphabet, prox_L
from .lp_form import build_soav_lp, extract_solution
from .measurement import AffineProjector

OPTIMAL = "optimal"
ITERATION_LIMIT = "iteration_limit"
INFEASIBLE = "infeasible"
NUMERICAL_FAILURE = "numerical_failure"

ORACLE_BUDGET = 10 ** 7

_PIVOT_TOL = 1e-9
_STEP_TOL = 1e-9  # successive-iterate threshold for the splitting solver


@dataclass
class SolverOptions:
    max_iterations: int = 20000
    feasibility_tol: float = 1e-7
    objective_tol: float = 1e-7
    step: float = 1.0  # Douglas-Rachford step size
    pivot_rule: str = "bland"

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if min(self.feasibility_tol, self.objective_tol, self.step) <= 0:
            raise ValueError("tolerances and step must be positive")
        if self.pivot_rule != "bland":
            raise ValueError(f"unknown pivot rule {self.pivot_rule!r}")


@dataclass
class SolveResult:
    z: np.ndarray
    objective: float
    status: str
    iterations: int
    feasibility_residual: float
    wall_time: float = 0.0
    theta: np.ndarray = None  # epigraph variables, LP route only


def _relative_residual(phi_r, y_r, z):
    gap = np.linalg.norm(phi_r @ z - y_r)
    return float(gap / (1.0 + np.linalg.norm(y_r)))


# ---------------------------------------------------------------------------
# dense two-phase simplex
# ---------------------------------------------------------------------------

def _pivot(tableau, row, col):
    tableau[row] /= tableau[row, col]
    factors = tableau[:, col].copy()
    factors[row] = 0.0
    tableau -= np.outer(factors, tableau[row])
    # keep the pivot column numerically exact
    tableau[:, col] = 0.0
    tableau[row, col] = 1.0


def _bland_entering(costrow, allowed):
    candidates = np.nonzero((costrow < -_PIVOT_TOL) & allowed)[0]
    return int(candidates[0]) if candidates.size else -1


def _bland_leaving(tableau, col, basis):
    coeffs = tableau[:-1, col]
    rhs = tableau[:-1, -1]
    feasible = coeffs > _PIVOT_TOL
    if not feasible.any():
        return -1
    ratios = np.full(coeffs.size, np.inf)
    ratios[feasible] = rhs[feasible] / coeffs[feasible]
    best = ratios.min()
    ties = np.nonzero(ratios <= best + 1e-12 * (1.0 + abs(best)))[0]
    # Bland: among minimum ratios, leave the basic variable of smallest index
    return int(ties[np.argmin(np.asarray(basis)[ties])])


def _run_simplex(tableau, basis, allowed, max_iters):
    """Pivot until optimal; returns (status, iterations used)."""
    for it in range(max_iters):
        col = _bland_entering(tableau[-1, :-1], allowed)
        if col < 0:
            return OPTIMAL, it
        row = _bland_leaving(tableau, col, basis)
        if row < 0:
            return "unbounded", it
        _pivot(tableau, row, col)
        basis[row] = col
    return ITERATION_LIMIT, max_iters


def solve_dense_lp(c, a_eq, b_eq, a_ub, b_ub, opts):
    """Two-phase primal simplex for  min c'x : a_eq x = b_eq, a_ub x <= b_ub, x >= 0.

    Returns ``(status, x, iterations, comp_slack)`` where `comp_slack` is the
    complementary-slackness residual |sum_j x_j rc_j| of the final tableau.
    """
    c = np.asarray(c, dtype=np.float64)
    a_eq = np.asarray(a_eq, dtype=np.float64).reshape(-1, c.size)
    a_ub = np.asarray(a_ub, dtype=np.float64).reshape(-1, c.size)
    b_eq = np.asarray(b_eq, dtype=np.float64).ravel()
    b_ub = np.asarray(b_ub, dtype=np.float64).ravel()
    m_eq, m_ub = a_eq.shape[0], a_ub.shape[0]
    m = m_eq + m_ub
    n_struct = c.size
    n_slack = m_ub

    a = np.zeros((m, n_struct + n_slack))
    a[:m_eq, :n_struct] = a_eq
    a[m_eq:, :n_struct] = a_ub
    a[m_eq:, n_struct:] = np.eye(m_ub)
    b = np.concatenate([b_eq, b_ub])

    flip = b < 0
    a[flip] *= -1.0
    b = np.abs(b)

    # Slacks of unflipped inequality rows start in the basis; everything else
    # gets an artificial variable.
    needs_artificial = np.ones(m, dtype=bool)
    basis = np.full(m, -1, dtype=np.int64)
    for i in range(m_ub):
        row = m_eq + i
        if not flip[row]:
            basis[row] = n_struct + i
            needs_artificial[row] = False
    art_rows = np.nonzero(needs_artificial)[0]
    n_art = art_rows.size
    n_total = n_struct + n_slack + n_art

    tableau = np.zeros((m + 1, n_total + 1))
    tableau[:m, : n_struct + n_slack] = a
    tableau[:m, -1] = b
    for k, row in enumerate(art_rows):
        col = n_struct + n_slack + k
        tableau[row, col] = 1.0
        basis[row] = col
    basis = basis.tolist()

    # Phase 1: minimize the sum of artificials.
    tableau[-1, n_struct + n_slack : n_total] = 1.0
    for row in art_rows:
        tableau[-1] -= tableau[row]
    allowed = np.ones(n_total, dtype=bool)
    status, used = _run_simplex(tableau, basis, allowed, opts.max_iterations)
    iterations = used
    if status != OPTIMAL:
        return (status if status == ITERATION_LIMIT else NUMERICAL_FAILURE,
                np.zeros(n_struct), iterations, np.inf)
    phase1_obj = -tableau[-1, -1]
    if phase1_obj > opts.feasibility_tol * (1.0 + np.abs(b).max(initial=0.0)):
        return INFEASIBLE, np.zeros(n_struct), iterations, np.inf

    # Drive remaining artificials out of the basis; drop redundant rows.
    art_start = n_struct + n_slack
    drop = []
    for row in range(len(basis)):
        if basis[row] < art_start:
            continue
        pivots = np.nonzero(np.abs(tableau[row, :art_start]) > _PIVOT_TOL)[0]
        if pivots.size:
            _pivot(tableau, row, int(pivots[0]))
            basis[row] = int(pivots[0])
        else:
            drop.append(row)
    if drop:
        keep = [r for r in range(m) if r not in set(drop)]
        tableau = tableau[keep + [m]]
        basis = [basis[r] for r in keep]

    # Phase 2 over the original cost; artificial columns barred from entering.
    tableau[-1, :] = 0.0
    tableau[-1, :n_struct] = c
    for row, col in enumerate(basis):
        if tableau[-1, col] != 0.0:
            tableau[-1] -= tableau[-1, col] * tableau[row]
    allowed = np.ones(n_total, dtype=bool)
    allowed[art_start:] = False
    status, used = _run_simplex(tableau, basis, allowed,
                                opts.max_iterations - iterations)
    iterations += used
    x = np.zeros(n_total)
    for row, col in enumerate(basis):
        x[col] = tableau[row, -1]
    comp_slack = float(abs(np.dot(x[:art_start], tableau[-1, :art_start])))
    if status == "unbounded":
        return NUMERICAL_FAILURE, x[:n_struct], iterations, comp_slack
    return status, x[:n_struct], iterations, comp_slack


def simplex_solve(lp, opts=None):
    """Solve an epigraph :class:`~soav.lp_form.LinearProgram` exactly.

    Free decision variables are split into nonnegative parts internally;
    the epigraph identity theta_n = L(z_n) is verified on the way out.
    """
    opts = opts or SolverOptions()
    start = time.perf_counter()
    n = lp.n
    c = np.concatenate([lp.c, -lp.c])
    a_eq = np.hstack([lp.a_eq, -lp.a_eq])
    a_ub = np.hstack([lp.g, -lp.g])
    status, x, iterations, comp_slack = solve_dense_lp(
        c, a_eq, lp.b_eq, a_ub, lp.h, opts)
    decision = x[: 2 * n] - x[2 * n :]
    z = decision[:n]
    theta = decision[n:]
    residual = float(
        np.linalg.norm(lp.a_eq @ decision - lp.b_eq)
        / (1.0 + np.linalg.norm(lp.b_eq)))
    if status == OPTIMAL:
        try:
            extract_solution(decision, n, lp.objective)
        except ValueError:
            status = NUMERICAL_FAILURE
        if comp_slack > 1e-7 or residual > 1e-6:
            status = NUMERICAL_FAILURE
    return SolveResult(
        z=z,
        objective=eval_F(lp.objective, z),
        status=status,
        iterations=iterations,
        feasibility_residual=residual,
        wall_time=time.perf_counter() - start,
        theta=theta,
    )


# ---------------------------------------------------------------------------
# Douglas-Rachford splitting
# ---------------------------------------------------------------------------

def admm_solve(objective, phi_r, y_r, opts=None, x0=None, projector=None):
    """Douglas-Rachford splitting on F(z) + indicator(Phi_R z = y_R).

    Alternates the closed-form prox of the piecewise-linear cost with the
    affine projector:

        x   = prox_{gamma F}(v)
        w   = P(2x - v)
        v  += w - x

    Converges for any step gamma > 0.  Iteration stops when the update
    ``w - x`` drops below 1e-9 relative or the feasible objective stalls.
    The returned point is the best feasible iterate (every `w` satisfies
    the measurements exactly, up to projection accuracy).

    `x0` seeds the driver sequence `v`; `projector` reuses a prebuilt
    :class:`~soav.measurement.AffineProjector` for the same system.
    """
    opts = opts or SolverOptions()
    start = time.perf_counter()
    phi_r = np.asarray(phi_r, dtype=np.float64)
    y_r = np.asarray(y_r, dtype=np.float64).ravel()
    n = phi_r.shape[1]
    if projector is None:
        try:
            projector = AffineProjector(phi_r, y_r)
        except ValueError:
            z = np.zeros(n)
            return SolveResult(
                z=z, objective=eval_F(objective, z), status=INFEASIBLE,
                iterations=0,
                feasibility_residual=_relative_residual(phi_r, y_r, z),
                wall_time=time.perf_counter() - start)
    gamma = opts.step
    v = np.array(projector.particular if x0 is None else x0, dtype=np.float64)
    best_z = projector(v)
    best_obj = eval_F(objective, best_z)
    status = ITERATION_LIMIT
    last_improve = 0
    stall_window = 800
    iterations = 0
    for it in range(1, opts.max_iterations + 1):
        iterations = it
        x = prox_L(objective, gamma, v)
        w = projector(2.0 * x - v)
        step = w - x
        v += step
        obj = eval_F(objective, w)
        if obj < best_obj - 0.1 * opts.objective_tol * (1.0 + abs(best_obj)):
            best_obj = obj
            best_z = w.copy()
            last_improve = it
        elif obj <= best_obj:
            best_obj = obj
            best_z = w.copy()
        if np.linalg.norm(step) <= _STEP_TOL * (1.0 + np.linalg.norm(v)):
            status = OPTIMAL
            break
        if it - last_improve >= stall_window:
            status = OPTIMAL
            break
    return SolveResult(
        z=best_z,
        objective=eval_F(objective, best_z),
        status=status,
        iterations=iterations,
        feasibility_residual=_relative_residual(phi_r, y_r, best_z),
        wall_time=time.perf_counter() - start,
    )


ZERO_ALPHABET = new_alphabet([0.0], [1.0])


def basis_pursuit(phi_r, y_r, opts=None, solver="admm"):
    """min ||z||_1 subject to Phi_R z = y_R (single-symbol alphabet {0})."""
    objective = build_objective(ZERO_ALPHABET)
    if solver == "admm":
        return admm_solve(objective, phi_r, y_r, opts)
    if solver == "lp":
        return simplex_solve(build_soav_lp(objective, phi_r, y_r), opts)
    raise ValueError(f"unknown solver {solver!r}")


# ---------------------------------------------------------------------------
# exhaustive enumeration
# ---------------------------------------------------------------------------

def lattice_size(n_values, n):
    return n_values ** n


def lattice_chunks(values, n, chunk=1 << 14):
    """Yield all vectors in values^n as (rows, n) blocks, odometer order.

    Coordinate 0 is the fastest-varying digit.
    """
    values = np.asarray(values, dtype=np.float64)
    total = lattice_size(values.size, n)
    radix = values.size ** np.arange(n, dtype=np.int64)
    for lo in range(0, total, chunk):
        idx = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        digits = (idx[:, None] // radix) % values.size
        yield values[digits]


def exhaustive_oracle(alphabet, phi_r, y_r, tol):
    """All x in alphabet^N with ||Phi_R x - y_R|| <= tol*(1 + ||y_R||).

    Enumerates every candidate signal (odometer order), so the alphabet
    size to the N-th power must not exceed ``ORACLE_BUDGET``.  Under the
    uniqueness condition there is exactly one hit for a true measurement.
    """
    phi_r = np.asarray(phi_r, dtype=np.float64)
    y_r = np.asarray(y_r, dtype=np.float64).ravel()
    n = phi_r.shape[1]
    if lattice_size(alphabet.size, n) > ORACLE_BUDGET:
        raise ValueError(
            f"enumeration budget exceeded: {alphabet.size}^{n} candidates")
    bound = tol * (1.0 + np.linalg.norm(y_r))
    hits = []
    for block in lattice_chunks(alphabet.symbols, n):
        gaps = np.linalg.norm(block @ phi_r.T - y_r, axis=1)
        for row in np.nonzero(gaps <= bound)[0]:
            hits.append(block[row].copy())
    return hits
