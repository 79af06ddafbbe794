"""Experiment orchestration: recovery sweeps, the image pipeline, verify runs.

Everything here is a pure function of its configuration and master seed.
Per-trial seeds are derived by a stable hash of (master seed, grid-point
identity, trial index), so editing the grid never reshuffles the draws of
unrelated grid points, and re-running a command reproduces its outputs
byte for byte.
"""

import json
import math
import time
from dataclasses import dataclass, field
from multiprocessing import Pool

import numpy as np

from . import rng
from .alphabet import (build_objective, new_alphabet, parse_alphabet,
                       round_to_alphabet)
from .analysis import check_uniqueness, exact_recovery, nsp_falsify, nsr
from .fileio import read_grid, write_grid, write_pgm
from .measurement import (AffineProjector, dft_matrix, gaussian_matrix,
                          realify, vec, unvec)
from .lp_form import build_soav_lp
from .solvers import (NUMERICAL_FAILURE, INFEASIBLE, OPTIMAL, SolverOptions,
                      admm_solve, basis_pursuit, exhaustive_oracle,
                      simplex_solve)

SWEEP_CSV_HEADER = ("alphabet,p,trial,seed,method,nsr,exact_recovery,"
                    "objective,iterations,runtime_ms")

# Probabilities in the minimized objective must stay positive even when the
# sampling distribution hits p = 0 or 1 at the ends of the grid.
MIN_OBJECTIVE_PROB = 1e-6

PRESET_SYMBOLS = {
    "x2": np.array([0.0, 1.0]),
    "x3": np.array([-1.0, 0.0, 1.0]),
    "x5": np.array([-2.0, -1.0, 0.0, 1.0, 2.0]),
}


def preset_probs(name, p):
    """Sampling distribution of the named symbol family at parameter p.

    P(0) = p and the remaining mass is split evenly over the other
    symbols.  Zero entries are legal here (sampling only).
    """
    symbols = PRESET_SYMBOLS[name]
    others = symbols.size - 1
    probs = np.full(symbols.size, (1.0 - p) / others if others else 0.0)
    probs[symbols == 0.0] = p
    if others == 0:
        probs[:] = 1.0
    return probs


def objective_alphabet(symbols, probs):
    """Alphabet for the objective: probabilities clamped positive."""
    probs = np.maximum(np.asarray(probs, dtype=np.float64), MIN_OBJECTIVE_PROB)
    return new_alphabet(symbols, probs / probs.sum())


def parse_p_grid(text):
    """``start:step:end`` -> grid values in integer micro-units (1e-6)."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"bad p-grid {text!r}, expected start:step:end")
    try:
        start, step, end = (float(v) for v in parts)
    except ValueError:
        raise ValueError(f"bad p-grid {text!r}") from None
    if step <= 0:
        raise ValueError("p-grid step must be positive")
    start_u, step_u, end_u = (round(v * 1e6) for v in (start, step, end))
    grid = list(range(start_u, end_u + 1, step_u))
    if not grid or grid[0] < 0 or grid[-1] > 10 ** 6:
        raise ValueError("p-grid must stay within [0, 1]")
    return grid


@dataclass
class SweepConfig:
    alphabet: str = "x2"  # preset name or literal symbol:prob spec
    n: int = 200
    m: int = 100
    trials: int = 200
    p_grid: str = "0:0.05:1"
    solver: str = "admm"
    seed: int = 0
    out: str = "sweep.csv"
    threads: int = 1
    timing: bool = False
    options: SolverOptions = field(default_factory=SolverOptions)

    def __post_init__(self):
        if self.m > self.n:
            raise ValueError("m must not exceed n")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.solver not in ("lp", "admm"):
            raise ValueError(f"unknown solver {self.solver!r}")
        self.grid_micro = parse_p_grid(self.p_grid)

    def distribution(self, p):
        """(symbols, sampling probs) at grid value p."""
        if self.alphabet in PRESET_SYMBOLS:
            return PRESET_SYMBOLS[self.alphabet], preset_probs(self.alphabet, p)
        literal = parse_alphabet(self.alphabet)
        return literal.symbols, literal.probs

    @property
    def alphabet_name(self):
        return self.alphabet.replace(",", ";")


def _solve_soav(objective, phi_r, y_r, solver, opts):
    if solver == "lp":
        return simplex_solve(build_soav_lp(objective, phi_r, y_r), opts)
    return admm_solve(objective, phi_r, y_r, opts)


def _sweep_trial(config, p_micro, trial):
    """Both method records for one (grid point, trial) cell."""
    p = p_micro / 1e6
    symbols, sample_probs = config.distribution(p)
    alphabet = objective_alphabet(symbols, sample_probs)
    objective = build_objective(alphabet)
    trial_seed = rng.derive_seed(config.seed, p_micro, trial)
    phi = gaussian_matrix(config.m, config.n, rng.derive_seed(trial_seed, 1))
    x = rng.choice(symbols, sample_probs, config.n, rng.derive_seed(trial_seed, 2))
    y = phi @ x
    signal_norm = float(np.linalg.norm(x))

    records = []
    for method in ("soav", "bp_round"):
        t0 = time.perf_counter()
        if method == "soav":
            result = _solve_soav(objective, phi, y, config.solver, config.options)
            estimate = result.z
        else:
            result = basis_pursuit(phi, y, config.options, solver=config.solver)
            estimate = round_to_alphabet(alphabet, result.z)
        elapsed_ms = int(round((time.perf_counter() - t0) * 1000))
        failed = result.status in (NUMERICAL_FAILURE, INFEASIBLE)
        value = math.nan
        if not failed and signal_norm > 0.0:
            value = nsr(x, estimate)
        records.append({
            "alphabet": config.alphabet_name,
            "p": p,
            "trial": trial,
            "seed": trial_seed,
            "method": method,
            "nsr": value,
            "exact_recovery": exact_recovery(x, result.z, alphabet),
            "objective": result.objective,
            "iterations": result.iterations,
            "runtime_ms": elapsed_ms if config.timing else 0,
        })
    return records


def _sweep_cell(args):
    config, p_micro, trial = args
    return _sweep_trial(config, p_micro, trial)


def format_sweep_record(record):
    value = record["nsr"]
    nsr_text = "nan" if math.isnan(value) else f"{value:.17g}"
    return (f"{record['alphabet']},{record['p']:g},{record['trial']},"
            f"{record['seed']},{record['method']},{nsr_text},"
            f"{str(record['exact_recovery']).lower()},"
            f"{record['objective']:.17g},{record['iterations']},"
            f"{record['runtime_ms']}")


def run_sweep(config, progress=None):
    """Run the recovery sweep and write its CSV; returns all records.

    Rows are emitted in deterministic (grid point, trial, method) order,
    regardless of how many worker processes computed them.
    """
    cells = [(config, pm, t) for pm in config.grid_micro
             for t in range(config.trials)]
    if config.threads > 1:
        with Pool(config.threads) as pool:
            per_cell = pool.map(_sweep_cell, cells, chunksize=4)
    else:
        per_cell = []
        for cell in cells:
            per_cell.append(_sweep_cell(cell))
            if progress is not None:
                progress(len(per_cell), len(cells))
    records = [rec for pair in per_cell for rec in pair]
    with open(config.out, "w") as fh:
        fh.write(SWEEP_CSV_HEADER + "\n")
        for record in records:
            fh.write(format_sweep_record(record) + "\n")
    return records


@dataclass
class ImageConfig:
    input: str
    noise_sigma: float = 0.1
    keep: int = 0  # 0 -> half the pixel count, rounded up
    seed: int = 0
    solver: str = "admm"
    out: str = "image"
    options: SolverOptions = field(default_factory=SolverOptions)

    def __post_init__(self):
        if self.noise_sigma < 0:
            raise ValueError("noise sigma must be nonnegative")
        if self.solver not in ("lp", "admm"):
            raise ValueError(f"unknown solver {self.solver!r}")


@dataclass
class ImageResult:
    pixel_errors: dict
    nsr: dict
    status: dict
    outputs: dict
    indices: np.ndarray


IMAGE_ALPHABET = new_alphabet([0.0, 1.0], [0.5, 0.5])


def image_system(grid, sigma, keep, seed):
    """Noisy 2-D DFT measurements of a binary grid, subsampled.

    Returns ``(phi_r, y_r, indices, noisy)`` where `phi_r`/`y_r` is the
    realified system whose unknown is the column-major vectorization of
    the noisy image.
    """
    k1, k2 = grid.shape
    n = k1 * k2
    if not 1 <= keep <= n:
        raise ValueError(f"keep must be in [1, {n}]")
    noise = rng.normals(rng.derive_seed(seed, 1), n).reshape(k1, k2)
    noisy = grid + sigma * noise
    w1 = dft_matrix(k1)
    w2 = dft_matrix(k2)
    spectrum = vec(w1 @ noisy @ w2)
    indices = rng.sample_indices(n, keep, rng.derive_seed(seed, 2))
    # Row q of (W2 kron W1) is the outer product of row q2 of W2 and row q1
    # of W1, with q = q2*k1 + q1; materialized only for the kept rows.
    q1 = indices % k1
    q2 = indices // k1
    phi = np.einsum("ta,tb->tab", w2[q2], w1[q1]).reshape(keep, n)
    phi_r, y_r = realify(phi, spectrum[indices])
    return phi_r, y_r, indices, noisy


def run_image(config):
    """Reconstruct a binary grid from subsampled 2-D DFT measurements.

    Solves both the alphabet-weighted objective (equal prior on {0, 1})
    and the basis-pursuit baseline on the same measurements, writes PGM
    and rounded-grid outputs for each, and reports pixel error counts
    against the clean input grid.
    """
    grid = config.input if isinstance(config.input, np.ndarray) \
        else read_grid(config.input)
    k1, k2 = grid.shape
    keep = config.keep if config.keep else (k1 * k2 + 1) // 2
    phi_r, y_r, indices, _ = image_system(
        grid, config.noise_sigma, keep, config.seed)
    projector = None
    if config.solver == "admm":
        projector = AffineProjector(phi_r, y_r)

    objective = build_objective(IMAGE_ALPHABET)
    bp_objective = build_objective(new_alphabet([0.0], [1.0]))
    results = {}
    if config.solver == "admm":
        results["soav"] = admm_solve(objective, phi_r, y_r, config.options,
                                     projector=projector)
        results["bp"] = admm_solve(bp_objective, phi_r, y_r, config.options,
                                   projector=projector)
    else:
        results["soav"] = simplex_solve(
            build_soav_lp(objective, phi_r, y_r), config.options)
        results["bp"] = simplex_solve(
            build_soav_lp(bp_objective, phi_r, y_r), config.options)

    truth = vec(grid)
    pixel_errors, ratios, status, outputs = {}, {}, {}, {}
    for method, result in results.items():
        rounded = round_to_alphabet(IMAGE_ALPHABET, result.z)
        pixel_errors[method] = int(np.count_nonzero(rounded != truth))
        ratios[method] = nsr(truth, result.z) if truth.any() else math.nan
        status[method] = result.status
        pgm_path = f"{config.out}_{method}.pgm"
        grid_path = f"{config.out}_{method}_grid.txt"
        write_pgm(pgm_path, unvec(result.z, k1, k2))
        write_grid(grid_path, unvec(rounded, k1, k2))
        outputs[method] = (pgm_path, grid_path)
    return ImageResult(pixel_errors=pixel_errors, nsr=ratios, status=status,
                       outputs=outputs, indices=indices)


def run_verify(n, m, alphabet, trials, seed, samples=20, tol=1e-8,
               options=None, phi=None):
    """Cross-check oracles, solvers and theory on seeded random instances.

    Returns ``(records, violations)``: one JSON-ready record per check per
    instance, and the count of internal-consistency violations (oracle
    says the solution is unique but a discrete, feasible solver output
    disagrees; or the oracle misses the true signal).
    """
    options = options or SolverOptions()
    objective = build_objective(alphabet)
    records = []
    violations = 0
    for trial in range(trials):
        inst_seed = rng.derive_seed(seed, trial)
        phi_t = phi if phi is not None else gaussian_matrix(
            m, n, rng.derive_seed(inst_seed, 1))
        x = rng.choice(alphabet.symbols, alphabet.probs, n,
                       rng.derive_seed(inst_seed, 2))
        y = phi_t @ x
        unique = check_uniqueness(alphabet, phi_t, tol)
        solutions = exhaustive_oracle(alphabet, phi_t, y, tol)
        records.append({"check": "uniqueness", "instance_seed": inst_seed,
                        "result": unique})
        records.append({"check": "oracle", "instance_seed": inst_seed,
                        "result": len(solutions)})
        truth_found = any(np.array_equal(s, x) for s in solutions)
        if not truth_found:
            violations += 1
            records.append({"check": "consistency", "instance_seed": inst_seed,
                            "result": "oracle missed the true signal"})
        if unique and len(solutions) != 1:
            violations += 1
            records.append({"check": "consistency", "instance_seed": inst_seed,
                            "result": "uniqueness holds but oracle count != 1"})
        for solver in ("lp", "admm"):
            result = _solve_soav(objective, phi_t, y, solver, options)
            rounded = round_to_alphabet(alphabet, result.z)
            discrete = bool(np.max(np.abs(result.z - rounded)) <= 1e-6) \
                if result.z.size else True
            feasible = result.feasibility_residual <= 1e-7
            entry = {"check": f"solver_{solver}", "instance_seed": inst_seed,
                     "result": {"status": result.status,
                                "objective": result.objective,
                                "discrete": discrete,
                                "feasible": feasible}}
            if (unique and len(solutions) == 1 and discrete and feasible
                    and result.status == OPTIMAL):
                agrees = bool(np.array_equal(rounded, solutions[0]))
                entry["result"]["matches_oracle"] = agrees
                if not agrees:
                    violations += 1
                    records.append({
                        "check": "consistency", "instance_seed": inst_seed,
                        "result": f"{solver} disagrees with the unique solution"})
            records.append(entry)
        counterexample = nsp_falsify(alphabet, phi_t, samples,
                                     rng.derive_seed(inst_seed, 3),
                                     objective=objective, tol=tol)
        entry = {"check": "nsp", "instance_seed": inst_seed,
                 "result": counterexample is None}
        if counterexample is not None:
            entry["counterexample"] = {
                "kernel_vector": counterexample.kernel_vector.tolist(),
                "signal": counterexample.signal.tolist(),
                "margin": counterexample.margin,
            }
        records.append(entry)
    return records, violations


def verify_report(records):
    """Render verify records as JSON lines."""
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)
