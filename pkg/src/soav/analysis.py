"""Theory-facing checks and experiment metrics.

Uniqueness of discrete reconstruction is equivalent to the kernel of the
measurement matrix meeting the difference lattice (all pairwise symbol
differences, coordinatewise) only at zero; :func:`check_uniqueness` tests
exactly that by enumeration.

The null space property for an alphabet asks F(x) < F(x - v) for every
candidate signal x and every nonzero kernel vector v; it holds iff every
signal is the unique minimizer of the relaxation.  The kernel is a
continuum, so :func:`nsp_falsify` can only hunt for counterexamples
(sampled kernel directions plus all difference-lattice kernel members);
finding none is evidence, not proof.
"""

from dataclasses import dataclass

import numpy as np

from . import rng
from .alphabet import build_objective, difference_set, eval_L, round_to_alphabet
from .measurement import kernel_basis
from .solvers import ORACLE_BUDGET, lattice_chunks, lattice_size

UNIQUENESS_TOL = 1e-8
NSP_BUDGET = 10 ** 6


@dataclass(frozen=True)
class NspCounterexample:
    """A kernel vector and signal with F(x) >= F(x - v), i.e. margin <= 0."""

    kernel_vector: np.ndarray
    signal: np.ndarray
    margin: float


def _lattice_kernel_members(alphabet, phi_r, tol, first_only):
    """Nonzero difference-lattice vectors numerically inside ker(Phi_R)."""
    phi_r = np.asarray(phi_r, dtype=np.float64)
    n = phi_r.shape[1]
    diffs = difference_set(alphabet)
    if lattice_size(diffs.size, n) > ORACLE_BUDGET:
        raise ValueError(
            f"enumeration budget exceeded: {diffs.size}^{n} candidates")
    members = []
    for block in lattice_chunks(diffs, n):
        norms = np.linalg.norm(block, axis=1)
        images = np.linalg.norm(block @ phi_r.T, axis=1)
        for row in np.nonzero((norms > 0) & (images <= tol * norms))[0]:
            members.append(block[row].copy())
            if first_only:
                return members
    return members


def check_uniqueness(alphabet, phi_r, tol=UNIQUENESS_TOL):
    """True iff no nonzero difference-lattice vector lies in ker(Phi_R)."""
    return not _lattice_kernel_members(alphabet, phi_r, tol, first_only=True)


def nsp_falsify(alphabet, phi_r, samples, seed, objective=None,
                tol=UNIQUENESS_TOL):
    """Search for a null-space-property violation; None if the hunt fails.

    Candidate kernel vectors are taken in a fixed order: every
    difference-lattice kernel member (odometer order), then `samples`
    random directions (normal coefficients on an orthonormal kernel
    basis).  For each, all signals x in alphabet^N are scanned in odometer
    order and the first x with F(x) >= F(x - v) is returned.
    """
    phi_r = np.asarray(phi_r, dtype=np.float64)
    n = phi_r.shape[1]
    if lattice_size(alphabet.size, n) > NSP_BUDGET:
        raise ValueError(
            f"enumeration budget exceeded: {alphabet.size}^{n} signals")
    objective = objective or build_objective(alphabet)

    candidates = _lattice_kernel_members(alphabet, phi_r, tol, first_only=False)
    basis = kernel_basis(phi_r)
    if basis.shape[1] == 0 and not candidates:
        return None
    for s in range(samples):
        if basis.shape[1] == 0:
            break
        coeffs = rng.normals(rng.derive_seed(seed, s), basis.shape[1])
        v = basis @ coeffs
        if np.linalg.norm(v) > 1e-12:
            candidates.append(v)

    signals = np.concatenate(
        list(lattice_chunks(alphabet.symbols, n)), axis=0)
    cost = eval_L(objective, signals).sum(axis=1)
    for v in candidates:
        shifted_cost = eval_L(objective, signals - v).sum(axis=1)
        margins = shifted_cost - cost
        hits = np.nonzero(margins <= 0.0)[0]
        if hits.size:
            first = int(hits[0])
            return NspCounterexample(
                kernel_vector=v.copy(),
                signal=signals[first].copy(),
                margin=float(margins[first]),
            )
    return None


def nsr(x, xhat):
    """Noise-to-signal ratio ||x - xhat||_2 / ||x||_2."""
    x = np.asarray(x, dtype=np.float64)
    xhat = np.asarray(xhat, dtype=np.float64)
    if x.shape != xhat.shape:
        raise ValueError("signals must have the same shape")
    scale = np.linalg.norm(x)
    if scale == 0.0:
        raise ValueError("nsr undefined for the zero signal")
    return float(np.linalg.norm(x - xhat) / scale)


def exact_recovery(x, xhat, alphabet):
    """True iff xhat rounds to x symbol-for-symbol."""
    x = np.asarray(x, dtype=np.float64)
    xhat = np.asarray(xhat, dtype=np.float64)
    if x.shape != xhat.shape:
        raise ValueError("signals must have the same shape")
    return bool(np.array_equal(round_to_alphabet(alphabet, xhat), x))
