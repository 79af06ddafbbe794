"""Measurement operators: random ensembles, DFT, lifting and projection.

Complex measurement systems with a real-valued unknown are handled by
realification: stacking real and imaginary parts turns Phi z = y over the
complexes into an equivalent real system [Re Phi; Im Phi] z = [Re y; Im y].
Realified Fourier systems are structurally rank-deficient (spectra of real
signals are conjugate-symmetric), so the affine projector is built on a
rank-revealing SVD and tolerates dependent rows.
"""

import numpy as np

from . import rng

# Relative singular-value cutoff shared by the projector and kernel bases.
RANK_REL_TOL = 1e-10
CONSISTENCY_TOL = 1e-8


def gaussian_matrix(m, n, seed):
    """m x n matrix of i.i.d. standard normal entries, bit-reproducible."""
    if m < 1 or n < 1:
        raise ValueError("matrix dimensions must be positive")
    return rng.normals(seed, m * n).reshape(m, n)


def dft_matrix(k):
    """k x k DFT matrix W[m, n] = exp(-2j*pi*m*n/k); symmetric, W conj(W) = k I."""
    if k < 1:
        raise ValueError("k must be positive")
    grid = np.outer(np.arange(k), np.arange(k)) % k
    return np.exp(-2j * np.pi / k * grid)


def kron(a, b):
    """Kronecker product with blocks A[i, j] * B."""
    return np.kron(np.asarray(a), np.asarray(b))


def vec(x):
    """Column-major stacking of a matrix into a vector."""
    return np.asarray(x).ravel(order="F")


def unvec(v, rows, cols):
    """Inverse of :func:`vec`."""
    v = np.asarray(v)
    if v.size != rows * cols:
        raise ValueError(f"cannot reshape {v.size} entries to {rows}x{cols}")
    return v.reshape(rows, cols, order="F")


def subsample_rows(matrix, keep, seed):
    """Uniform `keep`-subset of rows, without replacement, indices sorted.

    Returns ``(submatrix, indices)``; deterministic per seed.
    """
    matrix = np.asarray(matrix)
    idx = rng.sample_indices(matrix.shape[0], keep, seed)
    return matrix[idx], idx


def realify(phi, y):
    """Lift a complex system with real unknown to a stacked real system."""
    phi = np.asarray(phi)
    y = np.asarray(y).ravel()
    if phi.ndim != 2 or phi.shape[0] != y.size:
        raise ValueError("matrix rows and measurement length must agree")
    phi_r = np.vstack([phi.real, phi.imag]).astype(np.float64)
    y_r = np.concatenate([y.real, y.imag]).astype(np.float64)
    return phi_r, y_r


def rank_revealing(a, rel_tol=RANK_REL_TOL):
    """SVD with the numerical rank under a relative singular-value cutoff."""
    u, s, vt = np.linalg.svd(np.asarray(a, dtype=np.float64), full_matrices=True)
    if s.size == 0 or s[0] == 0.0:
        return u, s, vt, 0
    return u, s, vt, int(np.count_nonzero(s > rel_tol * s[0]))


def kernel_basis(a, rel_tol=RANK_REL_TOL):
    """Orthonormal basis (columns) of the numerical null space of `a`."""
    _, _, vt, rank = rank_revealing(a, rel_tol)
    return vt[rank:].T.copy()


class AffineProjector:
    """Euclidean projection onto the feasible set {z : Phi_R z = y_R}.

    Accepts rank-deficient systems: numerically dependent rows are dropped
    via the SVD cutoff, and the projection targets the row space that
    remains.  Raises ValueError when the system is inconsistent (the
    least-squares residual exceeds ``CONSISTENCY_TOL * (1 + ||y_R||)``).
    Idempotent; the output is feasible to projection accuracy.
    """

    def __init__(self, phi_r, y_r):
        phi_r = np.asarray(phi_r, dtype=np.float64)
        y_r = np.asarray(y_r, dtype=np.float64).ravel()
        if phi_r.ndim != 2 or phi_r.shape[0] != y_r.size:
            raise ValueError("matrix rows and measurement length must agree")
        self.phi_r = phi_r
        self.y_r = y_r
        u, s, vt, rank = rank_revealing(phi_r)
        self.rank = rank
        n = phi_r.shape[1]
        if rank == 0:
            particular = np.zeros(n)
        else:
            particular = vt[:rank].T @ ((u[:, :rank].T @ y_r) / s[:rank])
        residual = np.linalg.norm(phi_r @ particular - y_r)
        if residual > CONSISTENCY_TOL * (1.0 + np.linalg.norm(y_r)):
            raise ValueError(
                f"inconsistent measurement system (residual {residual:.3e})"
            )
        self.particular = particular
        # Keep whichever of the row-space/null-space bases is thinner.
        if rank <= n - rank:
            self._basis = vt[:rank].T.copy()
            self._mode = "range"
        else:
            self._basis = vt[rank:].T.copy()
            self._mode = "null"

    def __call__(self, z):
        z = np.asarray(z, dtype=np.float64)
        if self._mode == "range":
            return self.particular + z - self._basis @ (self._basis.T @ z)
        return self.particular + self._basis @ (self._basis.T @ z)

    def residual_of(self, z):
        """Relative feasibility residual ||Phi z - y|| / (1 + ||y||)."""
        gap = np.linalg.norm(self.phi_r @ z - self.y_r)
        return float(gap / (1.0 + np.linalg.norm(self.y_r)))


def affine_projector(phi_r, y_r):
    """Build an :class:`AffineProjector` for the system Phi_R z = y_R."""
    return AffineProjector(phi_r, y_r)
