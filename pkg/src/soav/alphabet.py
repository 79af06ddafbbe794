"""Finite alphabets and the weighted sum-of-absolute-values objective.

An alphabet is a sorted set of symbol values r_1 < ... < r_L with strictly
positive probabilities p_i summing to one.  The per-coordinate cost

    L(t) = sum_i p_i |t - r_i|

is continuous, convex and piecewise linear; expanding the absolute values
segment by segment gives slopes/intercepts

    a_i = sum_{j<=i} p_j - sum_{j>i} p_j,
    b_i = -sum_{j<=i} p_j r_j + sum_{j>i} p_j r_j,

for i = 1..L-1, bracketed by the sentinel pieces (-1, rbar) on the left and
(+1, -rbar) on the right, where rbar = sum_i p_i r_i.  Equivalently
L(t) = max_i (a_i t + b_i), the form used throughout this module.

The single-symbol alphabet {0} makes L(t) = |t|, so everything here
degenerates to the plain l1 objective of basis pursuit.
"""

from dataclasses import dataclass

import numpy as np

PROB_SUM_TOL = 1e-9


@dataclass(frozen=True)
class Alphabet:
    """Symbol values (strictly increasing) and their probabilities."""

    symbols: np.ndarray
    probs: np.ndarray

    @property
    def size(self):
        return self.symbols.size

    def spec(self):
        """Render as CLI text syntax, e.g. ``-1:0.25,0:0.5,1:0.25``."""
        return ",".join(f"{r:.12g}:{p:.12g}" for r, p in zip(self.symbols, self.probs))


@dataclass(frozen=True)
class PiecewiseLinearObjective:
    """max-of-affine form of L(t): slopes a_0..a_L, intercepts b_0..b_L."""

    breakpoints: np.ndarray
    slopes: np.ndarray
    intercepts: np.ndarray
    mean: float


def new_alphabet(symbols, probs):
    """Validate and build an :class:`Alphabet`.

    Symbols are sorted ascending (probabilities permuted in lockstep).
    Probabilities must be positive and sum to 1 within ``PROB_SUM_TOL``;
    they are renormalized after the check so downstream identities hold
    to machine precision.
    """
    symbols = np.asarray(symbols, dtype=np.float64).ravel()
    probs = np.asarray(probs, dtype=np.float64).ravel()
    if symbols.size == 0:
        raise ValueError("alphabet needs at least one symbol")
    if symbols.size != probs.size:
        raise ValueError("symbols and probs must have the same length")
    if not np.all(np.isfinite(symbols)) or not np.all(np.isfinite(probs)):
        raise ValueError("alphabet entries must be finite")
    order = np.argsort(symbols, kind="stable")
    symbols = symbols[order]
    probs = probs[order]
    if np.any(np.diff(symbols) <= 0):
        raise ValueError("alphabet symbols must be distinct")
    if np.any(probs <= 0):
        raise ValueError("every symbol probability must be positive")
    total = probs.sum()
    if abs(total - 1.0) > PROB_SUM_TOL:
        raise ValueError(f"probabilities sum to {total:.12g}, expected 1")
    probs = probs / total
    symbols.setflags(write=False)
    probs.setflags(write=False)
    return Alphabet(symbols=symbols, probs=probs)


def parse_alphabet(text):
    """Parse comma-separated ``symbol:prob`` pairs, e.g. ``0:0.5,1:0.5``."""
    pairs = [item for item in text.split(",") if item.strip()]
    if not pairs:
        raise ValueError("empty alphabet spec")
    symbols, probs = [], []
    for item in pairs:
        head, sep, tail = item.partition(":")
        if not sep:
            raise ValueError(f"bad alphabet entry {item!r}, expected symbol:prob")
        try:
            symbols.append(float(head))
            probs.append(float(tail))
        except ValueError:
            raise ValueError(f"bad alphabet entry {item!r}") from None
    return new_alphabet(symbols, probs)


def mean(alphabet):
    """Probability-weighted mean of the symbols."""
    return float(alphabet.probs @ alphabet.symbols)


def build_objective(alphabet):
    """Slopes/intercepts of the piecewise-linear cost for `alphabet`."""
    r = alphabet.symbols
    p = alphabet.probs
    rbar = mean(alphabet)
    below = np.cumsum(p)                 # sum_{j<=i} p_j
    below_r = np.cumsum(p * r)           # sum_{j<=i} p_j r_j
    slopes = np.empty(r.size + 1)
    intercepts = np.empty(r.size + 1)
    slopes[0], intercepts[0] = -1.0, rbar
    slopes[-1], intercepts[-1] = 1.0, -rbar
    # interior pieces i = 1..L-1
    slopes[1:-1] = below[:-1] - (1.0 - below[:-1])
    intercepts[1:-1] = -below_r[:-1] + (below_r[-1] - below_r[:-1])
    for arr in (slopes, intercepts):
        arr.setflags(write=False)
    return PiecewiseLinearObjective(
        breakpoints=r, slopes=slopes, intercepts=intercepts, mean=rbar
    )


def eval_L(objective, t):
    """Per-coordinate cost L(t) = max_i (a_i t + b_i); t scalar or array."""
    t = np.asarray(t, dtype=np.float64)
    vals = t[..., None] * objective.slopes + objective.intercepts
    out = vals.max(axis=-1)
    return float(out) if out.ndim == 0 else out


def eval_F(objective, z):
    """Total cost F(z) = sum_n L(z_n)."""
    z = np.asarray(z, dtype=np.float64)
    return float(np.sum(eval_L(objective, z)))


def prox_L(objective, lam, v):
    """Exact proximal operator: argmin_t  lam*L(t) + (t - v)^2 / 2.

    Closed form by breakpoint search: the map v -> t* is piecewise linear
    with 2L+1 pieces; t* = r_i wherever v falls in the flat interval
    [r_i + lam*a_{i-1}, r_i + lam*a_i], and t* = v - lam*a_i on the image
    of segment i otherwise.  Monotone nondecreasing and 1-Lipschitz in v.
    `v` may be a scalar or an ndarray (applied elementwise).
    """
    if not lam > 0:
        raise ValueError("lam must be positive")
    v = np.asarray(v, dtype=np.float64)
    r = objective.breakpoints
    a = objective.slopes
    # Interleaved knots: [r_1+lam*a_0, r_1+lam*a_1, r_2+lam*a_1, ...]
    edges = np.empty(2 * r.size)
    edges[0::2] = r + lam * a[:-1]
    edges[1::2] = r + lam * a[1:]
    idx = np.searchsorted(edges, v, side="left")
    on_break = (idx % 2) == 1
    out = np.where(on_break, r[np.minimum(idx // 2, r.size - 1)],
                   v - lam * a[np.minimum(idx // 2, a.size - 1)])
    return float(out) if out.ndim == 0 else out


def round_to_alphabet(alphabet, z):
    """Map each entry of `z` to the nearest symbol (ties to the smaller)."""
    z = np.asarray(z, dtype=np.float64)
    r = alphabet.symbols
    mids = (r[:-1] + r[1:]) / 2.0
    idx = np.searchsorted(mids, z, side="left")
    out = r[idx]
    return float(out) if out.ndim == 0 else out


def difference_set(alphabet):
    """Sorted, deduplicated pairwise differences r_i - r_j (contains 0)."""
    r = alphabet.symbols
    return np.unique(np.subtract.outer(r, r).ravel())
