"""Deterministic, platform-independent random numbers.

Every random draw in this package flows through SplitMix64, a counter-based
64-bit generator (Steele, Lea & Flood's mixing function): output i is a pure
function of (seed, i), so a given seed reproduces bit-identical streams on
any platform and numpy version.  Normal deviates use the Box-Muller
transform on top of the uniform stream.  This is generator "splitmix64-bm/1";
changing any constant here is a breaking change for recorded experiments.
"""

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX_A = np.uint64(0xBF58476D1CE4E5B9)
_MIX_B = np.uint64(0x94D049BB133111EB)
_U64 = 0xFFFFFFFFFFFFFFFF
_INV_2_53 = float(2.0 ** -53)


def _mix(x):
    """SplitMix64 finalizer on a uint64 ndarray (wraps mod 2^64)."""
    x = (x ^ (x >> np.uint64(30))) * _MIX_A
    x = (x ^ (x >> np.uint64(27))) * _MIX_B
    return x ^ (x >> np.uint64(31))


def raw(seed, count, offset=0):
    """`count` raw 64-bit words for the given seed, starting at `offset`."""
    counters = np.arange(offset, offset + count, dtype=np.uint64)
    with np.errstate(over="ignore"):
        state = np.uint64(seed & _U64) + (counters + np.uint64(1)) * _GOLDEN
        return _mix(state)


def uniforms(seed, count, offset=0):
    """i.i.d. uniforms on [0, 1) with 53-bit resolution."""
    return (raw(seed, count, offset) >> np.uint64(11)).astype(np.float64) * _INV_2_53


def normals(seed, count):
    """i.i.d. standard normal deviates via Box-Muller."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    pairs = (count + 1) // 2
    words = raw(seed, 2 * pairs)
    # u1 in (0, 1] so log() is finite; u2 in [0, 1).
    u1 = ((words[:pairs] >> np.uint64(11)).astype(np.float64) + 1.0) * _INV_2_53
    u2 = (words[pairs:] >> np.uint64(11)).astype(np.float64) * _INV_2_53
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    out = np.empty(2 * pairs)
    out[0::2] = radius * np.cos(angle)
    out[1::2] = radius * np.sin(angle)
    return out[:count]


def sample_indices(total, keep, seed):
    """Sorted `keep`-subset of range(total), uniform without replacement.

    Fisher-Yates prefix shuffle driven by the raw word stream.
    """
    if not 1 <= keep <= total:
        raise ValueError(f"keep must be in [1, {total}], got {keep}")
    pool = np.arange(total, dtype=np.int64)
    words = raw(seed, keep)
    for i in range(keep):
        j = i + int(words[i] % np.uint64(total - i))
        pool[i], pool[j] = pool[j], pool[i]
    chosen = pool[:keep]
    chosen.sort()
    return chosen


def choice(values, probs, count, seed):
    """`count` i.i.d. draws from a finite distribution over `values`.

    Zero-probability entries are allowed (they are never drawn).
    """
    values = np.asarray(values)
    probs = np.asarray(probs, dtype=np.float64)
    if probs.shape != (values.size,) or np.any(probs < 0):
        raise ValueError("probs must be nonnegative, one per value")
    edges = np.cumsum(probs)
    if not np.isclose(edges[-1], 1.0, atol=1e-9):
        raise ValueError("probabilities must sum to 1")
    edges /= edges[-1]
    u = uniforms(seed, count)
    idx = np.searchsorted(edges, u, side="right")
    return values[np.minimum(idx, values.size - 1)]


def derive_seed(master, *parts):
    """Stable hash of a master seed and integer labels into a child seed.

    Child streams for distinct label tuples are independent; inserting or
    removing unrelated labels elsewhere never changes an existing stream.
    """
    with np.errstate(over="ignore"):
        state = np.uint64(master & _U64)
        for part in parts:
            state = _mix((state ^ _mix(np.uint64(int(part) & _U64) + _GOLDEN)) + _GOLDEN)
        return int(state)
