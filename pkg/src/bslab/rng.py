"""Counter-based random streams: each draw is a pure function of (seed, index).

The generator is SplitMix64 evaluated at an arbitrary counter position:
draw i mixes the state seed + (i+1)*golden_gamma through the 64-bit
finalizer. Because there is no sequential state, any batch decomposition
over the index range produces bit-identical draws, which is what makes
Monte Carlo results independent of batch size or parallelism.
"""

from __future__ import annotations

import numpy as np

from .normal import norm_cdf_inv

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_STREAM_SALT = np.uint64(0xD1B54A32D192ED03)
_U64 = np.uint64(0xFFFFFFFFFFFFFFFF)
_INV_2_53 = float(2.0 ** -53)


def _mix64(x: np.ndarray) -> np.ndarray:
    x = x ^ (x >> np.uint64(30))
    x = x * _MIX1
    x = x ^ (x >> np.uint64(27))
    x = x * _MIX2
    return x ^ (x >> np.uint64(31))


def _check_seed(seed: int) -> np.uint64:
    if not isinstance(seed, (int, np.integer)) or isinstance(seed, bool):
        raise ValueError(f"seed must be an integer, got {seed!r}")
    if not 0 <= int(seed) < 2 ** 64:
        raise ValueError(f"seed must fit in 64 unsigned bits, got {seed}")
    return np.uint64(seed)


def uniform_stream(seed: int, start: int, count: int) -> np.ndarray:
    """Uniforms on the open interval (0, 1) for indices start..start+count-1."""
    s = _check_seed(seed)
    if start < 0 or count < 0:
        raise ValueError("start and count must be nonnegative")
    with np.errstate(over="ignore"):
        idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
        bits = _mix64((s + idx * _GAMMA) & _U64)
    # top 53 bits, centered in the bin: never exactly 0 or 1
    return ((bits >> np.uint64(11)).astype(np.float64) + 0.5) * _INV_2_53


def normal_stream(seed: int, start: int, count: int) -> np.ndarray:
    """Standard normal draws by inverse-CDF transform of uniform_stream."""
    if count == 0:
        return np.empty(0)
    return norm_cdf_inv(uniform_stream(seed, start, count))


def poisson_stream(seed: int, start: int, count: int, mean: float) -> np.ndarray:
    """Poisson(mean) draws by inverse transform, one uniform per index.

    Intended for small and moderate means (the loop runs to the largest
    sampled value); mean must stay below ~700 so exp(-mean) does not
    underflow.
    """
    if not 0.0 < mean < 700.0:
        raise ValueError(f"poisson mean must be in (0, 700), got {mean}")
    u = uniform_stream(seed, start, count)
    out = np.zeros(count)
    pmf = np.exp(-mean)
    cdf = pmf
    k = 0
    cap = int(mean + 40.0 * np.sqrt(mean) + 200.0)
    active = u > cdf
    while active.any():
        k += 1
        if k > cap:
            raise RuntimeError("poisson inverse transform failed to terminate")
        pmf *= mean / k
        cdf += pmf
        out += active
        active = u > cdf
    return out


def substream(seed: int, stream: int) -> int:
    """Derive an independent stream seed from (seed, stream index)."""
    s = _check_seed(seed)
    if stream < 0:
        raise ValueError("stream index must be nonnegative")
    with np.errstate(over="ignore"):
        salted = (s + np.uint64(1)) * _STREAM_SALT + np.uint64(stream) * _GAMMA
        return int(_mix64(np.atleast_1d(salted & _U64))[0])
