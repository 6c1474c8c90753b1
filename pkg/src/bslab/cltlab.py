"""Triangular-array experiments: row sums, the Lindeberg statistic,
normality testing, and variance linearity in the horizon.

A row at size n splits the horizon t into n cells of length t/n; every cell
is an independent draw from the increment model, so row sums play the role
of the total log-return over [0, t]. The machinery measures, at desk scale,
whether row sums approach the normal law with variance per_unit_variance*t
and whether the Lindeberg tail sum vanishes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .increments import IncrementModel
from .normal import norm_cdf
from .rng import substream

# 1% asymptotic critical value for sqrt(m) * KS statistic
KS_ONE_PERCENT = 1.628
# verdict cutoffs for "lindeberg values decrease toward 0": the last ladder
# value must drop below half the first and below this fraction of the row
# variance
LINDEBERG_DECREASE_RATIO = 0.5
LINDEBERG_SMALL_FRACTION = 0.1

_CHUNK_ELEMENTS = 4_000_000


@dataclass(frozen=True)
class ArraySpec:
    """One triangular-array sampling configuration."""

    model: IncrementModel
    horizon: float
    rows: int
    samples: int
    seed: int

    def __post_init__(self) -> None:
        if not (self.horizon > 0.0 and math.isfinite(self.horizon)):
            raise ValueError(f"horizon must be positive, got {self.horizon}")
        if self.rows < 1:
            raise ValueError(f"rows must be >= 1, got {self.rows}")
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed}")


@dataclass(frozen=True)
class LindebergResult:
    """Monte Carlo estimate of the Lindeberg statistic, and the analytic
    value for model kinds that have one."""

    estimate: float
    std_error: float
    analytic: float | None

    @property
    def value(self) -> float:
        """The analytic value when available, the estimate otherwise."""
        return self.estimate if self.analytic is None else self.analytic


@dataclass(frozen=True)
class VarianceLinearityResult:
    slope: float
    intercept: float
    max_residual: float
    slope_std_error: float
    intercept_std_error: float
    horizons: tuple[float, ...]
    variances: tuple[float, ...]
    variance_std_errors: tuple[float, ...]


@dataclass(frozen=True)
class ConvergenceReport:
    """Per-ladder-entry statistics plus the overall verdict."""

    n_ladder: tuple[int, ...]
    ks_statistics: tuple[float, ...]
    lindeberg_values: tuple[float, ...]
    max_cell_variance: tuple[float, ...]
    verdict: str
    ks_threshold: float


def sample_row_sum(spec: ArraySpec) -> np.ndarray:
    """Sums of spec.rows independent increments over [0, horizon/rows].

    Sample j consumes stream indices [j*rows, (j+1)*rows), so the output is
    a pure function of spec (seed included) no matter how sampling is
    chunked internally.
    """
    h = spec.horizon / spec.rows
    out = np.empty(spec.samples)
    rows_per_chunk = max(1, _CHUNK_ELEMENTS // spec.rows)
    for j0 in range(0, spec.samples, rows_per_chunk):
        j1 = min(j0 + rows_per_chunk, spec.samples)
        draws = spec.model.sample(h, spec.seed, j0 * spec.rows, (j1 - j0) * spec.rows)
        out[j0:j1] = draws.reshape(j1 - j0, spec.rows).sum(axis=1)
    return out


def max_cell_variance(model: IncrementModel, n: int, horizon: float) -> float:
    """Largest per-cell variance in a size-n row: identical cells make this
    exactly per_unit_variance * horizon / n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return model.variance(horizon / n)


def lindeberg_statistic(model: IncrementModel, n: int, horizon: float, epsilon: float,
                        samples: int, seed: int) -> LindebergResult:
    """n * E[Z^2; |Z| > epsilon] for one cell Z of a size-n row.

    Under stationarity this single-cell form equals the full row sum of
    truncated second moments. The Monte Carlo estimate always comes back;
    kinds with closed-form tails also report the analytic value.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if samples < 2:
        raise ValueError(f"samples must be >= 2, got {samples}")
    h = horizon / n

    w = np.empty(samples)
    for lo in range(0, samples, _CHUNK_ELEMENTS):
        hi = min(lo + _CHUNK_ELEMENTS, samples)
        z = model.sample(h, seed, lo, hi - lo)
        w[lo:hi] = np.where(np.abs(z) > epsilon, z * z, 0.0)

    estimate = n * float(w.mean())
    std_error = n * float(w.std(ddof=1)) / math.sqrt(samples)
    tail = model.lindeberg_tail(h, epsilon)
    analytic = None if tail is None else n * tail
    return LindebergResult(estimate=estimate, std_error=std_error, analytic=analytic)


def ks_normal_test(samples, mean: float, std_dev: float) -> tuple[float, float]:
    """Kolmogorov-Smirnov statistic of samples against Normal(mean, std_dev^2).

    Returns (statistic, threshold) where threshold is the asymptotic 1%
    critical value 1.628/sqrt(m). Requires at least 100 samples; below that
    the asymptotic threshold is unreliable.
    """
    x = np.asarray(samples, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("samples must be one-dimensional")
    m = x.size
    if m < 100:
        raise ValueError(f"need at least 100 samples for the asymptotic threshold, got {m}")
    if not (std_dev > 0.0 and math.isfinite(std_dev)):
        raise ValueError(f"std_dev must be positive, got {std_dev}")

    z = np.sort((x - mean) / std_dev)
    ref = norm_cdf(z)
    i = np.arange(1, m + 1, dtype=np.float64)
    d_plus = float(np.max(i / m - ref))
    d_minus = float(np.max(ref - (i - 1.0) / m))
    return max(d_plus, d_minus), KS_ONE_PERCENT / math.sqrt(m)


def estimate_variance(model: IncrementModel, horizon: float, samples: int, seed: int,
                      rows: int = 16) -> tuple[float, float]:
    """Sample variance of simulated sums over [0, horizon], with a
    model-free standard error from the empirical fourth central moment."""
    sums = sample_row_sum(ArraySpec(model, horizon, rows, samples, seed))
    v = float(sums.var(ddof=1))
    centered = sums - sums.mean()
    m4 = float(np.mean(centered ** 4))
    return v, math.sqrt(max(m4 - v * v, 0.0) / samples)


def variance_linearity_check(model: IncrementModel, horizons, samples: int,
                             seed: int) -> VarianceLinearityResult:
    """Least-squares fit of estimated Var[Y_t] against t.

    For a law with stationary independent increments the fit must give
    slope per_unit_variance and intercept 0; standard errors propagate the
    per-horizon variance estimator noise through the fit weights.
    """
    ts = [float(t) for t in horizons]
    if len(ts) < 3 or len(set(ts)) < 3:
        raise ValueError("need at least 3 distinct horizons")
    if any(t <= 0.0 for t in ts):
        raise ValueError("horizons must be positive")

    est = [estimate_variance(model, t, samples, substream(seed, k)) for k, t in enumerate(ts)]
    v = np.array([e[0] for e in est])
    se = np.array([e[1] for e in est])
    t_arr = np.array(ts)

    t_bar = t_arr.mean()
    sxx = float(np.sum((t_arr - t_bar) ** 2))
    c = (t_arr - t_bar) / sxx
    slope = float(np.sum(c * v))
    intercept = float(v.mean() - slope * t_bar)
    slope_se = math.sqrt(float(np.sum((c * se) ** 2)))
    intercept_se = math.sqrt(float(np.sum(((1.0 / len(ts) - t_bar * c) * se) ** 2)))
    residuals = v - (slope * t_arr + intercept)
    return VarianceLinearityResult(
        slope=slope, intercept=intercept, max_residual=float(np.max(np.abs(residuals))),
        slope_std_error=slope_se, intercept_std_error=intercept_se,
        horizons=tuple(ts), variances=tuple(float(x) for x in v),
        variance_std_errors=tuple(float(x) for x in se))


def _lindeberg_decreasing(values: tuple[float, ...], row_variance: float) -> bool:
    first, last = values[0], values[-1]
    return last <= LINDEBERG_DECREASE_RATIO * first and \
        last <= LINDEBERG_SMALL_FRACTION * row_variance


def run_convergence_experiment(spec: ArraySpec, n_ladder, epsilon: float) -> ConvergenceReport:
    """Sample row sums at every ladder size and test them against the
    normal law with the row variance.

    Verdict: normal_limit when the largest-n KS statistic is below the 1%
    threshold and the Lindeberg values decrease toward 0 (last value below
    half the first and below 0.1 * row variance); non_normal_limit when the
    KS statistic is still at or above the threshold at the largest n;
    inconclusive otherwise. Each ladder entry samples from its own derived
    stream, so the report is a pure function of (spec, n_ladder, epsilon).
    """
    ladder = [int(n) for n in n_ladder]
    if len(ladder) < 1:
        raise ValueError("n_ladder must not be empty")
    if any(n < 1 for n in ladder):
        raise ValueError("ladder entries must be >= 1")
    if any(b <= a for a, b in zip(ladder, ladder[1:])):
        raise ValueError(f"n_ladder must be strictly increasing, got {ladder}")

    row_variance = spec.model.variance(spec.horizon)
    row_std = math.sqrt(row_variance)

    ks_stats: list[float] = []
    lindeberg_vals: list[float] = []
    cell_vars: list[float] = []
    threshold = math.nan
    for k, n in enumerate(ladder):
        stream = substream(spec.seed, k)
        sums = sample_row_sum(replace(spec, rows=n, seed=stream))
        stat, threshold = ks_normal_test(sums, 0.0, row_std)
        ks_stats.append(stat)
        lind = lindeberg_statistic(spec.model, n, spec.horizon, epsilon,
                                   spec.samples, substream(stream, 1))
        lindeberg_vals.append(lind.value)
        cell_vars.append(max_cell_variance(spec.model, n, spec.horizon))

    if ks_stats[-1] < threshold and _lindeberg_decreasing(tuple(lindeberg_vals), row_variance):
        verdict = "normal_limit"
    elif ks_stats[-1] >= threshold:
        verdict = "non_normal_limit"
    else:
        verdict = "inconclusive"

    return ConvergenceReport(
        n_ladder=tuple(ladder), ks_statistics=tuple(ks_stats),
        lindeberg_values=tuple(lindeberg_vals), max_cell_variance=tuple(cell_vars),
        verdict=verdict, ks_threshold=threshold)
