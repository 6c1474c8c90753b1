"""Monte Carlo call pricer under the risk-neutral lognormal law.

Terminal log-returns are sampled with the counter-based streams from
bslab.rng, so draw i depends only on (seed, i). The payoff array is always
assembled over the full index range and reduced once, which makes the
result bit-identical for any batch_size: batches only bound how many draws
are materialized at a time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pricing import (NormalParams, OptionSpec, PriceResult, _degenerate_d,
                      d_plus_minus, intrinsic_forward_value, risk_neutral_params)
from .rng import normal_stream

_DEFAULT_BATCH = 65536


@dataclass(frozen=True)
class McConfig:
    paths: int
    seed: int
    batch_size: int | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.paths, (int, np.integer)) or isinstance(self.paths, bool):
            raise ValueError(f"paths must be an integer, got {self.paths!r}")
        if self.paths < 2:
            raise ValueError(f"paths must be >= 2 to report a standard error, got {self.paths}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed}")
        if self.batch_size is not None:
            if self.batch_size < 1:
                raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
            if self.batch_size > self.paths:
                raise ValueError(
                    f"batch_size {self.batch_size} must not exceed paths {self.paths}")

    @property
    def effective_batch_size(self) -> int:
        if self.batch_size is not None:
            return self.batch_size
        return min(self.paths, _DEFAULT_BATCH)


def _terminal_log_returns(params: NormalParams, cfg: McConfig, out: np.ndarray) -> None:
    batch = cfg.effective_batch_size
    for lo in range(0, cfg.paths, batch):
        hi = min(lo + batch, cfg.paths)
        z = normal_stream(cfg.seed, lo, hi - lo)
        out[lo:hi] = params.mean + params.std_dev * z


def mc_price(spec: OptionSpec, cfg: McConfig) -> PriceResult:
    """Average discounted payoff over cfg.paths sampled terminal prices.

    std_error is the sample standard deviation over sqrt(paths). With zero
    volatility the law is a point mass and the exact deterministic value is
    returned with std_error 0.
    """
    if spec.vol_sqrt_t == 0.0:
        d_lim = _degenerate_d(spec)
        return PriceResult(price=intrinsic_forward_value(spec), d_plus=d_lim, d_minus=d_lim,
                           method="monte_carlo", std_error=0.0,
                           detail={"paths": cfg.paths, "seed": cfg.seed, "degenerate": True})

    params = risk_neutral_params(spec)
    y = np.empty(cfg.paths)
    _terminal_log_returns(params, cfg, y)
    disc = math.exp(-spec.rate * spec.expiry)
    payoff = disc * np.maximum(spec.spot * np.exp(y) - spec.strike, 0.0)

    estimate = float(payoff.mean())
    std_error = float(payoff.std(ddof=1)) / math.sqrt(cfg.paths)
    dp, dm = d_plus_minus(spec)
    return PriceResult(price=max(estimate, 0.0), d_plus=dp, d_minus=dm,
                       method="monte_carlo", std_error=std_error,
                       detail={"paths": cfg.paths, "seed": cfg.seed})


def mc_forward_check(spec: OptionSpec, cfg: McConfig) -> float:
    """Monte Carlo estimate of E[X_t] / (spot * e^{rt}).

    Under the risk-neutral law the ratio is exactly 1; the estimator's
    standard error is sqrt((e^{vol^2 t} - 1)/paths). Zero volatility returns
    exactly 1.0.
    """
    if spec.vol_sqrt_t == 0.0:
        return 1.0
    params = risk_neutral_params(spec)
    y = np.empty(cfg.paths)
    _terminal_log_returns(params, cfg, y)
    return float(np.exp(y - spec.rate * spec.expiry).mean())
