"""European call pricing: closed form, lognormal payoff expectation, and the
no-arbitrage identities tying them together.

The closed form is C = spot*N(d+) - strike*exp(-rate*expiry)*N(d-). When
volatility*sqrt(expiry) is zero the formula degenerates (it divides by that
quantity), and the price is defined by its continuous limit
max(spot - strike*exp(-rate*expiry), 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .normal import norm_cdf

_METHODS = ("closed_form", "tree", "monte_carlo")


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value}")
    return value


@dataclass(frozen=True)
class OptionSpec:
    """Market and contract parameters for one European call.

    spot and strike are in currency units; rate is the continuously
    compounded annual risk-free rate; expiry is in years; volatility is the
    annualized standard deviation of the log-return.
    """

    spot: float
    strike: float
    rate: float
    expiry: float
    volatility: float

    def __post_init__(self) -> None:
        for name in ("spot", "strike", "rate", "expiry", "volatility"):
            object.__setattr__(self, name, _require_finite(name, getattr(self, name)))
        if self.spot <= 0.0:
            raise ValueError(f"spot must be positive, got {self.spot}")
        if self.strike <= 0.0:
            raise ValueError(f"strike must be positive, got {self.strike}")
        if self.expiry < 0.0:
            raise ValueError(f"expiry must be nonnegative, got {self.expiry}")
        if self.volatility < 0.0:
            raise ValueError(f"volatility must be nonnegative, got {self.volatility}")

    @property
    def vol_sqrt_t(self) -> float:
        return self.volatility * math.sqrt(self.expiry)


@dataclass(frozen=True)
class NormalParams:
    """Mean and standard deviation of the log-return law."""

    mean: float
    std_dev: float

    def __post_init__(self) -> None:
        _require_finite("mean", self.mean)
        _require_finite("std_dev", self.std_dev)
        if self.std_dev < 0.0:
            raise ValueError(f"std_dev must be nonnegative, got {self.std_dev}")


@dataclass(frozen=True)
class PriceResult:
    """A price plus diagnostics; std_error only for stochastic methods."""

    price: float
    d_plus: float
    d_minus: float
    method: str
    std_error: float | None = None
    detail: dict | None = None

    def __post_init__(self) -> None:
        if self.method not in _METHODS:
            raise ValueError(f"method must be one of {_METHODS}, got {self.method!r}")
        if self.price < 0.0:
            raise ValueError(f"price must be nonnegative, got {self.price}")
        if self.std_error is not None and self.std_error < 0.0:
            raise ValueError(f"std_error must be nonnegative, got {self.std_error}")


class DegenerateVolatilityError(ValueError):
    """volatility*sqrt(expiry) is zero, so d+- are not defined."""


def _log_forward_moneyness(spec: OptionSpec) -> float:
    # log(e^{rt} * spot / strike), written to avoid the exp/log round trip
    return math.log(spec.spot / spec.strike) + spec.rate * spec.expiry


def d_plus_minus(spec: OptionSpec) -> tuple[float, float]:
    """d+- = log(e^{rt}*spot/strike)/(vol*sqrt(t)) +- vol*sqrt(t)/2."""
    s = spec.vol_sqrt_t
    if s == 0.0:
        raise DegenerateVolatilityError(
            "volatility*sqrt(expiry) is zero; price via the deterministic limit instead")
    m = _log_forward_moneyness(spec)
    return m / s + 0.5 * s, m / s - 0.5 * s


def _degenerate_d(spec: OptionSpec) -> float:
    # limit of d+- as vol*sqrt(t) -> 0, used only to fill diagnostics
    m = _log_forward_moneyness(spec)
    if m > 0.0:
        return math.inf
    if m < 0.0:
        return -math.inf
    return 0.0


def intrinsic_forward_value(spec: OptionSpec) -> float:
    """Deterministic-limit price max(spot - strike*e^{-rt}, 0)."""
    return max(spec.spot - spec.strike * math.exp(-spec.rate * spec.expiry), 0.0)


def bs_call_price(spec: OptionSpec) -> PriceResult:
    """Closed-form call price; degenerates to the deterministic limit when
    volatility*sqrt(expiry) is zero."""
    if spec.vol_sqrt_t == 0.0:
        d = _degenerate_d(spec)
        return PriceResult(price=intrinsic_forward_value(spec), d_plus=d, d_minus=d,
                           method="closed_form")
    dp, dm = d_plus_minus(spec)
    raw = (spec.spot * norm_cdf(dp)
           - spec.strike * math.exp(-spec.rate * spec.expiry) * norm_cdf(dm))
    # deep out-of-the-money rounding can leave a tiny negative difference
    return PriceResult(price=max(raw, 0.0), d_plus=dp, d_minus=dm, method="closed_form")


def risk_neutral_params(spec: OptionSpec) -> NormalParams:
    """The unique normal log-return law with variance vol^2*t and
    E[e^Y] = e^{rate*t}: mean (rate - vol^2/2)*t, std vol*sqrt(t)."""
    return NormalParams(mean=(spec.rate - 0.5 * spec.volatility ** 2) * spec.expiry,
                        std_dev=spec.vol_sqrt_t)


def lognormal_h_plus_minus(params: NormalParams, threshold: float) -> tuple[float, float]:
    """h+- = [log(E[e^Y]/M) +- std^2/2]/std for threshold M, in the
    algebraically reduced form (mean + std^2 - log M)/std, (mean - log M)/std."""
    if threshold <= 0.0 or not math.isfinite(threshold):
        raise ValueError(f"threshold must be positive and finite, got {threshold}")
    sd = params.std_dev
    if sd == 0.0:
        raise ValueError("std_dev must be positive; handle the deterministic case in the caller")
    log_m = math.log(threshold)
    return (params.mean + sd * sd - log_m) / sd, (params.mean - log_m) / sd


def lognormal_call_expectation(params: NormalParams, threshold: float) -> float:
    """E[max(e^Y - M, 0)] = E[e^Y]*N(h+) - M*N(h-) for normal Y.

    E[e^Y] = exp(mean + std^2/2) is the lognormal moment identity.
    """
    hp, hm = lognormal_h_plus_minus(params, threshold)
    growth = math.exp(params.mean + 0.5 * params.std_dev ** 2)
    return growth * norm_cdf(hp) - threshold * norm_cdf(hm)


def discount(value: float, rate: float, t: float) -> float:
    """Present value of a time-t amount under continuous compounding."""
    if t < 0.0:
        raise ValueError(f"t must be nonnegative, got {t}")
    return value * math.exp(-rate * t)
