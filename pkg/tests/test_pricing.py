import math

import numpy as np
import pytest

from bslab.normal import norm_pdf
from bslab.pricing import (DegenerateVolatilityError, NormalParams, OptionSpec, PriceResult,
                           bs_call_price, d_plus_minus, discount, intrinsic_forward_value,
                           lognormal_call_expectation, lognormal_h_plus_minus,
                           risk_neutral_params)
from bslab.quadrature import QuadratureSettings, integrate

EXAMPLE = OptionSpec(spot=50.0, strike=52.0, rate=0.04, expiry=1.0, volatility=0.15)

# frozen from a 50-digit evaluation of the closed form, confirmed by the
# quadrature oracle below to 4e-50
EXAMPLE_D_PLUS = 0.08019524564479136
EXAMPLE_D_MINUS = -0.06980475435520864
EXAMPLE_PRICE = 3.0076149434583624

# frozen 50-digit re-evaluations of the d+- formula for an unrelated spec
SECOND_D_PLUS = 0.6498807031968213
SECOND_D_MINUS = 0.4377486688408570

# frozen quadrature values of E[max(e^Y - M, 0)]
PAYOFF_EXPECTATION_0_1_1 = 0.8871429788350048
PAYOFF_EXPECTATION_002_015_104 = 0.057888841437092745


def quadrature_call_expectation(mean: float, std_dev: float, threshold: float) -> float:
    """Independent oracle: integral of (e^y - M) against the normal density.

    The e^y factor is folded into the exponent so the integrand underflows
    to 0 (instead of overflowing) where the density has already vanished.
    """
    norm = std_dev * math.sqrt(2.0 * math.pi)

    def integrand(y: float) -> float:
        z = (y - mean) / std_dev
        return math.exp(y - 0.5 * z * z) / norm - threshold * norm_pdf(z) / std_dev

    return integrate(integrand, math.log(threshold), math.inf,
                     QuadratureSettings(abs_tol=1e-12, rel_tol=1e-12, max_subdivisions=2000))


def random_specs(count: int, seed: int) -> list[OptionSpec]:
    rng = np.random.default_rng(seed)
    specs = []
    for _ in range(count):
        specs.append(OptionSpec(
            spot=float(np.exp(rng.uniform(math.log(1.0), math.log(200.0)))),
            strike=float(np.exp(rng.uniform(math.log(1.0), math.log(200.0)))),
            rate=float(rng.uniform(-0.05, 0.15)),
            expiry=float(rng.uniform(0.05, 3.0)),
            volatility=float(rng.uniform(0.01, 0.8)),
        ))
    return specs


class TestDPlusMinus:
    def test_worked_example(self):
        dp, dm = d_plus_minus(EXAMPLE)
        assert dp == pytest.approx(0.0802, abs=5e-4)
        assert dm == pytest.approx(-0.0698, abs=5e-4)
        assert dp == pytest.approx(EXAMPLE_D_PLUS, abs=1e-12)
        assert dm == pytest.approx(EXAMPLE_D_MINUS, abs=1e-12)

    def test_at_the_forward_strike(self):
        spec = OptionSpec(50.0, 50.0 * math.exp(0.04), 0.04, 1.0, 0.15)
        dp, dm = d_plus_minus(spec)
        assert dp == pytest.approx(0.075, abs=1e-12)
        assert dm == pytest.approx(-0.075, abs=1e-12)

    def test_second_spec_against_recorded_evaluation(self):
        dp, dm = d_plus_minus(OptionSpec(100.0, 90.0, 0.02, 0.5, 0.3))
        assert dp == pytest.approx(SECOND_D_PLUS, abs=1e-12)
        assert dm == pytest.approx(SECOND_D_MINUS, abs=1e-12)

    def test_spread_is_vol_sqrt_t(self):
        for spec in random_specs(200, 21):
            dp, dm = d_plus_minus(spec)
            assert abs((dp - dm) - spec.vol_sqrt_t) <= 1e-12

    def test_degenerate_raises(self):
        with pytest.raises(DegenerateVolatilityError):
            d_plus_minus(OptionSpec(50.0, 52.0, 0.04, 1.0, 0.0))
        with pytest.raises(DegenerateVolatilityError):
            d_plus_minus(OptionSpec(50.0, 52.0, 0.04, 0.0, 0.15))


class TestCallPrice:
    def test_golden_example(self):
        result = bs_call_price(EXAMPLE)
        assert result.price == pytest.approx(3.04, abs=0.05)
        assert result.price == pytest.approx(EXAMPLE_PRICE, abs=1e-8)
        assert result.method == "closed_form"
        assert result.std_error is None

    def test_example_against_live_quadrature_oracle(self):
        params = risk_neutral_params(EXAMPLE)
        expectation = quadrature_call_expectation(params.mean, params.std_dev,
                                                  EXAMPLE.strike / EXAMPLE.spot)
        oracle = math.exp(-0.04) * 50.0 * expectation
        assert bs_call_price(EXAMPLE).price == pytest.approx(oracle, abs=1e-8)

    def test_vanishing_strike_tends_to_spot(self):
        spec = OptionSpec(50.0, 1e-12, 0.04, 1.0, 0.15)
        assert bs_call_price(spec).price == pytest.approx(50.0, abs=1e-9)

    def test_zero_volatility_limit(self):
        spec = OptionSpec(50.0, 52.0, 0.04, 1.0, 0.0)
        result = bs_call_price(spec)
        assert result.price == max(50.0 - 52.0 * math.exp(-0.04), 0.0)
        assert result.price == intrinsic_forward_value(spec)
        itm = bs_call_price(OptionSpec(60.0, 52.0, 0.04, 1.0, 0.0))
        assert itm.price == 60.0 - 52.0 * math.exp(-0.04)
        assert itm.d_plus == math.inf and itm.d_minus == math.inf

    def test_zero_expiry_is_payoff(self):
        assert bs_call_price(OptionSpec(60.0, 52.0, 0.04, 0.0, 0.15)).price == 8.0
        assert bs_call_price(OptionSpec(40.0, 52.0, 0.04, 0.0, 0.15)).price == 0.0

    @pytest.mark.parametrize("field,kwargs", [
        ("spot", dict(spot=-5.0)),
        ("spot", dict(spot=math.nan)),
        ("strike", dict(strike=0.0)),
        ("expiry", dict(expiry=-1.0)),
        ("volatility", dict(volatility=-0.1)),
        ("rate", dict(rate=math.inf)),
    ])
    def test_validation_names_offending_field(self, field, kwargs):
        values = dict(spot=50.0, strike=52.0, rate=0.04, expiry=1.0, volatility=0.15)
        values.update(kwargs)
        with pytest.raises(ValueError, match=field):
            OptionSpec(**values)

    def test_no_arbitrage_bounds(self):
        for spec in random_specs(300, 77):
            price = bs_call_price(spec).price
            lower = intrinsic_forward_value(spec)
            assert lower - 1e-12 <= price <= spec.spot + 1e-12

    def test_monotone_in_strike_and_volatility(self):
        rng = np.random.default_rng(5)
        for _ in range(30):
            spot = float(rng.uniform(10.0, 150.0))
            rate = float(rng.uniform(-0.02, 0.1))
            expiry = float(rng.uniform(0.1, 2.0))
            vol = float(rng.uniform(0.05, 0.6))
            strikes = np.sort(rng.uniform(0.3 * spot, 2.5 * spot, size=6))
            prices = [bs_call_price(OptionSpec(spot, float(k), rate, expiry, vol)).price
                      for k in strikes]
            assert all(a >= b - 1e-12 for a, b in zip(prices, prices[1:]))
            vols = np.sort(rng.uniform(0.01, 0.9, size=6))
            vprices = [bs_call_price(OptionSpec(spot, spot, rate, expiry, float(v))).price
                       for v in vols]
            assert all(b >= a - 1e-12 for a, b in zip(vprices, vprices[1:]))


class TestPayoffExpectation:
    def test_vanishing_threshold_gives_lognormal_mean(self):
        value = lognormal_call_expectation(NormalParams(0.0, 1.0), 1e-15)
        assert value == pytest.approx(math.sqrt(math.e), rel=1e-12)

    def test_standard_case_frozen_and_live(self):
        value = lognormal_call_expectation(NormalParams(0.0, 1.0), 1.0)
        assert value == pytest.approx(PAYOFF_EXPECTATION_0_1_1, abs=1e-12)
        assert value == pytest.approx(quadrature_call_expectation(0.0, 1.0, 1.0), abs=1e-8)

    def test_market_like_case_matches_pricer(self):
        value = lognormal_call_expectation(NormalParams(0.02, 0.15), 1.04)
        assert value == pytest.approx(PAYOFF_EXPECTATION_002_015_104, abs=1e-12)
        assert value == pytest.approx(quadrature_call_expectation(0.02, 0.15, 1.04), abs=1e-8)
        # the matching contract: mean 0.02 = (r - vol^2/2)*t with vol 0.15, t 1
        rate = 0.02 + 0.5 * 0.15 ** 2
        spec = OptionSpec(1.0, 1.04, rate, 1.0, 0.15)
        assert bs_call_price(spec).price == pytest.approx(math.exp(-rate) * value, abs=1e-10)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            lognormal_call_expectation(NormalParams(0.0, 1.0), 0.0)
        with pytest.raises(ValueError):
            lognormal_call_expectation(NormalParams(0.0, 1.0), -2.0)
        with pytest.raises(ValueError):
            lognormal_call_expectation(NormalParams(0.0, 0.0), 1.0)


class TestRiskNeutralParams:
    def test_example_values(self):
        params = risk_neutral_params(EXAMPLE)
        assert params.mean == pytest.approx(0.02875, abs=1e-15)
        assert params.std_dev == pytest.approx(0.15, abs=1e-15)

    def test_zero_volatility(self):
        params = risk_neutral_params(OptionSpec(50.0, 52.0, 0.04, 2.0, 0.0))
        assert params.mean == 0.08 and params.std_dev == 0.0

    def test_growth_identity_moment_and_quadrature(self):
        for spec in random_specs(50, 31):
            params = risk_neutral_params(spec)
            growth = math.exp(params.mean + 0.5 * params.std_dev ** 2)
            assert growth == pytest.approx(math.exp(spec.rate * spec.expiry), rel=1e-10)
        params = risk_neutral_params(EXAMPLE)
        norm = params.std_dev * math.sqrt(2.0 * math.pi)
        quad = integrate(
            lambda y: math.exp(y - 0.5 * ((y - params.mean) / params.std_dev) ** 2) / norm,
            -math.inf, math.inf)
        assert quad == pytest.approx(math.exp(0.04), rel=1e-8)


class TestDiscount:
    def test_example_factor(self):
        value = discount(52.0, 0.04, 1.0)
        assert value == 52.0 * math.exp(-0.04)
        assert value == pytest.approx(49.961, abs=5e-4)

    def test_zero_horizon_identity(self):
        assert discount(123.45, 0.07, 0.0) == 123.45

    def test_plain_exponential(self):
        assert discount(100.0, 0.1, 2.0) == 100.0 * math.exp(-0.2)

    def test_negative_horizon_rejected(self):
        with pytest.raises(ValueError):
            discount(1.0, 0.05, -0.5)


class TestPipelineIdentity:
    def test_price_decomposes_through_payoff_expectation(self):
        for spec in random_specs(1000, 2718):
            params = risk_neutral_params(spec)
            expectation = lognormal_call_expectation(params, spec.strike / spec.spot)
            pipeline = discount(spec.spot * expectation, spec.rate, spec.expiry)
            assert abs(bs_call_price(spec).price - pipeline) <= 1e-10

    def test_h_equals_d(self):
        for spec in random_specs(1000, 3141):
            hp, hm = lognormal_h_plus_minus(risk_neutral_params(spec), spec.strike / spec.spot)
            dp, dm = d_plus_minus(spec)
            assert abs(hp - dp) <= 1e-12 and abs(hm - dm) <= 1e-12


class TestPriceResult:
    def test_rejects_negative_price_and_bad_method(self):
        with pytest.raises(ValueError):
            PriceResult(price=-1.0, d_plus=0.0, d_minus=0.0, method="closed_form")
        with pytest.raises(ValueError):
            PriceResult(price=1.0, d_plus=0.0, d_minus=0.0, method="magic")
        with pytest.raises(ValueError):
            PriceResult(price=1.0, d_plus=0.0, d_minus=0.0, method="tree", std_error=-0.1)
