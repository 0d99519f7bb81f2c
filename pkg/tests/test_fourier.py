import math
from dataclasses import replace

import numpy as np
import pytest

from svjdx import (
    AssetParams,
    CorrelationStructure,
    JumpSpec,
    MarketModel,
    MarketState,
    QuadratureConfig,
    VolParams,
    exchange_price,
    exchange_price_decomposed,
    r_independence_check,
    spread_lower_bound,
)
from svjdx.checks import margrabe_price
from svjdx.errors import ModelValidationError


class TestQuadratureConfig:
    def test_rejects_bad_values(self):
        for bad in (
            QuadratureConfig(delta=0.0),
            QuadratureConfig(z_max=-1.0),
            QuadratureConfig(n_nodes=32),
            QuadratureConfig(scheme="simpson"),
        ):
            with pytest.raises(ModelValidationError):
                bad.check()


class TestExchangePrice:
    def test_margrabe_degeneration(self, flat_model):
        sigma = math.sqrt(0.04 + 0.05)
        exact = margrabe_price(100.0, 96.0, 0.03, 0.02, 0.5, sigma)
        got = exchange_price(flat_model, None, 0.0, 0.5).price
        assert abs(got - exact) / exact < 1e-6

    def test_degree_one_homogeneity(self, desk_model):
        base = exchange_price(desk_model, None, 0.0, 0.5).price
        doubled_model = MarketModel(
            asset1=replace(desk_model.asset1, s0=200.0),
            asset2=replace(desk_model.asset2, s0=192.0),
            corr=desk_model.corr,
            r=desk_model.r,
        )
        doubled = exchange_price(doubled_model, None, 0.0, 0.5).price
        assert abs(doubled - 2.0 * base) <= 1e-10 * base

    def test_monotonicity_in_spots(self, desk_model):
        state = desk_model.initial_state()
        up1 = MarketState(state.s1 * 1.01, state.s2, state.v1, state.v2)
        up2 = MarketState(state.s1, state.s2 * 1.01, state.v1, state.v2)
        p = exchange_price(desk_model, state, 0.0, 0.5).price
        assert exchange_price(desk_model, up1, 0.0, 0.5).price > p
        assert exchange_price(desk_model, up2, 0.0, 0.5).price < p

    def test_worthless_when_asset1_vanishes(self, desk_model):
        state = desk_model.initial_state()
        tiny = MarketState(1e-8, state.s2, state.v1, state.v2)
        report = exchange_price(desk_model, tiny, 0.0, 0.5)
        assert report.price <= 1e-6

    def test_deep_otm_clamp_flag(self, desk_model):
        state = desk_model.initial_state()
        otm = MarketState(1e-4, state.s2, state.v1, state.v2)
        report = exchange_price(desk_model, otm, 0.0, 0.5)
        assert report.price == 0.0
        assert report.clamp_flag
        assert report.detail["raw_price"] <= 0.0

    def test_forward_intrinsic_lower_bound(self, desk_model):
        tau = 0.5
        state = MarketState(140.0, 96.0, 0.045, 0.05)
        price = exchange_price(desk_model, state, 0.0, tau).price
        intrinsic = 140.0 * math.exp(-0.03 * tau) - 96.0 * math.exp(-0.02 * tau)
        assert price >= intrinsic - 1e-8

    def test_delta_robustness(self, desk_model):
        prices = [
            exchange_price(desk_model, None, 0.0, 0.5, QuadratureConfig(delta=d)).price
            for d in (0.25, 0.5, 0.75, 1.0, 2.0)
        ]
        spread = max(prices) - min(prices)
        assert spread / prices[2] < 1e-6

    def test_refinement_convergence(self, desk_model):
        base = exchange_price(desk_model, None, 0.0, 0.5).price
        fine = exchange_price(
            desk_model, None, 0.0, 0.5, QuadratureConfig(n_nodes=4096, z_max=400.0)
        ).price
        assert abs(fine - base) / base < 1e-7

    def test_adaptive_scheme_agrees(self, desk_model):
        fixed = exchange_price(desk_model, None, 0.0, 0.5).price
        adaptive = exchange_price(
            desk_model, None, 0.0, 0.5, QuadratureConfig(n_nodes=256, scheme="adaptive")
        )
        assert abs(adaptive.price - fixed) / fixed < 1e-9
        assert "converged" not in adaptive.detail


class TestSpreadLowerBound:
    def test_k_zero_is_exchange_price(self, desk_model):
        a = spread_lower_bound(desk_model, None, 0.0, 0.5, 0.0).price
        b = exchange_price(desk_model, None, 0.0, 0.5).price
        assert a == b

    def test_rejects_negative_strike(self, desk_model):
        with pytest.raises(ModelValidationError):
            spread_lower_bound(desk_model, None, 0.0, 0.5, -1.0)

    def test_decreasing_in_strike(self, desk_model):
        prices = [
            spread_lower_bound(desk_model, None, 0.0, 0.5, k).price for k in (0.0, 5.0, 10.0)
        ]
        assert prices[0] > prices[1] > prices[2]

    def test_flat_limit_brackets_kirk_style_intuition(self, flat_model):
        # at K>0 the bound must stay below the flat-model MC price; cheap proxy:
        # it must at least stay below the K=0 exact price
        k0 = spread_lower_bound(flat_model, None, 0.0, 0.5, 0.0).price
        k5 = spread_lower_bound(flat_model, None, 0.0, 0.5, 5.0).price
        assert 0.0 < k5 < k0


class TestDecomposition:
    def test_matches_direct_price(self, desk_model):
        direct = exchange_price(desk_model, None, 0.0, 0.5)
        dec = exchange_price_decomposed(desk_model, None, 0.0, 0.5)
        assert abs(direct.price - dec.price) < 1e-8
        assert dec.term1 is not None and dec.term2 is not None
        assert dec.price == pytest.approx(max(dec.term1 - dec.term2, 0.0), abs=1e-12)

    def test_probabilities_in_unit_interval(self, desk_model):
        dec = exchange_price_decomposed(desk_model, None, 0.0, 0.5)
        for key in ("prob1", "prob2"):
            assert -1e-6 <= dec.detail[key] <= 1.0 + 1e-6

    def test_deep_itm_probabilities_near_one(self, desk_model):
        state = MarketState(500.0, 50.0, 0.045, 0.05)
        dec = exchange_price_decomposed(desk_model, state, 0.0, 0.25)
        assert dec.detail["prob1"] > 0.99
        assert dec.detail["prob2"] > 0.99


class TestRIndependence:
    def test_exchange_price_has_no_r_dependence(self, desk_model):
        price = exchange_price(desk_model, None, 0.0, 0.5).price
        dev = r_independence_check(desk_model, None, 0.0, 0.5, [0.0, 0.05, 0.15])
        assert dev <= 1e-6 * price

    def test_margrabe_limit_deviation_vanishes(self, flat_model):
        price = exchange_price(flat_model, None, 0.0, 0.5).price
        dev = r_independence_check(flat_model, None, 0.0, 0.5, [0.0, 0.05, 0.15])
        assert dev <= 1e-9 * price

    def test_positive_strike_control_depends_on_r(self, desk_model):
        prices = [
            spread_lower_bound(replace(desk_model, r=r), None, 0.0, 0.5, 20.0).price
            for r in (0.0, 0.15)
        ]
        assert abs(prices[1] - prices[0]) > 1e-3
