import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from svjdx import (
    AssetParams,
    CorrelationStructure,
    JumpSpec,
    MarketModel,
    MarketState,
    VolParams,
    forward_price,
    kappa,
    validate,
)
from svjdx.errors import ModelValidationError
from svjdx.market import require_valid


def _model(vol1=None, corr=None, **kw):
    vol1 = vol1 or VolParams(2.0, 0.04, 0.3, 0.04)
    return MarketModel(
        asset1=AssetParams(100.0, 0.02, vol1, JumpSpec(0.5, -0.05, 0.2)),
        asset2=AssetParams(95.0, 0.01, VolParams(1.5, 0.05, 0.3, 0.05), JumpSpec(0.0)),
        corr=corr or CorrelationStructure(),
        r=kw.get("r", 0.03),
    )


class TestValidate:
    def test_feller_holds(self):
        # 2*2*0.04 = 0.16 >= 0.09
        assert validate(_model(VolParams(2.0, 0.04, 0.3, 0.04))).ok

    def test_feller_violated(self):
        report = validate(_model(VolParams(1.0, 0.02, 0.3, 0.02)))
        assert not report.ok
        assert any("Feller" in v and "0.04" in v and "0.09" in v for v in report.violations)

    def test_leverage_bound(self):
        model = _model(
            VolParams(0.5, 0.3, 1.0, 0.3),  # Feller: 0.3 >= 1.0 fails too, but check rho msg
            corr=CorrelationStructure(rho_wz1=0.9),
        )
        report = validate(model)
        assert any("rho_wz1" in v and "min(xi1/sigma1, 1)" in v for v in report.violations)

    def test_reports_all_violations(self):
        model = MarketModel(
            asset1=AssetParams(-1.0, -0.1, VolParams(-1.0, 0.04, 0.3, 0.04)),
            asset2=AssetParams(95.0, 0.01, VolParams(1.5, 0.05, 0.3, 0.05)),
            corr=CorrelationStructure(rho_w=1.5),
            r=0.03,
        )
        report = validate(model)
        assert len(report.violations) >= 4

    def test_psd_check(self):
        # rho_w, rho_wz large together break positive semi-definiteness
        model = _model(corr=CorrelationStructure(0.95, 0.9, -0.9, 0.0))
        report = validate(model)
        assert any("semi-definite" in v for v in report.violations)

    def test_idempotent(self):
        model = _model(VolParams(1.0, 0.02, 0.3, 0.02))
        assert validate(model).violations == validate(model).violations

    @given(
        xi=st.floats(-5, 5, allow_nan=False),
        eta=st.floats(-1, 1, allow_nan=False),
        sigma=st.floats(-2, 2, allow_nan=False),
        v0=st.floats(-1, 1, allow_nan=False),
        rho=st.floats(-2, 2, allow_nan=False),
        r=st.floats(allow_nan=True, allow_infinity=True),
    )
    @settings(max_examples=200, deadline=None)
    def test_total_on_any_finite_input(self, xi, eta, sigma, v0, rho, r):
        # never raises, only reports
        model = _model(VolParams(xi, eta, sigma, v0), corr=CorrelationStructure(rho_w=rho), r=r)
        validate(model)

    def test_require_valid_raises(self):
        with pytest.raises(ModelValidationError):
            require_valid(_model(VolParams(1.0, 0.02, 0.3, 0.02)))


class TestKappa:
    def test_degenerate_zero(self):
        assert kappa(JumpSpec(1.0, 0.0, 0.0)) == 0.0

    def test_point_mass(self):
        assert kappa(JumpSpec(1.0, math.log(1.1), 0.0)) == pytest.approx(0.1, abs=1e-15)

    def test_against_quadrature(self):
        # oracle: integrate (e^y - 1) against the N(-0.1, 0.2^2) density
        from scipy.integrate import quad
        from scipy.stats import norm

        oracle, _ = quad(lambda y: (math.exp(y) - 1.0) * norm.pdf(y, -0.1, 0.2), -3.0, 3.0)
        assert oracle == pytest.approx(math.exp(-0.08) - 1.0, abs=1e-10)
        assert kappa(JumpSpec(1.0, -0.1, 0.2)) == pytest.approx(-0.07688365361336424, abs=1e-12)

    @given(
        mu=st.floats(-1.0, 1.0, allow_nan=False),
        sig=st.floats(0.0, 1.0, allow_nan=False),
    )
    @settings(max_examples=100, deadline=None)
    def test_above_minus_one(self, mu, sig):
        assert kappa(JumpSpec(0.5, mu, sig)) > -1.0


class TestForwardPrice:
    def test_zero_carry(self):
        model = _model(r=0.02)  # r == q1
        for T in (0.1, 1.0, 7.3):
            assert forward_price(model, 1, 0.0, T) == pytest.approx(100.0, rel=1e-15)

    def test_closed_form(self):
        model = MarketModel(
            asset1=AssetParams(100.0, 0.01, VolParams(2.0, 0.04, 0.3, 0.04)),
            asset2=AssetParams(95.0, 0.01, VolParams(1.5, 0.05, 0.3, 0.05)),
            corr=CorrelationStructure(),
            r=0.05,
        )
        assert forward_price(model, 1, 0.0, 1.0) == pytest.approx(100.0 * math.exp(0.04), rel=1e-15)

    def test_rejects_bad_horizon(self):
        with pytest.raises(ValueError):
            forward_price(_model(), 1, 1.0, 1.0)

    def test_monotone_and_multiplicative(self):
        base = forward_price(_model(), 1, 0.0, 1.0)
        state = MarketState(200.0, 95.0, 0.04, 0.05)
        assert forward_price(_model(), 1, 0.0, 1.0, state) == pytest.approx(2.0 * base, rel=1e-15)
        assert forward_price(_model(r=0.06), 1, 0.0, 1.0) > base

    def test_matches_cf_identity(self, desk_model):
        from svjdx import phi_joint

        state = desk_model.initial_state()
        for idx, u in ((1, (-1j, 0.0)), (2, (0.0, -1j))):
            fwd = forward_price(desk_model, idx, 0.0, 0.75)
            cf = phi_joint(desk_model, state, 0.0, 0.75, *u).value
            assert abs(cf - fwd) / fwd < 1e-10


def test_correlation_matrix_layout():
    corr = CorrelationStructure(0.3, -0.5, -0.4, 0.1)
    mat = corr.matrix()
    assert np.allclose(mat, mat.T)
    assert np.allclose(np.diag(mat), 1.0)
    assert mat[0, 1] == 0.3 and mat[0, 2] == -0.5 and mat[1, 3] == -0.4 and mat[2, 3] == 0.1
    assert mat[0, 3] == 0.0 and mat[1, 2] == 0.0
