import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from svjdx import (
    AssetParams,
    CorrelationStructure,
    JumpSpec,
    MarketModel,
    MeasureShift,
    VolParams,
    apply_measure_shift,
    numeraire_shift_1,
    numeraire_shift_2,
    q_dynamics,
    risk_neutral_drift,
    tilt_jump,
)
from svjdx.checks import random_valid_model
from svjdx.errors import ModelValidationError


class TestTiltJump:
    def test_identity(self):
        jump = JumpSpec(0.7, -0.03, 0.25)
        assert tilt_jump(jump, 0.0, 0.0) == jump

    def test_unit_tilt_against_quadrature(self):
        # oracle: tilted density e^{y} phi(y; 0, 0.2) / M(1); mass and mean by quadrature
        from scipy.integrate import quad
        from scipy.stats import norm

        jump = JumpSpec(1.0, 0.0, 0.2)
        tilted = tilt_jump(jump, 1.0, 0.0)
        mgf = quad(lambda y: math.exp(y) * norm.pdf(y, 0.0, 0.2), -3, 3)[0]
        mean = quad(lambda y: y * math.exp(y) * norm.pdf(y, 0.0, 0.2) / mgf, -3, 3)[0]
        assert tilted.intensity == pytest.approx(math.exp(0.02), rel=1e-12)
        assert tilted.intensity == pytest.approx(mgf, rel=1e-9)
        assert tilted.mu_j == pytest.approx(0.04, abs=1e-15)
        assert tilted.mu_j == pytest.approx(mean, abs=1e-9)
        assert tilted.sigma_j == jump.sigma_j

    def test_disabled_layer_stays_disabled(self):
        assert tilt_jump(JumpSpec(0.0, 0.1, 0.3), 2.0, 1.5).intensity == 0.0

    @given(
        gamma_a=st.floats(-1.5, 1.5),
        gamma_b=st.floats(-1.5, 1.5),
        nu_a=st.floats(-1.0, 1.0),
        nu_b=st.floats(-1.0, 1.0),
        mu=st.floats(-0.3, 0.3),
        sig=st.floats(0.01, 0.5),
    )
    @settings(max_examples=100, deadline=None)
    def test_composition(self, gamma_a, gamma_b, nu_a, nu_b, mu, sig):
        jump = JumpSpec(0.8, mu, sig)
        two_step = tilt_jump(tilt_jump(jump, gamma_a, nu_a), gamma_b, nu_b)
        one_step = tilt_jump(jump, gamma_a + gamma_b, nu_a + nu_b)
        assert two_step.mu_j == pytest.approx(one_step.mu_j, abs=1e-12)
        assert two_step.intensity == pytest.approx(one_step.intensity, rel=1e-12)
        assert two_step.sigma_j == one_step.sigma_j


class TestNumeraireShifts:
    def test_no_leverage_keeps_variance_dynamics(self, desk_model):
        model = replace(
            desk_model, corr=CorrelationStructure(0.0, 0.0, -0.4, 0.0)
        )
        base = q_dynamics(model)
        dyn = numeraire_shift_1(model)
        assert dyn.asset1.kappa_mr == base.asset1.kappa_mr
        assert dyn.asset1.vtheta == base.asset1.vtheta
        assert dyn.numeraire == 1 and dyn.measure_tag == "Qhat1"

    def test_intensity_scaling(self):
        # kappa~ = 0.1 exactly with a point-mass jump law
        model = MarketModel(
            asset1=AssetParams(
                100.0, 0.02, VolParams(2.0, 0.04, 0.3, 0.04), JumpSpec(0.5, math.log(1.1), 0.0)
            ),
            asset2=AssetParams(95.0, 0.01, VolParams(1.5, 0.05, 0.3, 0.05)),
            corr=CorrelationStructure(),
            r=0.03,
        )
        dyn = numeraire_shift_1(model)
        assert dyn.asset1.jump.intensity == pytest.approx(0.55, rel=1e-14)
        assert dyn.asset2.jump.intensity == 0.0

    def test_feller_product_preserved_exactly(self, desk_model):
        base = q_dynamics(desk_model)
        for shifted in (numeraire_shift_1(desk_model), numeraire_shift_2(desk_model)):
            assert shifted.asset1.vtheta == base.asset1.vtheta
            assert shifted.asset2.vtheta == base.asset2.vtheta

    def test_mirror_symmetry(self, desk_model):
        swapped = MarketModel(
            asset1=desk_model.asset2,
            asset2=desk_model.asset1,
            corr=CorrelationStructure(
                desk_model.corr.rho_w,
                desk_model.corr.rho_wz2,
                desk_model.corr.rho_wz1,
                0.0,
            ),
            r=desk_model.r,
        )
        d2 = numeraire_shift_2(desk_model)
        d1 = numeraire_shift_1(swapped)
        assert d2.asset2.kappa_mr == pytest.approx(d1.asset1.kappa_mr, rel=1e-15)
        assert d2.asset2.jump == d1.asset1.jump
        assert d2.asset1.kappa_mr == pytest.approx(d1.asset2.kappa_mr, rel=1e-15)

    def test_other_asset_untouched_under_shift2(self, desk_model):
        base = q_dynamics(desk_model)
        dyn = numeraire_shift_2(desk_model)
        assert dyn.asset1 == base.asset1

    def test_rejects_rho_z(self, desk_model):
        model = replace(desk_model, corr=replace(desk_model.corr, rho_z=0.2))
        with pytest.raises(ModelValidationError, match="rho_z"):
            numeraire_shift_1(model)

    def test_valid_models_never_trigger_positivity_rejection(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            model = random_valid_model(rng)
            numeraire_shift_1(model)
            numeraire_shift_2(model)


class TestRiskNeutralDrift:
    def test_no_jumps(self):
        model = MarketModel(
            asset1=AssetParams(100.0, 0.02, VolParams(2.0, 0.04, 0.3, 0.04)),
            asset2=AssetParams(95.0, 0.01, VolParams(1.5, 0.05, 0.3, 0.05)),
            corr=CorrelationStructure(),
            r=0.05,
        )
        assert risk_neutral_drift(model, 1) == pytest.approx(0.03, abs=1e-15)

    def test_with_jump_compensator(self):
        # lambda~ = 1, kappa~ = 0.1 -> r - q - 0.1 = -0.07
        model = MarketModel(
            asset1=AssetParams(
                100.0, 0.02, VolParams(2.0, 0.04, 0.3, 0.04), JumpSpec(1.0, math.log(1.1), 0.0)
            ),
            asset2=AssetParams(95.0, 0.01, VolParams(1.5, 0.05, 0.3, 0.05)),
            corr=CorrelationStructure(),
            r=0.05,
        )
        assert risk_neutral_drift(model, 1) == pytest.approx(-0.07, abs=1e-14)


def test_apply_measure_shift_tilts_both_layers(desk_model):
    shift = MeasureShift(gamma1=0.5, gamma2=-0.3, nu1=0.1, nu2=0.0)
    shifted = apply_measure_shift(desk_model, shift)
    assert shifted.measure_tag == "Q"
    assert shifted.asset1.jump == tilt_jump(desk_model.asset1.jump, 0.5, 0.1)
    assert shifted.asset2.jump == tilt_jump(desk_model.asset2.jump, -0.3, 0.0)
    # defaults are the identity
    assert apply_measure_shift(desk_model, MeasureShift()) == desk_model
