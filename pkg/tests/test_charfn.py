import cmath
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
    SimConfig,
    VolParams,
    numeraire_shift_1,
    numeraire_shift_2,
    phi_joint,
    phi_jump,
    riccati,
    simulate,
)
from svjdx.charfn import log_phi_joint
from svjdx.checks import rk4_exponents
from svjdx.errors import CFDomainError
from svjdx.mc import mean_stderr


class TestPhiJump:
    def test_normalization(self):
        assert phi_jump(JumpSpec(1.0, -0.04, 0.18), 0.0) == 1.0 + 0.0j

    def test_mgf_identity(self):
        # phi_Y(-i) = E[e^Y] = exp(mu + sigma^2/2)
        val = phi_jump(JumpSpec(1.0, 0.05, 0.1), -1j)
        assert val == pytest.approx(math.exp(0.055), rel=1e-14)

    def test_complex_argument_against_quadrature(self):
        # oracle: numerically integrate e^{iuy} against the N(mu, sigma^2) density
        from scipy.integrate import quad
        from scipy.stats import norm

        jump = JumpSpec(1.0, -0.04, 0.18)
        u = 1.3 - 0.75j

        def integrand(part):
            return lambda y: part(cmath.exp(1j * u * y)) * norm.pdf(y, jump.mu_j, jump.sigma_j)

        oracle = complex(
            quad(integrand(lambda z: z.real), -2.5, 2.5, limit=200)[0],
            quad(integrand(lambda z: z.imag), -2.5, 2.5, limit=200)[0],
        )
        assert abs(phi_jump(jump, u) - oracle) < 1e-9


class TestRiccati:
    def test_zero_horizon(self, desk_model):
        parts = riccati(desk_model, 0.0, 1.7 - 0.3j, -2.2 + 0.1j)
        assert parts.d1 == 0.0 and parts.d2 == 0.0 and parts.c == 0.0

    def test_zero_argument(self, desk_model):
        parts = riccati(desk_model, 1.0, 0.0, 0.0)
        assert parts.d1 == 0.0 and parts.d2 == 0.0 and parts.c == 0.0

    def test_vanishing_vol_of_vol_limit(self):
        # closed form must match RK4 of the exponent ODEs at sigma = 1e-8
        model = MarketModel(
            asset1=AssetParams(100.0, 0.03, VolParams(2.0, 0.04, 1e-8, 0.04)),
            asset2=AssetParams(96.0, 0.02, VolParams(1.6, 0.05, 1e-8, 0.05)),
            corr=CorrelationStructure(),
            r=0.05,
        )
        for u in (0.5, 2.0, -3.0):
            for s in (0.5, 1.5):
                parts = riccati(model, s, u, -u)
                d1, d2, c = rk4_exponents(model, s, complex(u), complex(-u))
                assert abs(parts.d1 - d1) < 1e-8
                assert abs(parts.d2 - d2) < 1e-8
                assert abs(parts.c - c) < 1e-8
                # explicit limit formula -(u^2+iu)/2 * (1-e^{-xi s})/xi
                a = u * u + 1j * u
                limit = -(a / 2.0) * (1.0 - math.exp(-2.0 * s)) / 2.0
                assert abs(parts.d1 - limit) < 1e-7

    def test_closed_form_vs_rk4_grid(self, desk_model):
        worst = 0.0
        for u in (-20.0, -5.0, -1.0, -0.1, 0.1, 1.0, 5.0, 20.0):
            for s in (0.25, 1.0, 2.0):
                parts = riccati(desk_model, s, u, -0.5 * u)
                d1, d2, c = rk4_exponents(desk_model, s, complex(u), complex(-0.5 * u))
                worst = max(worst, abs(parts.d1 - d1), abs(parts.d2 - d2), abs(parts.c - c))
        assert worst < 1e-8

    def test_d_has_nonpositive_real_part_on_real_grid(self, desk_model):
        for u in np.linspace(-25, 25, 21):
            parts = riccati(desk_model, 1.3, u, 0.7 * u)
            assert parts.d1.real <= 1e-14
            assert parts.d2.real <= 1e-14

    def test_log_argument_continuity_along_horizon(self, desk_model):
        # C(s) should be continuous: no branch jumps on a fine s grid
        for u in (3.0, 12.0, 20.0):
            vals = [riccati(desk_model, s, u, -u).c for s in np.linspace(1e-6, 2.0, 400)]
            diffs = np.abs(np.diff(vals))
            assert diffs.max() < 0.5  # a branch jump would show up as ~2*pi*vtheta/sigma^2


class TestPhiJoint:
    def test_normalization_exact(self, desk_model):
        state = desk_model.initial_state()
        assert phi_joint(desk_model, state, 0.0, 0.7, 0.0, 0.0).value == 1.0 + 0.0j

    def test_forward_identity(self, desk_model):
        state = desk_model.initial_state()
        tau = 0.5
        cf = phi_joint(desk_model, state, 0.0, tau, 0.0, -1j).value
        fwd = state.s2 * math.exp((desk_model.r - desk_model.asset2.q) * tau)
        assert abs(cf - fwd) / fwd < 1e-12

    def test_conjugate_symmetry_and_bound(self, desk_model):
        state = desk_model.initial_state()
        rng = np.random.default_rng(3)
        for _ in range(10):
            u1, u2 = rng.normal(scale=6.0, size=2)
            a = phi_joint(desk_model, state, 0.0, 0.5, u1, u2).value
            b = phi_joint(desk_model, state, 0.0, 0.5, -u1, -u2).value
            assert abs(a.conjugate() - b) <= 1e-12 * max(1.0, abs(a))
            assert abs(a) <= 1.0 + 1e-12

    def test_rejects_correlated_wieners(self, desk_model):
        state = desk_model.initial_state()
        for bad in (replace(desk_model.corr, rho_w=0.3), replace(desk_model.corr, rho_z=0.2)):
            model = replace(desk_model, corr=bad)
            with pytest.raises(CFDomainError, match="independent-volatility"):
                phi_joint(model, state, 0.0, 0.5, 1.0, 1.0)

    def test_flat_variance_matches_two_asset_jump_diffusion_cf(self):
        # deterministic-variance degeneration: lognormal diffusions plus jumps
        model = MarketModel(
            asset1=AssetParams(
                100.0, 0.03, VolParams(2.0, 0.04, 1e-9, 0.04), JumpSpec(0.4, -0.04, 0.18)
            ),
            asset2=AssetParams(
                96.0, 0.02, VolParams(1.6, 0.05, 1e-9, 0.05), JumpSpec(0.25, 0.02, 0.15)
            ),
            corr=CorrelationStructure(),
            r=0.05,
        )
        state = model.initial_state()
        tau = 0.8
        for u1, u2 in ((1.3, -0.4), (4.0, 2.5), (-0.3, 6.0)):
            got = cmath.log(phi_joint(model, state, 0.0, tau, u1, u2).value)
            want = 0.0 + 0.0j
            for u, asset, x in (
                (u1, model.asset1, state.x1),
                (u2, model.asset2, state.x2),
            ):
                eta = asset.vol.eta
                comp = asset.jump.intensity * asset.jump.kappa()
                drift = model.r - asset.q - comp - 0.5 * eta
                want += 1j * u * (x + drift * tau) - 0.5 * u * u * eta * tau
                want += asset.jump.intensity * tau * (phi_jump(asset.jump, u) - 1.0)
            assert abs(got - want) < 1e-8

    def test_numeraire_cf_equals_argument_shift_identity(self, desk_model):
        # phi_hat_i(u1, u2) = phi_Q(u - i e_i) / phi_Q(-i e_i): parameter
        # substitution and the density ratio must agree
        state = desk_model.initial_state()
        f1 = phi_joint(desk_model, state, 0.0, 0.5, -1j, 0.0).value
        f2 = phi_joint(desk_model, state, 0.0, 0.5, 0.0, -1j).value
        d1 = numeraire_shift_1(desk_model)
        d2 = numeraire_shift_2(desk_model)
        for u1, u2 in ((0.7, -1.3), (3.0, 2.0), (-2.0, 0.5)):
            lhs1 = phi_joint(d1, state, 0.0, 0.5, u1, u2).value
            rhs1 = phi_joint(desk_model, state, 0.0, 0.5, u1 - 1j, u2).value / f1
            assert abs(lhs1 - rhs1) <= 1e-12 * abs(lhs1)
            lhs2 = phi_joint(d2, state, 0.0, 0.5, u1, u2).value
            rhs2 = phi_joint(desk_model, state, 0.0, 0.5, u1, u2 - 1j).value / f2
            assert abs(lhs2 - rhs2) <= 1e-12 * abs(lhs2)

    def test_domain_error_outside_strip(self, desk_model):
        state = desk_model.initial_state()
        with pytest.raises(CFDomainError):
            # far outside the moment strip: E[S1^31] explodes numerically
            phi_joint(desk_model, state, 0.0, 5.0, -30j, 0.0)


@pytest.mark.slow
class TestAgainstMonteCarlo:
    def test_cf_matches_mc_average(self, desk_model):
        state = desk_model.initial_state()
        T = 0.5
        cfg = SimConfig(n_paths=120_000, n_steps=250, seed=99, antithetic=True)
        batch = simulate(desk_model, state, 0.0, T, cfg)
        rng = np.random.default_rng(5)
        for _ in range(3):
            u1, u2 = rng.normal(scale=3.0, size=2)
            cf = phi_joint(desk_model, state, 0.0, T, u1, u2).value
            samples = np.exp(1j * (u1 * batch.x1 + u2 * batch.x2))
            mr, se_r = mean_stderr(samples.real, cfg.antithetic)
            mi, se_i = mean_stderr(samples.imag, cfg.antithetic)
            assert abs(mr - cf.real) <= 3.5 * se_r
            assert abs(mi - cf.imag) <= 3.5 * se_i

    def test_tower_consistency(self, desk_model):
        # phi from 0 equals the MC average of phi from simulated time-t states
        state = desk_model.initial_state()
        t_mid, T = 0.25, 0.5
        cfg = SimConfig(n_paths=60_000, n_steps=125, seed=17, antithetic=True)
        batch = simulate(desk_model, state, 0.0, t_mid, cfg, store_times=[t_mid])
        snaps = batch.snaps
        for u1, u2 in ((1.0, -0.5), (2.5, 1.5)):
            direct = phi_joint(desk_model, state, 0.0, T, u1, u2).value
            inner = np.exp(
                log_phi_joint(
                    desk_model,
                    snaps["x1"][0],
                    snaps["x2"][0],
                    snaps["v1"][0],
                    snaps["v2"][0],
                    T - t_mid,
                    u1,
                    u2,
                )
            )
            mr, se_r = mean_stderr(inner.real, cfg.antithetic)
            mi, se_i = mean_stderr(inner.imag, cfg.antithetic)
            assert abs(mr - direct.real) <= 3.5 * se_r + 1e-4
            assert abs(mi - direct.imag) <= 3.5 * se_i + 1e-4
