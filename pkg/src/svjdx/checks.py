"""Self-verification battery: the engine's acceptance criteria as runnable checks.

Each check pits an engine code path against an independent oracle (analytic
formula, numerical ODE integration, cross-method Monte Carlo) at desk scale
and returns one pass/fail row. `run_checks` drives the full battery; the CLI
`check-suite` command and the acceptance test suite both call it.

The oracles here (Margrabe formula, RK4 integration of the exponent ODE
system, plain MC estimators) are implemented from scratch in this module so
they stay independent of the closed forms they validate.
"""

from __future__ import annotations

import math
import os
import subprocess
import sys
import tempfile
import time
from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import norm

from .american import BoundarySolverConfig, LSMConfig, eep_decomposition, lsm_price, solve_boundary
from .fourier import QuadratureConfig, exchange_price, exchange_price_decomposed, r_independence_check, spread_lower_bound
from .market import AssetParams, CorrelationStructure, JumpSpec, MarketModel, MarketState, VolParams, forward_price, validate
from .mc import SimConfig, martingale_checks, price_exchange_mc, price_spread_mc, qhat_prob
from .measures import numeraire_shift_1, numeraire_shift_2
from .charfn import phi_joint, riccati


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    wall_ms: float


def _vol(xi, eta, sigma, v0, rp=0.0):
    return VolParams(xi, eta, sigma, v0, rp)


def desk_models() -> List[Tuple[str, MarketModel, float]]:
    """Five full-SVJD desk models (rho_w = rho_z = 0) with maturities."""
    return [
        (
            "desk1",
            MarketModel(
                AssetParams(100.0, 0.03, _vol(2.0, 0.04, 0.25, 0.045), JumpSpec(0.4, -0.04, 0.18)),
                AssetParams(96.0, 0.02, _vol(1.6, 0.05, 0.30, 0.05, 0.1), JumpSpec(0.25, 0.02, 0.15)),
                CorrelationStructure(0.0, -0.5, -0.4, 0.0),
                0.05,
            ),
            0.5,
        ),
        (
            "desk2",
            MarketModel(
                AssetParams(110.0, 0.02, _vol(3.0, 0.05, 0.45, 0.06), JumpSpec(0.6, -0.08, 0.22)),
                AssetParams(100.0, 0.04, _vol(2.2, 0.035, 0.32, 0.03), JumpSpec(0.0)),
                CorrelationStructure(0.0, -0.7, -0.3, 0.0),
                0.03,
            ),
            0.5,
        ),
        (
            "desk3",
            MarketModel(
                AssetParams(120.0, 0.05, _vol(1.8, 0.06, 0.35, 0.055, 0.2), JumpSpec(0.3, 0.03, 0.12)),
                AssetParams(95.0, 0.01, _vol(2.5, 0.045, 0.40, 0.05), JumpSpec(0.35, -0.03, 0.2)),
                CorrelationStructure(0.0, -0.45, -0.55, 0.0),
                0.05,
            ),
            0.5,
        ),
        (
            "desk4",
            MarketModel(
                AssetParams(90.0, 0.0, _vol(2.4, 0.03, 0.30, 0.028), JumpSpec(0.5, -0.02, 0.25)),
                AssetParams(100.0, 0.03, _vol(2.0, 0.06, 0.28, 0.07), JumpSpec(0.2, 0.05, 0.1)),
                CorrelationStructure(0.0, -0.2, -0.6, 0.0),
                0.02,
            ),
            0.5,
        ),
        (
            "desk5",
            MarketModel(
                AssetParams(98.0, 0.01, _vol(2.0, 0.045, 0.35, 0.05), JumpSpec(0.8, -0.01, 0.1)),
                AssetParams(105.0, 0.025, _vol(1.5, 0.05, 0.25, 0.04, 0.05), JumpSpec(0.15, 0.0, 0.3)),
                CorrelationStructure(0.0, 0.3, 0.25, 0.0),
                0.04,
            ),
            0.75,
        ),
    ]


def margrabe_limit_model() -> Tuple[MarketModel, float]:
    """Flat-variance, no-jump degeneration (vol-of-vol 1e-8, v0 = long-run mean)."""
    model = MarketModel(
        AssetParams(100.0, 0.03, _vol(2.0, 0.04, 1e-8, 0.04)),
        AssetParams(96.0, 0.02, _vol(1.6, 0.05, 1e-8, 0.05)),
        CorrelationStructure(),
        0.05,
    )
    return model, 0.5


def american_models() -> Dict[str, Tuple[MarketModel, float]]:
    base_corr = CorrelationStructure(0.0, -0.5, -0.4, 0.0)
    v1 = _vol(2.0, 0.04, 0.25, 0.045)
    v2 = _vol(1.6, 0.05, 0.30, 0.05)
    return {
        "no_dividend": (
            MarketModel(
                AssetParams(100.0, 0.0, v1), AssetParams(96.0, 0.02, v2), base_corr, 0.05
            ),
            0.5,
        ),
        "high_dividend": (
            MarketModel(
                AssetParams(100.0, 0.08, v1), AssetParams(96.0, 0.0, v2), base_corr, 0.05
            ),
            0.5,
        ),
        "am1": (
            MarketModel(
                AssetParams(100.0, 0.06, v1), AssetParams(96.0, 0.01, v2), base_corr, 0.05
            ),
            0.5,
        ),
        "am2": (
            MarketModel(
                AssetParams(105.0, 0.07, v1, JumpSpec(0.3, -0.05, 0.15)),
                AssetParams(98.0, 0.02, v2),
                base_corr,
                0.05,
            ),
            0.5,
        ),
        "am3": (
            MarketModel(
                AssetParams(100.0, 0.06, v1, JumpSpec(0.3, -0.05, 0.15)),
                AssetParams(96.0, 0.01, v2, JumpSpec(0.2, 0.02, 0.12)),
                base_corr,
                0.05,
            ),
            0.5,
        ),
    }


def r_control_model() -> Tuple[MarketModel, float, float]:
    """Wide spread for the K = 100 positive control of the r-independence check."""
    model = MarketModel(
        AssetParams(350.0, 0.02, _vol(2.0, 0.04, 0.25, 0.045), JumpSpec(0.3, -0.03, 0.15)),
        AssetParams(200.0, 0.01, _vol(1.6, 0.05, 0.30, 0.05), JumpSpec(0.2, 0.02, 0.12)),
        CorrelationStructure(0.0, -0.5, -0.4, 0.0),
        0.05,
    )
    return model, 0.5, 100.0


def random_valid_model(rng: np.random.Generator) -> MarketModel:
    """Draw a random model satisfying every invariant by construction."""

    def vol():
        xi = rng.uniform(0.8, 3.0)
        eta = rng.uniform(0.02, 0.08)
        sigma = rng.uniform(0.1, 1.0) * math.sqrt(2.0 * xi * eta)
        v0 = eta * rng.uniform(0.5, 1.5)
        rp = rng.uniform(0.0, 0.3)
        return VolParams(xi, eta, sigma, v0, rp), xi, sigma

    def jump():
        if rng.random() < 0.25:
            return JumpSpec(0.0)
        return JumpSpec(rng.uniform(0.05, 1.0), rng.uniform(-0.1, 0.1), rng.uniform(0.0, 0.25))

    vol1, xi1, sig1 = vol()
    vol2, xi2, sig2 = vol()
    rho1 = rng.uniform(-0.8, 0.9 * min(xi1 / sig1, 1.0))
    rho2 = rng.uniform(-0.8, 0.9 * min(xi2 / sig2, 1.0))
    return MarketModel(
        AssetParams(rng.uniform(50.0, 150.0), rng.uniform(0.0, 0.06), vol1, jump()),
        AssetParams(rng.uniform(50.0, 150.0), rng.uniform(0.0, 0.06), vol2, jump()),
        CorrelationStructure(0.0, rho1, rho2, 0.0),
        rng.uniform(0.0, 0.1),
    )


# --------------------------------------------------------------------------
# oracles


def margrabe_price(s1, s2, q1, q2, tau, sigma):
    """Exchange option under flat lognormal dynamics (the classical closed form)."""
    d1 = (math.log(s1 / s2) + (q2 - q1 + 0.5 * sigma**2) * tau) / (sigma * math.sqrt(tau))
    d2 = d1 - sigma * math.sqrt(tau)
    return s1 * math.exp(-q1 * tau) * norm.cdf(d1) - s2 * math.exp(-q2 * tau) * norm.cdf(d2)


def rk4_exponents(model: MarketModel, s_end: float, u1: complex, u2: complex, n: int = 2000):
    """RK4 integration of the CF exponent ODE system from the raw Q parameters.

    D_j' = (sigma_j^2/2) D_j^2 + (i u_j rho_j sigma_j - (xi_j + Lambda_j)) D_j
           - (u_j^2 + i u_j)/2,
    C'   = sum_j [ i u_j (r - q_j - lambda_j kappa_j) + xi_j eta_j D_j ],
    from zero initial conditions.
    """
    assets = []
    for idx in (1, 2):
        a = model.asset(idx)
        assets.append(
            (
                a.vol.sigma,
                getattr(model.corr, f"rho_wz{idx}"),
                a.vol.xi + a.vol.risk_premium,
                a.vol.xi * a.vol.eta,
                model.r - a.q - a.jump.intensity * a.jump.kappa(),
            )
        )

    def d_rhs(d, u, sigma, rho, mr):
        return 0.5 * sigma**2 * d * d + (1j * u * rho * sigma - mr) * d - 0.5 * (u * u + 1j * u)

    h = s_end / n
    d1 = d2 = c = 0.0 + 0.0j
    (s1p, r1, m1, vt1, c1), (s2p, r2, m2, vt2, c2) = assets
    drift = 1j * (u1 * c1 + u2 * c2)
    for _ in range(n):
        k1a = d_rhs(d1, u1, s1p, r1, m1)
        k1b = d_rhs(d2, u2, s2p, r2, m2)
        k1c = drift + vt1 * d1 + vt2 * d2
        k2a = d_rhs(d1 + 0.5 * h * k1a, u1, s1p, r1, m1)
        k2b = d_rhs(d2 + 0.5 * h * k1b, u2, s2p, r2, m2)
        k2c = drift + vt1 * (d1 + 0.5 * h * k1a) + vt2 * (d2 + 0.5 * h * k1b)
        k3a = d_rhs(d1 + 0.5 * h * k2a, u1, s1p, r1, m1)
        k3b = d_rhs(d2 + 0.5 * h * k2b, u2, s2p, r2, m2)
        k3c = drift + vt1 * (d1 + 0.5 * h * k2a) + vt2 * (d2 + 0.5 * h * k2b)
        k4a = d_rhs(d1 + h * k3a, u1, s1p, r1, m1)
        k4b = d_rhs(d2 + h * k3b, u2, s2p, r2, m2)
        k4c = drift + vt1 * (d1 + h * k3a) + vt2 * (d2 + h * k3b)
        d1 += h / 6.0 * (k1a + 2 * k2a + 2 * k3a + k4a)
        d2 += h / 6.0 * (k1b + 2 * k2b + 2 * k3b + k4b)
        c += h / 6.0 * (k1c + 2 * k2c + 2 * k3c + k4c)
    return d1, d2, c


# --------------------------------------------------------------------------
# criteria


def _scaled(n: int, scale: float, floor: int = 2000) -> int:
    m = max(int(n * scale), floor)
    return m + (m % 2)


def check_cf_identities(scale: float, threads: int) -> Tuple[bool, str]:
    rng = np.random.default_rng(20240801)
    worst = 0.0
    for _ in range(20):
        model = random_valid_model(rng)
        assert validate(model).ok
        state = model.initial_state()
        T = rng.uniform(0.25, 1.5)
        one = phi_joint(model, state, 0.0, T, 0.0, 0.0).value
        if one != 1.0 + 0.0j:
            return False, f"phi(0,0) = {one!r} != 1"
        fwd = forward_price(model, 2, 0.0, T)
        cf_fwd = phi_joint(model, state, 0.0, T, 0.0, -1j).value
        worst = max(worst, abs(cf_fwd - fwd) / fwd)
    return worst <= 1e-10, f"max forward identity rel err {worst:.3e} (<= 1e-10)"


def check_riccati_oracle(scale: float, threads: int) -> Tuple[bool, str]:
    models = [desk_models()[0][1], desk_models()[2][1]]
    u_grid = [-20.0, -5.0, -1.0, -0.1, 0.0, 0.1, 1.0, 5.0, 20.0]
    worst = 0.0
    for model in models:
        for u in u_grid:
            u1, u2 = complex(u), complex(-0.5 * u)
            for s in (0.25, 0.5, 1.0, 1.5, 2.0):
                parts = riccati(model, s, u1, u2)
                d1, d2, c = rk4_exponents(model, s, u1, u2)
                worst = max(worst, abs(parts.d1 - d1), abs(parts.d2 - d2), abs(parts.c - c))
    return worst <= 1e-8, f"max |closed form - RK4| = {worst:.3e} (<= 1e-8)"


def check_margrabe(scale: float, threads: int) -> Tuple[bool, str]:
    model, T = margrabe_limit_model()
    sigma = math.sqrt(model.asset1.vol.eta + model.asset2.vol.eta)
    exact = margrabe_price(100.0, 96.0, 0.03, 0.02, T, sigma)
    four = exchange_price(model, None, 0.0, T).price
    rel = abs(four - exact) / exact
    cfg = SimConfig(_scaled(100_000, scale), round(250 * T), seed=301, antithetic=True, threads=threads)
    mc = price_exchange_mc(model, None, 0.0, T, cfg)
    z = abs(mc.price - exact) / mc.stderr
    ok = rel <= 1e-6 and z <= 3.0
    return ok, f"fourier rel err {rel:.2e} (<= 1e-6); MC z = {z:.2f} (<= 3)"


def check_cross_method(scale: float, threads: int) -> Tuple[bool, str]:
    bits = []
    ok = True
    for i, (name, model, T) in enumerate(desk_models()):
        four = exchange_price(model, None, 0.0, T).price
        cfg = SimConfig(
            _scaled(1_000_000, scale),
            round(500 * T),
            seed=400 + i,
            scheme="qe",
            antithetic=True,
            threads=threads,
        )
        mc = price_exchange_mc(model, None, 0.0, T, cfg)
        z = abs(mc.price - four) / mc.stderr
        ok = ok and z <= 3.0
        bits.append(f"{name} z={z:.2f}")
    return ok, "; ".join(bits) + " (|z| <= 3)"


def check_decomposition(scale: float, threads: int) -> Tuple[bool, str]:
    ok = True
    bits = []
    for i, (name, model, T) in enumerate(desk_models()):
        direct = exchange_price(model, None, 0.0, T)
        dec = exchange_price_decomposed(model, None, 0.0, T)
        gap = abs(direct.price - dec.price)
        ok = ok and gap <= 1e-8
        in_unit = -1e-6 <= dec.detail["prob1"] <= 1.0 + 1e-6 and -1e-6 <= dec.detail["prob2"] <= 1.0 + 1e-6
        ok = ok and in_unit
        if i < 3:
            state = model.initial_state()
            cfg = lambda s: SimConfig(
                _scaled(200_000, scale), round(500 * T), seed=s, scheme="qe",
                antithetic=True, threads=threads,
            )
            p1, se1 = qhat_prob(numeraire_shift_1(model), state, 0.0, T, cfg(500 + i))
            p2, se2 = qhat_prob(numeraire_shift_2(model), state, 0.0, T, cfg(550 + i))
            z1 = abs(p1 - dec.detail["prob1"]) / se1
            z2 = abs(p2 - dec.detail["prob2"]) / se2
            tau = T
            mc_price = (
                state.s1 * math.exp(-model.asset1.q * tau) * p1
                - state.s2 * math.exp(-model.asset2.q * tau) * p2
            )
            se_price = math.hypot(
                state.s1 * math.exp(-model.asset1.q * tau) * se1,
                state.s2 * math.exp(-model.asset2.q * tau) * se2,
            )
            zp = abs(mc_price - direct.price) / se_price
            ok = ok and z1 <= 3.0 and z2 <= 3.0 and zp <= 3.0
            bits.append(f"{name} gap={gap:.1e} z1={z1:.2f} z2={z2:.2f} zprice={zp:.2f}")
        else:
            bits.append(f"{name} gap={gap:.1e}")
    return ok, "; ".join(bits)


def check_r_independence(scale: float, threads: int) -> Tuple[bool, str]:
    _, model, T = ("d", *desk_models()[0][1:])
    price = exchange_price(model, None, 0.0, T).price
    dev = r_independence_check(model, None, 0.0, T, [0.0, 0.05, 0.15])
    rel = dev / price
    ctrl_model, ctrl_T, K = r_control_model()
    prices = [
        spread_lower_bound(replace(ctrl_model, r=r), None, 0.0, ctrl_T, K).price
        for r in (0.0, 0.05, 0.15)
    ]
    ctrl_rel = (max(prices) - min(prices)) / max(prices)
    ok = rel <= 1e-6 and ctrl_rel > 1e-3
    return ok, f"K=0 rel dev {rel:.2e} (<= 1e-6); K=100 control rel dev {ctrl_rel:.2e} (> 1e-3)"


def check_martingale(scale: float, threads: int) -> Tuple[bool, str]:
    _, model, T = desk_models()[0]
    cfg = SimConfig(_scaled(100_000, scale), round(250 * T), seed=700, antithetic=True, threads=threads)
    out = martingale_checks(model, None, 0.0, T, cfg)
    worst = 0.0
    for key in ("u1", "u2", "yield1", "yield2", "jump1", "jump2"):
        if key in out:
            m, se = out[key]
            worst = max(worst, abs(m - 1.0) / se)
    return worst <= 3.0, f"max |z| over U_i, yields, jump moments = {worst:.2f} (<= 3)"


def check_lower_bound(scale: float, threads: int) -> Tuple[bool, str]:
    ok = True
    bits = []
    for i, (name, model, T) in enumerate(desk_models()[:3]):
        for K in (5.0, 20.0):
            bound = spread_lower_bound(model, None, 0.0, T, K).price
            cfg = SimConfig(
                _scaled(200_000, scale), round(500 * T), seed=800 + i, scheme="qe",
                antithetic=True, threads=threads,
            )
            mc = price_spread_mc(model, None, 0.0, T, K, cfg)
            slack = (mc.price + 3.0 * mc.stderr) - bound
            ok = ok and slack >= 0.0
            bits.append(f"{name} K={K:g}: mc-bound={mc.price - bound:+.4f}±{mc.stderr:.4f}")
    return ok, "; ".join(bits)


def check_american(scale: float, threads: int) -> Tuple[bool, str]:
    models = american_models()
    bits = []
    ok = True
    lsm_paths = _scaled(100_000, scale, floor=20_000)
    bnd_paths = _scaled(16_384, scale, floor=8_192)

    def lsm_cfg(seed):
        return LSMConfig(n_paths=lsm_paths, n_dates=50, seed=seed, threads=threads)

    # (a) no dividends on asset 1, no jumps: premium vanishes
    model, T = models["no_dividend"]
    rep_a = lsm_price(model, None, 0.0, T, lsm_cfg(900))
    za = abs(rep_a.detail["premium_vs_european"]) / rep_a.detail["premium_stderr"]
    curve_a = solve_boundary(model, None, T, BoundarySolverConfig(seed=901, n_paths=bnd_paths, threads=threads))
    eep_a = eep_decomposition(model, None, 0.0, T, curve_a, lsm_cfg(902))
    ok_a = za <= 3.0 and abs(eep_a.term2) <= max(3.0 * (eep_a.stderr or 0.0), 1e-12)
    ok = ok and ok_a
    bits.append(f"(a) |z_premium|={za:.2f} eep_prem={eep_a.term2:.2e}")

    # (b) heavy asset-1 dividend: positive premium
    model, T = models["high_dividend"]
    rep_b = lsm_price(model, None, 0.0, T, lsm_cfg(910))
    zb = rep_b.detail["premium_vs_european"] / rep_b.detail["premium_stderr"]
    curve_b = solve_boundary(model, None, T, BoundarySolverConfig(seed=911, n_paths=bnd_paths, threads=threads))
    eep_b = eep_decomposition(model, None, 0.0, T, curve_b, lsm_cfg(912))
    zb2 = eep_b.term2 / eep_b.stderr
    ok_b = zb > 3.0 and zb2 > 3.0
    ok = ok and ok_b
    bits.append(f"(b) z_premium lsm={zb:.1f} eep={zb2:.1f} (> 3)")

    # (c) solved-boundary EEP vs LSM within 1% on three desk models
    for i, key in enumerate(("am1", "am2", "am3")):
        model, T = models[key]
        rep_l = lsm_price(model, None, 0.0, T, lsm_cfg(920 + 2 * i))
        curve = solve_boundary(
            model, None, T, BoundarySolverConfig(seed=921 + 2 * i, n_paths=bnd_paths, threads=threads)
        )
        rep_e = eep_decomposition(model, None, 0.0, T, curve, lsm_cfg(940 + 2 * i))
        gap = abs(rep_e.price - rep_l.price) / rep_l.price
        ok_c = gap <= 0.01
        ok = ok and ok_c
        bits.append(f"(c) {key} gap={gap:.3%}")

        # (d) dominance: C^A >= max(C^E, intrinsic) - 3 stderr
        eu = exchange_price(model, None, 0.0, T).price
        intrinsic = max(model.asset1.s0 - model.asset2.s0, 0.0)
        floor_val = max(eu, intrinsic)
        ok_d = (
            rep_l.price >= floor_val - 3.0 * rep_l.stderr
            and rep_e.price >= floor_val - 3.0 * rep_e.stderr
        )
        ok = ok and ok_d
    bits.append("(d) dominance checked on am1-am3")
    return ok, "; ".join(bits)


def reference_config_tree(n_paths: int = 20_000, n_steps: int = 100) -> dict:
    """Config tree for the bundled reference model (desk1)."""
    return {
        "schema_version": 1,
        "r": 0.05,
        "maturity": 0.5,
        "asset1": {
            "s0": 100.0,
            "q": 0.03,
            "vol": {"xi": 2.0, "eta": 0.04, "sigma": 0.25, "v0": 0.045},
            "jump": {"intensity": 0.4, "mu_j": -0.04, "sigma_j": 0.18},
        },
        "asset2": {
            "s0": 96.0,
            "q": 0.02,
            "vol": {"xi": 1.6, "eta": 0.05, "sigma": 0.30, "v0": 0.05, "risk_premium": 0.1},
            "jump": {"intensity": 0.25, "mu_j": 0.02, "sigma_j": 0.15},
        },
        "correlation": {"rho_wz1": -0.5, "rho_wz2": -0.4},
        "simulation": {"n_paths": n_paths, "n_steps": n_steps},
    }


def check_determinism(scale: float, threads: int) -> Tuple[bool, str]:
    import yaml

    env = {k: v for k, v in os.environ.items() if k != "SVJDX_OUT_DIR"}
    with tempfile.TemporaryDirectory() as tmp:
        cfg_path = os.path.join(tmp, "reference.yaml")
        with open(cfg_path, "w") as fh:
            yaml.safe_dump(reference_config_tree(), fh)
        outputs = []
        for command, fname in (("price-eu-mc", "mc"), ("price-eu-fourier", "fourier")):
            pair = []
            for run in (1, 2):
                out = os.path.join(tmp, f"{fname}_{run}.csv")
                proc = subprocess.run(
                    [
                        sys.executable, "-m", "svjdx.cli", command,
                        "-c", cfg_path, "--out", out, "--seed", "777", "--threads", "1",
                    ],
                    capture_output=True,
                    env=env,
                )
                if proc.returncode != 0:
                    return False, f"{command} run {run} exited {proc.returncode}: {proc.stderr.decode()[:200]}"
                with open(out, "rb") as fh:
                    pair.append(fh.read())
            outputs.append((command, pair[0] == pair[1]))
    ok = all(same for _, same in outputs)
    return ok, "; ".join(f"{cmd}: byte-identical={same}" for cmd, same in outputs)


CHECKS: Dict[str, Callable[[float, int], Tuple[bool, str]]] = {
    "01-cf-identities": check_cf_identities,
    "02-riccati-oracle": check_riccati_oracle,
    "03-margrabe-degeneration": check_margrabe,
    "04-cross-method": check_cross_method,
    "05-decomposition-comparability": check_decomposition,
    "06-r-independence": check_r_independence,
    "07-martingale-suite": check_martingale,
    "08-lower-bound": check_lower_bound,
    "09-american-suite": check_american,
    "10-determinism": check_determinism,
}


def run_checks(
    names: Optional[Sequence[str]] = None,
    scale: float = 1.0,
    threads: int = 1,
) -> List[CheckResult]:
    """Run the acceptance battery (all criteria or a named subset)."""
    selected = list(CHECKS) if not names else [n for n in CHECKS if n in set(names)]
    unknown = set(names or []) - set(CHECKS)
    if unknown:
        from .errors import ModelValidationError

        raise ModelValidationError([f"unknown check name(s): {sorted(unknown)}"])
    results = []
    for name in selected:
        start = time.perf_counter()
        try:
            passed, detail = CHECKS[name](scale, threads)
        except Exception as exc:  # a crashed check is a failed check
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        wall = (time.perf_counter() - start) * 1e3
        results.append(CheckResult(name, passed, detail, wall))
    return results
