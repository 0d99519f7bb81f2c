"""Measure changes: exponential jump tilts and the two numeraire shifts.

The engine represents a model *under a working measure* as `ModelDynamics`:
per-asset drift constants, effective variance coefficients, the active jump
law and — for the numeraire measures — a drift-rule tag saying which asset's
sqrt-variance drives the extra Wiener drift. Q dynamics come from
`q_dynamics`; the Qhat1/Qhat2 variants are produced only by
`numeraire_shift_1` / `numeraire_shift_2`.

Under the asset-i numeraire measure the Q-Wiener vector gains drift
Sigma @ e_{W_i} * sqrt(v_i): +sqrt(v_i) on the own stock Wiener, +rho_w
sqrt(v_i) on the other stock Wiener and +rho_wz_i sqrt(v_i) on the own
variance Wiener. Folding the variance drift into the coefficients gives mean
reversion xi_i + Lambda_i - sigma_i*rho_wz_i with the product (mean reversion
x long-run level) invariant, so the Feller margin is preserved exactly. The
asset-i jump layer is tilted by gamma=1 (intensity factor 1 + kappa, mean
shift sigma_j^2); the other asset's layer is untouched. Jump drift
compensators stay at their Q values: re-measuring moves Wiener drifts and the
jump law, not the dt-coefficients inherited from the Q dynamics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

from .errors import ModelValidationError
from .market import (
    MEASURE_Q,
    MEASURE_QHAT1,
    MEASURE_QHAT2,
    JumpSpec,
    MarketModel,
    require_valid,
)


@dataclass(frozen=True)
class MeasureShift:
    """Radon-Nikodym parameterization of a physical-to-Q measure change.

    gamma1/gamma2 tilt the jump-size laws, nu1/nu2 tilt the Poisson
    intensities. The Wiener drift component theta of the density is pinned
    by the martingale condition on the discounted yield processes (the
    market prices of risk), so it never enters numerically once drift
    parameters are quoted under Q; it is carried here as documentation
    only. Defaults mean "inputs are already Q parameters".
    """

    gamma1: float = 0.0
    gamma2: float = 0.0
    nu1: float = 0.0
    nu2: float = 0.0


@dataclass(frozen=True)
class AssetDynamics:
    """One asset's coefficients under the working measure.

    drift_const is the dt-coefficient of the log price before the -v/2 term,
    r - q - lambda~*kappa~, fixed at its Q value across measures. kappa_mr is
    the effective variance mean-reversion rate; vtheta is the invariant
    product (mean reversion x long-run level) = xi*eta.
    """

    q: float
    drift_const: float
    kappa_mr: float
    vtheta: float
    sigma: float
    rho_wz: float
    jump: JumpSpec

    @property
    def theta_lr(self) -> float:
        """Effective long-run variance vtheta / kappa_mr."""
        return self.vtheta / self.kappa_mr


@dataclass(frozen=True)
class ModelDynamics:
    """A market model expressed under a specific pricing measure.

    numeraire is None under Q; under Qhat_i it names the asset whose
    sqrt-variance drives the additional Wiener drift (drift-rule metadata
    consumed by the simulator and the characteristic function).
    """

    measure_tag: str
    r: float
    rho_w: float
    rho_z: float
    asset1: AssetDynamics
    asset2: AssetDynamics
    numeraire: Optional[int] = None

    def asset(self, index: int) -> AssetDynamics:
        if index == 1:
            return self.asset1
        if index == 2:
            return self.asset2
        raise ValueError(f"asset index must be 1 or 2, got {index}")


ModelLike = Union[MarketModel, ModelDynamics]


def tilt_jump(jump: JumpSpec, gamma: float, nu: float) -> JumpSpec:
    """Exponential tilt of a compound-Poisson layer with normal jump sizes.

    intensity' = intensity * e^nu * exp(gamma*mu_j + gamma^2*sigma_j^2/2),
    mu_j' = mu_j + gamma*sigma_j^2, sigma_j' = sigma_j. A disabled layer
    stays disabled.
    """
    if not jump.active:
        return JumpSpec(0.0, jump.mu_j, jump.sigma_j)
    mgf = math.exp(gamma * jump.mu_j + 0.5 * gamma**2 * jump.sigma_j**2)
    return JumpSpec(
        intensity=jump.intensity * math.exp(nu) * mgf,
        mu_j=jump.mu_j + gamma * jump.sigma_j**2,
        sigma_j=jump.sigma_j,
    )


def apply_measure_shift(model: MarketModel, shift: MeasureShift) -> MarketModel:
    """Re-quote a model whose jump layers were given under the physical measure.

    Applies the (gamma_i, nu_i) tilts to both jump layers and returns a model
    tagged Q. Diffusion and variance parameters are quoted under Q directly,
    so they pass through unchanged.
    """
    from dataclasses import replace

    a1 = replace(model.asset1, jump=tilt_jump(model.asset1.jump, shift.gamma1, shift.nu1))
    a2 = replace(model.asset2, jump=tilt_jump(model.asset2.jump, shift.gamma2, shift.nu2))
    return replace(model, asset1=a1, asset2=a2, measure_tag=MEASURE_Q)


def risk_neutral_drift(model: MarketModel, asset_index: int) -> float:
    """dt-coefficient r - q_i - lambda~_i*kappa~_i of the Q log price (before -v/2)."""
    if model.measure_tag != MEASURE_Q:
        raise ModelValidationError(
            [f"risk_neutral_drift requires a Q-measure model, got '{model.measure_tag}'"]
        )
    asset = model.asset(asset_index)
    return model.r - asset.q - asset.jump.compensator()


def _asset_dynamics_q(model: MarketModel, index: int) -> AssetDynamics:
    asset = model.asset(index)
    vol = asset.vol
    return AssetDynamics(
        q=asset.q,
        drift_const=risk_neutral_drift(model, index),
        kappa_mr=vol.xi + vol.risk_premium,
        vtheta=vol.xi * vol.eta,
        sigma=vol.sigma,
        rho_wz=getattr(model.corr, f"rho_wz{index}"),
        jump=asset.jump,
    )


def q_dynamics(model: MarketModel) -> ModelDynamics:
    """Dynamics under Q: mean reversion xi+Lambda, long-run xi*eta/(xi+Lambda)."""
    require_valid(model)
    return ModelDynamics(
        measure_tag=MEASURE_Q,
        r=model.r,
        rho_w=model.corr.rho_w,
        rho_z=model.corr.rho_z,
        asset1=_asset_dynamics_q(model, 1),
        asset2=_asset_dynamics_q(model, 2),
        numeraire=None,
    )


def _numeraire_shift(model: MarketModel, index: int) -> ModelDynamics:
    require_valid(model)
    if model.corr.rho_z != 0.0:
        raise ModelValidationError(
            [
                f"numeraire_shift_{index} requires rho_z = 0 (the change-of-"
                f"numeraire analysis assumes uncorrelated variance Wieners); "
                f"got rho_z = {model.corr.rho_z}"
            ]
        )
    base = q_dynamics(model)
    own = base.asset(index)
    shifted_mr = own.kappa_mr - own.sigma * own.rho_wz
    if shifted_mr <= 0.0:
        raise ModelValidationError(
            [
                f"numeraire_shift_{index} requires xi + Lambda - sigma*rho_wz > 0 "
                f"for asset {index}, got {shifted_mr:.6g}"
            ]
        )
    shifted_own = AssetDynamics(
        q=own.q,
        drift_const=own.drift_const,
        kappa_mr=shifted_mr,
        vtheta=own.vtheta,  # product invariant: Feller margin preserved exactly
        sigma=own.sigma,
        rho_wz=own.rho_wz,
        jump=tilt_jump(own.jump, gamma=1.0, nu=0.0),
    )
    assets = {1: base.asset1, 2: base.asset2}
    assets[index] = shifted_own
    return ModelDynamics(
        measure_tag=MEASURE_QHAT1 if index == 1 else MEASURE_QHAT2,
        r=base.r,
        rho_w=base.rho_w,
        rho_z=base.rho_z,
        asset1=assets[1],
        asset2=assets[2],
        numeraire=index,
    )


def numeraire_shift_1(model: MarketModel) -> ModelDynamics:
    """Dynamics under the asset-1 numeraire measure Qhat1."""
    return _numeraire_shift(model, 1)


def numeraire_shift_2(model: MarketModel) -> ModelDynamics:
    """Dynamics under the asset-2 numeraire measure Qhat2."""
    return _numeraire_shift(model, 2)


def as_dynamics(model: ModelLike) -> ModelDynamics:
    """Coerce a MarketModel (treated as Q) or pass ModelDynamics through."""
    if isinstance(model, ModelDynamics):
        tag = model.measure_tag
        if tag not in (MEASURE_Q, MEASURE_QHAT1, MEASURE_QHAT2):
            raise ModelValidationError([f"unknown measure tag '{tag}'"])
        if tag != MEASURE_Q and model.numeraire not in (1, 2):
            raise ModelValidationError(
                [
                    f"dynamics tagged '{tag}' lack numeraire drift metadata; "
                    "shifted measures must come from numeraire_shift_1/2"
                ]
            )
        return model
    return q_dynamics(model)
