"""Two-asset SVJD market model: parameter containers, validation, derived scalars.

Each asset follows a square-root stochastic variance with an independent
compound-Poisson jump layer (lognormal jump sizes). All rates are annualized
and time is measured in years. Model objects are immutable and safe to share
across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import ModelValidationError

MEASURE_Q = "Q"
MEASURE_QHAT1 = "Qhat1"
MEASURE_QHAT2 = "Qhat2"

# Numerical slack for the positive-semi-definiteness check of the 4x4
# Wiener correlation matrix.
PSD_EIG_TOL = -1e-12


@dataclass(frozen=True)
class VolParams:
    """Square-root variance parameters for one asset.

    xi, eta, sigma are the mean-reversion rate, long-run variance and
    vol-of-vol of the variance process; v0 is the starting variance.
    risk_premium is the slope of the variance risk premium (the market
    price of volatility risk is risk_premium * v_t), nonnegative.
    """

    xi: float
    eta: float
    sigma: float
    v0: float
    risk_premium: float = 0.0

    def feller_margin(self) -> float:
        """2*xi*eta - sigma^2; nonnegative iff the variance stays positive."""
        return 2.0 * self.xi * self.eta - self.sigma**2


@dataclass(frozen=True)
class JumpSpec:
    """Compound-Poisson jump layer: intensity plus N(mu_j, sigma_j^2) log jump sizes.

    intensity == 0 disables the layer entirely.
    """

    intensity: float
    mu_j: float = 0.0
    sigma_j: float = 0.0

    def kappa(self) -> float:
        """Expected relative jump-size increment E[e^Y - 1]; always > -1."""
        return math.exp(self.mu_j + 0.5 * self.sigma_j**2) - 1.0

    @property
    def active(self) -> bool:
        return self.intensity > 0.0

    def compensator(self) -> float:
        """intensity * kappa, the drift compensation of the jump layer."""
        return self.intensity * self.kappa() if self.active else 0.0


@dataclass(frozen=True)
class CorrelationStructure:
    """Instantaneous correlations of the four driving Wiener processes.

    rho_w couples the two stock Wieners, rho_wz1/rho_wz2 are the per-asset
    leverage correlations, rho_z couples the two variance Wieners. Cross
    correlations W1-Z2 and W2-Z1 are zero by construction.
    """

    rho_w: float = 0.0
    rho_wz1: float = 0.0
    rho_wz2: float = 0.0
    rho_z: float = 0.0

    def matrix(self) -> np.ndarray:
        """4x4 correlation matrix in (W1, W2, Z1, Z2) order."""
        return np.array(
            [
                [1.0, self.rho_w, self.rho_wz1, 0.0],
                [self.rho_w, 1.0, 0.0, self.rho_wz2],
                [self.rho_wz1, 0.0, 1.0, self.rho_z],
                [0.0, self.rho_wz2, self.rho_z, 1.0],
            ]
        )


@dataclass(frozen=True)
class AssetParams:
    """Spot, dividend yield and the stochastic layers of one asset."""

    s0: float
    q: float
    vol: VolParams
    jump: JumpSpec = field(default_factory=lambda: JumpSpec(0.0))


@dataclass(frozen=True)
class MarketModel:
    """Full two-asset model under the risk-neutral measure Q.

    Models are always constructed under Q; the numeraire-shifted variants
    live in `svjdx.measures.ModelDynamics` and are produced only by the
    measure-change transforms.
    """

    asset1: AssetParams
    asset2: AssetParams
    corr: CorrelationStructure
    r: float
    measure_tag: str = MEASURE_Q

    def asset(self, index: int) -> AssetParams:
        if index == 1:
            return self.asset1
        if index == 2:
            return self.asset2
        raise ValueError(f"asset index must be 1 or 2, got {index}")

    def initial_state(self) -> "MarketState":
        return MarketState(
            s1=self.asset1.s0,
            s2=self.asset2.s0,
            v1=self.asset1.vol.v0,
            v2=self.asset2.vol.v0,
        )


@dataclass(frozen=True)
class MarketState:
    """Point state (spots and variances) at which an operation is evaluated."""

    s1: float
    s2: float
    v1: float
    v2: float

    @property
    def x1(self) -> float:
        return math.log(self.s1)

    @property
    def x2(self) -> float:
        return math.log(self.s2)


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of `validate`: the list of violated invariants, empty if valid."""

    violations: List[str]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:  # truthy == valid
        return self.ok


def _check_vol(tag: str, vol: VolParams, out: List[str]) -> None:
    for name in ("xi", "eta", "sigma", "v0"):
        value = getattr(vol, name)
        if not math.isfinite(value):
            out.append(f"{tag}.{name} is not finite: {value}")
        elif value <= 0.0:
            out.append(f"{tag}.{name} must be > 0, got {value}")
    if not math.isfinite(vol.risk_premium) or vol.risk_premium < 0.0:
        out.append(f"{tag}.risk_premium must be >= 0, got {vol.risk_premium}")
    if vol.feller_margin() < 0.0:
        out.append(
            f"{tag}: Feller condition 2*xi*eta >= sigma^2 violated: "
            f"{2.0 * vol.xi * vol.eta:.6g} < {vol.sigma**2:.6g}"
        )


def _check_jump(tag: str, jump: JumpSpec, out: List[str]) -> None:
    if not math.isfinite(jump.intensity) or jump.intensity < 0.0:
        out.append(f"{tag}.intensity must be >= 0, got {jump.intensity}")
    if not math.isfinite(jump.mu_j):
        out.append(f"{tag}.mu_j is not finite: {jump.mu_j}")
    if not math.isfinite(jump.sigma_j) or jump.sigma_j < 0.0:
        out.append(f"{tag}.sigma_j must be >= 0, got {jump.sigma_j}")


def validate(model: MarketModel) -> ValidationReport:
    """Check every model invariant; total (never raises on finite input).

    Returns a report listing each violated invariant with the offending
    value. An empty report means the model is valid.
    """
    out: List[str] = []

    if model.measure_tag != MEASURE_Q:
        out.append(
            f"measure_tag must be '{MEASURE_Q}' on a MarketModel "
            f"(got '{model.measure_tag}'); shifted measures are produced by "
            "the measure-change transforms"
        )
    if not math.isfinite(model.r):
        out.append(f"r is not finite: {model.r}")

    for idx in (1, 2):
        asset = model.asset(idx)
        tag = f"asset{idx}"
        if not math.isfinite(asset.s0) or asset.s0 <= 0.0:
            out.append(f"{tag}.s0 must be > 0, got {asset.s0}")
        if not math.isfinite(asset.q) or asset.q < 0.0:
            out.append(f"{tag}.q must be >= 0, got {asset.q}")
        _check_vol(f"{tag}.vol", asset.vol, out)
        _check_jump(f"{tag}.jump", asset.jump, out)

    corr = model.corr
    for name in ("rho_w", "rho_wz1", "rho_wz2", "rho_z"):
        rho = getattr(corr, name)
        if not math.isfinite(rho) or not (-1.0 < rho < 1.0):
            out.append(f"corr.{name} must lie in (-1, 1), got {rho}")

    # Leverage bound rho_wz_i < min(xi_i/sigma_i, 1): keeps the variance
    # mean reversion positive under every measure used by the engine.
    for idx in (1, 2):
        vol = model.asset(idx).vol
        rho = getattr(corr, f"rho_wz{idx}")
        if vol.sigma > 0.0 and math.isfinite(rho):
            bound = min(vol.xi / vol.sigma, 1.0)
            if not (rho < bound):
                out.append(
                    f"corr.rho_wz{idx} must be < min(xi{idx}/sigma{idx}, 1) "
                    f"= {bound:.6g}, got {rho}"
                )

    sigma_mat = corr.matrix()
    if np.all(np.isfinite(sigma_mat)):
        min_eig = float(np.linalg.eigvalsh(sigma_mat).min())
        if min_eig < PSD_EIG_TOL:
            out.append(
                "corr: 4x4 Wiener correlation matrix is not positive "
                f"semi-definite (min eigenvalue {min_eig:.3e})"
            )

    return ValidationReport(out)


def require_valid(model: MarketModel) -> MarketModel:
    """Raise ModelValidationError unless `validate(model)` is clean."""
    report = validate(model)
    if not report.ok:
        raise ModelValidationError(report.violations)
    return model


def kappa(jump: JumpSpec) -> float:
    """Expected relative jump-size increment exp(mu_j + sigma_j^2/2) - 1."""
    return jump.kappa()


def forward_price(
    model: MarketModel,
    asset_index: int,
    t: float,
    T: float,
    state: Optional[MarketState] = None,
) -> float:
    """Forward price S_i(t) * exp((r - q_i)(T - t)) under Q.

    `state` overrides the model spots; defaults to the model's initial state.
    """
    if model.measure_tag != MEASURE_Q:
        raise ModelValidationError(
            [f"forward_price requires a Q-measure model, got '{model.measure_tag}'"]
        )
    if not T > t:
        raise ValueError(f"require T > t, got t={t}, T={T}")
    asset = model.asset(asset_index)
    spot = asset.s0 if state is None else (state.s1 if asset_index == 1 else state.s2)
    return spot * math.exp((model.r - asset.q) * (T - t))
