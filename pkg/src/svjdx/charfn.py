"""Joint characteristic function of the two log prices (independent-volatility case).

Closed form for rho_w = rho_z = 0: the CF is exponential-affine in the state,
exp{i(u1 x1 + u2 x2) + C + D1 v1 + D2 v2} times the compound-Poisson factor
exp{sum_i lambda_i * tau * (phi_Y_i(u_i) - 1)}, with per-asset Riccati
solutions

    D_j(s) = -a_j (1 - e^{-g_j s}) / ((g_j + b_j) + (g_j - b_j) e^{-g_j s}),
    g_j = sqrt(sigma_j^2 a_j + b_j^2),  b_j = m_j - i u_j rho_wz_j sigma_j,

where m_j is the effective variance mean reversion under the working measure
and a_j = u_j^2 + i u_j under Q. Under the asset-j numeraire measure the log
price gains drift +v_j, flipping the sign of the linear term: a_j = u_j^2 -
i u_j; everything else is parameter substitution (tilted jump law, shifted
mean reversion), which is exactly the argument-shift identity
phi^(1)(u1, u2) = phi_Q(u1 - i, u2) / phi_Q(-i, 0).

Numerics: the formulas are rewritten with the exact identity g - b =
sigma^2 a / (g + b), which removes every subtractive cancellation, so the
vanishing vol-of-vol limit needs no separate branch. g is reflected to
Re(g) >= 0 (the expressions are even in g), bounding |e^{-g s}| by 1. The
log term is evaluated as log1p of an O(sigma^2) quantity — the branch-stable
form — and continuity in s is asserted by tests instead of rotation-count
corrections. Validity strip: evaluation raises CFDomainError wherever g_j
degenerates, the log argument touches (-inf, 0], or a non-finite value
appears (complex arguments beyond the model's moment explosion).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from .errors import CFDomainError
from .market import JumpSpec, MarketState
from .measures import AssetDynamics, ModelDynamics, ModelLike, as_dynamics

_SERIES_CUT = 1e-4
_GAMMA_TINY = 1e-10

ComplexLike = Union[complex, float, np.ndarray]


@dataclass(frozen=True)
class RiccatiParts:
    """Riccati discriminants g_j, solutions D_j and aggregate exponent C at horizon s."""

    gamma1: complex
    gamma2: complex
    d1: complex
    d2: complex
    c: complex


@dataclass(frozen=True)
class CFValue:
    """One CF evaluation: value, arguments, horizon, conditioning state, measure."""

    value: complex
    u1: complex
    u2: complex
    horizon: float
    state: Tuple[float, float, float, float]  # (x1, x2, v1, v2)
    measure_tag: str


def phi_jump(jump: JumpSpec, u: ComplexLike) -> ComplexLike:
    """Normal-jump-size CF exp(i u mu_j - sigma_j^2 u^2 / 2) at complex u."""
    u = np.asarray(u, dtype=complex)
    out = np.exp(1j * u * jump.mu_j - 0.5 * jump.sigma_j**2 * u * u)
    return out if out.ndim else complex(out)


def _expm1_c(z: np.ndarray) -> np.ndarray:
    """exp(z) - 1 for complex z, accurate near zero."""
    small = np.abs(z) < _SERIES_CUT
    out = np.exp(z) - 1.0
    if np.any(small):
        zs = np.where(small, z, 0.0)
        series = zs * (1.0 + zs * (0.5 + zs * (1.0 / 6.0 + zs / 24.0)))
        out = np.where(small, series, out)
    return out


def _log1p_over_c(eps: np.ndarray) -> np.ndarray:
    """log(1 + eps)/eps for complex eps, accurate near zero; checks the log branch."""
    arg = 1.0 + eps
    on_cut = (arg.real <= 0.0) & (np.abs(arg.imag) <= 1e-14 * (1.0 + np.abs(arg.real)))
    if np.any(on_cut):
        raise CFDomainError(
            "CF log argument crossed the negative real axis; the requested "
            "complex arguments are outside the validity strip (try a smaller delta)"
        )
    small = np.abs(eps) < _SERIES_CUT
    safe = np.where(small, 1.0, eps)
    out = np.log(np.where(small, 1.0, arg)) / safe
    if np.any(small):
        es = np.where(small, eps, 0.0)
        series = 1.0 + es * (-0.5 + es * (1.0 / 3.0 - es * 0.25))
        out = np.where(small, series, out)
    return out


def _asset_terms(
    dyn_asset: AssetDynamics, beta: float, s: float, u: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (gamma, D, C-contribution) for one asset at horizon s."""
    sig = dyn_asset.sigma
    a = u * u - 2.0 * beta * 1j * u
    b = dyn_asset.kappa_mr - 1j * u * dyn_asset.rho_wz * sig
    gamma = np.sqrt(sig * sig * a + b * b)
    gamma = np.where(gamma.real < 0.0, -gamma, gamma)  # formulas are even in gamma

    scale = np.abs(b) + sig * np.abs(u) + dyn_asset.kappa_mr
    if np.any(np.abs(gamma) <= _GAMMA_TINY * scale):
        raise CFDomainError(
            "degenerate Riccati discriminant (gamma ~ 0); arguments are on the "
            "boundary of the CF validity strip"
        )

    em1 = _expm1_c(-gamma * s)
    gpb = gamma + b
    # g - b = sigma^2 a / (g + b) exactly; keeps the sigma -> 0 limit stable.
    d = a * em1 / (2.0 * gamma + sig * sig * a * em1 / gpb)
    h = a * em1 / (2.0 * gamma * gpb)
    eps = sig * sig * h
    c_vol = dyn_asset.vtheta * (-a * s / gpb - 2.0 * h * _log1p_over_c(eps))
    c = 1j * u * s * dyn_asset.drift_const + c_vol
    return gamma, d, c


def _betas(dyn: ModelDynamics) -> Tuple[float, float]:
    return (
        0.5 if dyn.numeraire == 1 else -0.5,
        0.5 if dyn.numeraire == 2 else -0.5,
    )


def _require_independent_vol(dyn: ModelDynamics, who: str) -> None:
    if dyn.rho_w != 0.0 or dyn.rho_z != 0.0:
        raise CFDomainError(
            f"{who} requires the independent-volatility correlation structure "
            f"rho_w = rho_z = 0 (closed-form CF assumption); got "
            f"rho_w={dyn.rho_w}, rho_z={dyn.rho_z}"
        )


def riccati_parts(
    model: ModelLike, s: float, u1: ComplexLike, u2: ComplexLike
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized (gamma1, gamma2, D1, D2, C) at horizon s for arrays u1, u2."""
    dyn = as_dynamics(model)
    _require_independent_vol(dyn, "riccati")
    if s < 0.0:
        raise ValueError(f"horizon s must be >= 0, got {s}")
    b1, b2 = _betas(dyn)
    u1 = np.asarray(u1, dtype=complex)
    u2 = np.asarray(u2, dtype=complex)
    g1, d1, c1 = _asset_terms(dyn.asset1, b1, s, u1)
    g2, d2, c2 = _asset_terms(dyn.asset2, b2, s, u2)
    c = c1 + c2
    for arr in (d1, d2, c):
        if not np.all(np.isfinite(arr)):
            raise CFDomainError(
                "non-finite Riccati value; arguments are outside the CF validity strip"
            )
    return g1, g2, d1, d2, c


def riccati(model: ModelLike, s: float, u1: complex, u2: complex) -> RiccatiParts:
    """Riccati discriminants and solutions for scalar arguments (s = 0 gives exact zeros)."""
    g1, g2, d1, d2, c = riccati_parts(model, s, u1, u2)
    return RiccatiParts(complex(g1), complex(g2), complex(d1), complex(d2), complex(c))


def log_phi_joint(
    model: ModelLike,
    x1: ComplexLike,
    x2: ComplexLike,
    v1: ComplexLike,
    v2: ComplexLike,
    tau: float,
    u1: ComplexLike,
    u2: ComplexLike,
) -> np.ndarray:
    """log E[exp(i(u1 X1_T + u2 X2_T)) | state] over horizon tau; vectorized.

    State components and arguments broadcast against each other.
    """
    dyn = as_dynamics(model)
    _require_independent_vol(dyn, "phi_joint")
    u1 = np.asarray(u1, dtype=complex)
    u2 = np.asarray(u2, dtype=complex)
    _, _, d1, d2, c = riccati_parts(dyn, tau, u1, u2)
    out = 1j * (u1 * np.asarray(x1) + u2 * np.asarray(x2)) + c
    out = out + d1 * np.asarray(v1) + d2 * np.asarray(v2)
    for idx, jump in ((1, dyn.asset1.jump), (2, dyn.asset2.jump)):
        if jump.active:
            u = u1 if idx == 1 else u2
            out = out + jump.intensity * tau * (phi_jump(jump, u) - 1.0)
    return out


def phi_joint(
    model: ModelLike,
    state: MarketState,
    t: float,
    T: float,
    u1: complex,
    u2: complex,
) -> CFValue:
    """Conditional joint CF of the log prices at maturity T given the time-t state."""
    if not 0.0 <= t <= T:
        raise ValueError(f"require 0 <= t <= T, got t={t}, T={T}")
    dyn = as_dynamics(model)
    log_phi = log_phi_joint(dyn, state.x1, state.x2, state.v1, state.v2, T - t, u1, u2)
    value = complex(np.exp(log_phi))
    if not (np.isfinite(value.real) and np.isfinite(value.imag)):
        raise CFDomainError(
            "CF value overflowed or is undefined for these arguments "
            "(outside the validity strip)"
        )
    return CFValue(
        value=value,
        u1=complex(u1),
        u2=complex(u2),
        horizon=T - t,
        state=(state.x1, state.x2, state.v1, state.v2),
        measure_tag=dyn.measure_tag,
    )
