"""American exchange option valuation.

Three cooperating pieces:

* `lsm_price` — regression Monte Carlo over a date grid (exercise policy from
  an in-the-money regression, classic low-bias estimator). Payoffs and
  regressands are normalized by S2 (the price is degree-1 homogeneous), with
  a polynomial basis in (ln(S1/S2), v1, v2). A second all-paths regression
  per date is kept as a reusable continuation-value surface.

* `eep_decomposition` — the early-exercise-premium representation: American
  price = European price + a dividend-flow integral over the stopping region
  minus two jump rebalancing-cost integrals over the events where a jump
  knocks the pre-jump state from the stopping region back into continuation
  ({B <= S1/S2 < B e^{-Y1}} for asset-1 jumps, {B <= S1/S2 < B e^{Y2}} for
  asset-2 jumps; empty for Y1 >= 0 resp. Y2 <= 0). Inner jump expectations
  are sampled; continuation values at jumped states come from the LSM
  surface, clamped at intrinsic^+ so each rebalancing-cost sample is
  nonnegative before its minus sign.

* `solve_boundary` — backward value-matching fixed point for a critical
  price-ratio curve B(t) >= 1 on a time grid, with variances collapsed to
  their deterministic projections E[v_t] (the boundary's volatility arguments
  are averaged out; the LSM oracle, whose regression keeps v1 and v2, bounds
  the induced error). Per node one path set is simulated from ratio 1 and
  reused for every iterate: a path's ratio under a boundary trial B is just
  B e^{X1 - X2}, so value matching costs no re-simulation. Terminal value
  B(T) = max(1, q2/q1); q1 = 0 yields the no-exercise sentinel (+inf), which
  is exact: C^A >= S1 e^{-q1 tau} - S2 e^{-q2 tau} >= S1 - S2 when q1 = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .charfn import log_phi_joint
from .errors import ModelValidationError
from .fourier import QuadratureConfig, exchange_price
from .market import MarketModel, MarketState, require_valid
from .mc import SimConfig, mean_stderr, pair_collapse, price_exchange_mc, simulate
from .measures import as_dynamics
from .reporting import PriceReport


@dataclass(frozen=True)
class LSMConfig:
    """Regression Monte Carlo settings (also drives the premium estimator)."""

    n_paths: int
    n_dates: int
    seed: int
    degree: int = 2
    steps_per_date: int = 2
    scheme: str = "full-truncation-euler"
    antithetic: bool = True
    threads: int = 1

    def check(self) -> "LSMConfig":
        problems = []
        if self.degree < 2:
            problems.append(f"lsm.degree must be >= 2, got {self.degree}")
        if self.n_dates < 10:
            problems.append(f"lsm.n_dates must be >= 10, got {self.n_dates}")
        if self.n_paths < 100:
            problems.append(f"lsm.n_paths must be >= 100, got {self.n_paths}")
        if self.steps_per_date < 1:
            problems.append(f"lsm.steps_per_date must be >= 1, got {self.steps_per_date}")
        if problems:
            raise ModelValidationError(problems)
        return self

    def sim_config(self) -> SimConfig:
        return SimConfig(
            n_paths=self.n_paths,
            n_steps=self.n_dates * self.steps_per_date,
            seed=self.seed,
            scheme=self.scheme,
            antithetic=self.antithetic,
            threads=self.threads,
        ).check()

    def as_dict(self) -> dict:
        return {
            "n_paths": self.n_paths,
            "n_dates": self.n_dates,
            "seed": self.seed,
            "degree": self.degree,
            "steps_per_date": self.steps_per_date,
            "scheme": self.scheme,
            "antithetic": self.antithetic,
        }


@dataclass
class BoundaryCurve:
    """Early-exercise boundary B(t) >= 1 on a time grid, +inf where exercise is never optimal."""

    times: np.ndarray
    values: np.ndarray
    residuals: Optional[np.ndarray] = None
    converged: bool = True

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.times.ndim != 1 or self.times.shape != self.values.shape:
            raise ModelValidationError(["boundary times/values must be matching 1-d arrays"])
        if np.any(np.diff(self.times) <= 0.0):
            raise ModelValidationError(["boundary times must be strictly increasing"])
        if np.any(self.values < 1.0):
            raise ModelValidationError(["boundary values must be >= 1 (critical price ratio)"])

    def covers(self, t: float, T: float) -> bool:
        eps = 1e-9 * max(1.0, abs(T))
        return self.times[0] <= t + eps and self.times[-1] >= T - eps

    def value_at(self, u) -> np.ndarray:
        """Piecewise-linear interpolation in t; any +inf endpoint makes the segment +inf."""
        u = np.atleast_1d(np.asarray(u, dtype=float))
        t = np.clip(u, self.times[0], self.times[-1])
        idx = np.clip(np.searchsorted(self.times, t, side="right") - 1, 0, len(self.times) - 2)
        t0 = self.times[idx]
        t1 = self.times[idx + 1]
        b0 = self.values[idx]
        b1 = self.values[idx + 1]
        w = np.where(t1 > t0, (t - t0) / np.where(t1 > t0, t1 - t0, 1.0), 0.0)
        out = np.full(u.shape, np.inf)
        finite = np.isfinite(b0) & np.isfinite(b1)
        out[finite] = b0[finite] * (1.0 - w[finite]) + b1[finite] * w[finite]
        return out


def _basis(x: np.ndarray, v1: np.ndarray, v2: np.ndarray, degree: int) -> np.ndarray:
    """Monomials x^i v1^j v2^k with total degree i+j+k <= degree."""
    cols = []
    for i in range(degree + 1):
        for j in range(degree + 1 - i):
            for k in range(degree + 1 - i - j):
                cols.append((x**i) * (v1**j) * (v2**k))
    return np.column_stack(cols)


class LSMSurface:
    """Per-date continuation-value regressions (all paths), normalized by S2."""

    def __init__(self, dates: np.ndarray, coeffs: List[Optional[np.ndarray]], degree: int):
        self.dates = dates
        self.coeffs = coeffs  # index aligned with dates; None at the terminal date
        self.degree = degree

    def continuation(self, date_idx: int, ln_r: np.ndarray, v1, v2) -> np.ndarray:
        """Continuation value per unit of S2 at the given exercise date."""
        coef = self.coeffs[date_idx]
        if coef is None:  # terminal date: continuation is the payoff itself
            return np.maximum(np.exp(ln_r) - 1.0, 0.0)
        v1 = np.broadcast_to(np.asarray(v1, dtype=float), np.shape(ln_r))
        v2 = np.broadcast_to(np.asarray(v2, dtype=float), np.shape(ln_r))
        return _basis(np.asarray(ln_r, dtype=float), v1, v2, self.degree) @ coef


def _fit_lsm(
    model: MarketModel,
    state: MarketState,
    t: float,
    T: float,
    cfg: LSMConfig,
) -> Tuple[PriceReport, LSMSurface]:
    cfg.check()
    require_valid(model)
    dyn = as_dynamics(model)
    dates = np.linspace(t, T, cfg.n_dates + 1)
    batch = simulate(model, state, t, T, cfg.sim_config(), store_times=dates)
    snaps = batch.snaps
    r = dyn.r
    n_terms = _basis(np.zeros(1), np.zeros(1), np.zeros(1), cfg.degree).shape[1]

    last = cfg.n_dates
    s1 = np.exp(snaps["x1"][last])
    s2 = np.exp(snaps["x2"][last])
    cash = np.maximum(s1 - s2, 0.0)
    ex_time = np.full(batch.n_paths, dates[last])

    coeffs: List[Optional[np.ndarray]] = [None] * (cfg.n_dates + 1)
    rank_deficient = False

    for k in range(cfg.n_dates - 1, 0, -1):
        s1 = np.exp(snaps["x1"][k])
        s2 = np.exp(snaps["x2"][k])
        v1 = snaps["v1"][k]
        v2 = snaps["v2"][k]
        ln_r = snaps["x1"][k] - snaps["x2"][k]
        payoff = np.maximum(s1 - s2, 0.0)
        disc_cf = cash * np.exp(-r * (ex_time - dates[k]))

        design = _basis(ln_r, v1, v2, cfg.degree)
        coef_all, _, rank, _ = np.linalg.lstsq(design, disc_cf / s2, rcond=None)
        coeffs[k] = coef_all
        if rank < n_terms:
            rank_deficient = True

        itm = payoff > 0.0
        if int(itm.sum()) >= 2 * n_terms:
            coef_itm, _, rank_itm, _ = np.linalg.lstsq(
                design[itm], disc_cf[itm] / s2[itm], rcond=None
            )
            if rank_itm < n_terms:
                rank_deficient = True
            cont = np.full(batch.n_paths, np.inf)
            cont[itm] = s2[itm] * (design[itm] @ coef_itm)
        else:
            cont = s2 * (design @ coef_all)
        exercise = itm & (payoff > cont)
        cash = np.where(exercise, payoff, cash)
        ex_time = np.where(exercise, dates[k], ex_time)

    value = cash * np.exp(-r * (ex_time - t))
    mean, se = mean_stderr(value, cfg.antithetic)
    # Same-paths European leg: the pathwise difference isolates the early
    # exercise premium from scheme discretization bias.
    euro_value = np.exp(-r * (T - t)) * np.maximum(
        np.exp(snaps["x1"][last]) - np.exp(snaps["x2"][last]), 0.0
    )
    prem_mean, prem_se = mean_stderr(value - euro_value, cfg.antithetic)
    intrinsic = max(state.s1 - state.s2, 0.0)
    report = PriceReport(
        price=max(mean, intrinsic),
        method="lsm",
        measure_tag="Q",
        stderr=se,
        seed=cfg.seed,
        config={**cfg.as_dict(), "t": t, "T": T},
        detail={
            "low_bias": 1.0,
            "policy_estimate": mean,
            "intrinsic": intrinsic,
            "premium_vs_european": prem_mean,
            "premium_stderr": prem_se,
            "european_same_paths": mean - prem_mean,
        },
    )
    if rank_deficient:
        report.detail["rank_deficient"] = 1.0
    return report, LSMSurface(dates, coeffs, cfg.degree)


def lsm_price(
    model: MarketModel,
    state: Optional[MarketState],
    t: float,
    T: float,
    cfg: LSMConfig,
) -> PriceReport:
    """Regression Monte Carlo American price (low-biased policy estimate)."""
    state = model.initial_state() if state is None else state
    report, _ = _fit_lsm(model, state, t, T, cfg)
    return report


def eep_decomposition(
    model: MarketModel,
    state: Optional[MarketState],
    t: float,
    T: float,
    boundary: BoundaryCurve,
    cfg: LSMConfig,
    european: Optional[float] = None,
    quad: QuadratureConfig = QuadratureConfig(),
) -> PriceReport:
    """American price as European + early exercise premium, given a boundary.

    The premium integrals are evaluated on the LSM date grid with per-path
    time sums (so the stderr reflects path noise); the jump rebalancing
    terms sample one mark per (path, date) and price the jumped state with
    the LSM continuation surface.
    """
    cfg.check()
    require_valid(model)
    state = model.initial_state() if state is None else state
    if not boundary.covers(t, T):
        raise ModelValidationError(
            [f"boundary grid [{boundary.times[0]}, {boundary.times[-1]}] does not cover [{t}, {T}]"]
        )
    dyn = as_dynamics(model)

    if european is None:
        if dyn.rho_w == 0.0 and dyn.rho_z == 0.0:
            european = exchange_price(model, state, t, T, quad).price
        else:
            european = price_exchange_mc(
                model, state, t, T, cfg.sim_config()
            ).price

    _, surface = _fit_lsm(model, state, t, T, cfg)
    dates = surface.dates

    # Independent path set for the premium integrals.
    prem_cfg = SimConfig(
        n_paths=cfg.n_paths,
        n_steps=cfg.n_dates * cfg.steps_per_date,
        seed=cfg.seed + 715827883,
        scheme=cfg.scheme,
        antithetic=cfg.antithetic,
        threads=cfg.threads,
    )
    batch = simulate(model, state, t, T, prem_cfg, store_times=dates)
    snaps = batch.snaps
    n = batch.n_paths
    r = dyn.r
    q1 = dyn.asset1.q
    q2 = dyn.asset2.q
    du = dates[1] - dates[0]
    weights = np.full(len(dates), du)
    weights[0] = weights[-1] = 0.5 * du

    mark_rng = np.random.Generator(np.random.Philox(key=prem_cfg.seed).jumped(1 << 20))

    diff_sum = np.zeros(n)
    jump1_sum = np.zeros(n)
    jump2_sum = np.zeros(n)
    b_at = boundary.value_at(dates)

    for k, u in enumerate(dates):
        disc = math.exp(-r * (u - t))
        s1 = np.exp(snaps["x1"][k])
        s2 = np.exp(snaps["x2"][k])
        v1 = snaps["v1"][k]
        v2 = snaps["v2"][k]
        ratio = s1 / s2
        b_u = b_at[k]
        stopped = ratio >= b_u
        diff_sum += weights[k] * disc * np.where(stopped, q1 * s1 - q2 * s2, 0.0)

        for asset_idx, (jump, acc) in enumerate(
            ((dyn.asset1.jump, jump1_sum), (dyn.asset2.jump, jump2_sum)), start=1
        ):
            if not jump.active or math.isinf(b_u):
                continue
            y = mark_rng.normal(jump.mu_j, jump.sigma_j, n)
            if asset_idx == 1:
                jumped_ratio = ratio * np.exp(y)
                jumped_s1 = s1 * np.exp(y)
                jumped_s2 = s2
            else:
                jumped_ratio = ratio * np.exp(-y)
                jumped_s1 = s1
                jumped_s2 = s2 * np.exp(y)
            back_in = stopped & (jumped_ratio < b_u)
            if not np.any(back_in):
                continue
            ln_r = np.log(jumped_ratio[back_in])
            cont = surface.continuation(k, ln_r, v1[back_in], v2[back_in]) * jumped_s2[back_in]
            intrinsic_signed = jumped_s1[back_in] - jumped_s2[back_in]
            cont = np.maximum(cont, np.maximum(intrinsic_signed, 0.0))
            contrib = np.zeros(n)
            contrib[back_in] = cont - intrinsic_signed
            acc -= weights[k] * disc * jump.intensity * contrib

    diffusive, se_d = mean_stderr(diff_sum, prem_cfg.antithetic)
    jump1, se_1 = mean_stderr(jump1_sum, prem_cfg.antithetic)
    jump2, se_2 = mean_stderr(jump2_sum, prem_cfg.antithetic)
    total_per_path = diff_sum + jump1_sum + jump2_sum
    premium, se_p = mean_stderr(total_per_path, prem_cfg.antithetic)

    return PriceReport(
        price=european + premium,
        method="decomposition",
        measure_tag="Q",
        term1=european,
        term2=premium,
        stderr=se_p,
        seed=cfg.seed,
        config={**cfg.as_dict(), "t": t, "T": T},
        detail={
            "european": european,
            "premium_diffusive": diffusive,
            "premium_jump1": jump1,
            "premium_jump2": jump2,
            "stderr_diffusive": se_d,
            "stderr_jump1": se_1,
            "stderr_jump2": se_2,
        },
    )


@dataclass(frozen=True)
class BoundarySolverConfig:
    """Backward fixed-point solver settings for the exercise boundary."""

    seed: int
    n_nodes: int = 17
    n_paths: int = 16384
    steps_per_year: int = 100
    max_iter: int = 20
    tol: float = 5e-4
    damping: float = 0.5
    ratio_cap: float = 50.0
    n_ratio_grid: int = 61
    gh_nodes: int = 16
    antithetic: bool = True
    threads: int = 1

    def check(self) -> "BoundarySolverConfig":
        problems = []
        if self.n_nodes < 3:
            problems.append(f"boundary.n_nodes must be >= 3, got {self.n_nodes}")
        if self.n_paths < 100:
            problems.append(f"boundary.n_paths must be >= 100, got {self.n_paths}")
        if not 0.0 < self.damping <= 1.0:
            problems.append(f"boundary.damping must be in (0, 1], got {self.damping}")
        if problems:
            raise ModelValidationError(problems)
        return self

    def as_dict(self) -> dict:
        return {
            "seed": self.seed,
            "n_nodes": self.n_nodes,
            "n_paths": self.n_paths,
            "steps_per_year": self.steps_per_year,
            "max_iter": self.max_iter,
            "tol": self.tol,
        }


def _exchange_curve(
    dyn, tau: float, v1: float, v2: float, ratios: np.ndarray, quad: QuadratureConfig
) -> np.ndarray:
    """European exchange price for S1 = ratio, S2 = 1 (vectorized over ratios).

    Same damped inversion as fourier.exchange_price; the Riccati part is
    shared across ratios because only x1 varies.
    """
    n = quad.n_nodes + (quad.n_nodes % 2)
    z = np.linspace(0.0, quad.z_max, n + 1)
    delta = quad.delta
    w = z - 1j * delta
    f2 = math.exp((dyn.r - dyn.asset2.q) * tau)
    k = math.log(f2)
    x1 = np.log(ratios)[:, None]
    phi_a = np.exp(log_phi_joint(dyn, x1, 0.0, v1, v2, tau, w - 1j, -w))
    phi_b = np.exp(log_phi_joint(dyn, x1, 0.0, v1, v2, tau, w, -w - 1j))
    psi = np.exp(1j * w * k) / (1j * z + delta) * (phi_a - phi_b)
    integrand = (np.exp(-1j * z * k) * psi).real
    integral = np.trapezoid(integrand, z, axis=1)
    pref = math.exp(-dyn.r * tau - delta * k) / math.pi
    return np.maximum(pref * integral, 0.0)


def _expected_variance(asset, v_start: float, u: float) -> float:
    theta = asset.theta_lr
    return theta + (v_start - theta) * math.exp(-asset.kappa_mr * u)


def solve_boundary(
    model: MarketModel,
    state: Optional[MarketState],
    T: float,
    cfg: BoundarySolverConfig,
    quad: QuadratureConfig = QuadratureConfig(),
) -> BoundaryCurve:
    """Solve the value-matching equation B - 1 = C^E(B, 1) + C^P(B, 1) backward in time.

    Variances enter through their deterministic projections from the state's
    initial values. Nodes where no finite solution exists (the fixed point
    escapes ratio_cap, e.g. q1 = 0) carry the +inf no-exercise sentinel.
    """
    cfg.check()
    require_valid(model)
    state = model.initial_state() if state is None else state
    dyn = as_dynamics(model)
    if dyn.rho_w != 0.0 or dyn.rho_z != 0.0:
        raise ModelValidationError(
            ["solve_boundary requires rho_w = rho_z = 0 (Fourier European leg)"]
        )

    nodes = np.linspace(0.0, T, cfg.n_nodes)
    q1 = dyn.asset1.q
    q2 = dyn.asset2.q
    values = np.full(cfg.n_nodes, np.inf)
    residuals = np.zeros(cfg.n_nodes)
    if q1 <= 0.0:
        # No early exercise: C^A >= S1 e^{-q1 tau} - S2 e^{-q2 tau} >= intrinsic.
        return BoundaryCurve(nodes, values, residuals, converged=True)
    values[-1] = max(1.0, q2 / q1)

    vbar1 = np.array([_expected_variance(dyn.asset1, state.v1, u) for u in nodes])
    vbar2 = np.array([_expected_variance(dyn.asset2, state.v2, u) for u in nodes])

    # Continuation-value curves for the jump terms: European price on a
    # ratio grid per node (ratios below the cap; jumped states land here).
    any_jump = dyn.asset1.jump.active or dyn.asset2.jump.active
    ratio_grid = np.exp(
        np.linspace(math.log(0.02), math.log(cfg.ratio_cap * 1.5), cfg.n_ratio_grid)
    )
    ce_curves: Dict[int, np.ndarray] = {}
    if any_jump:
        for j in range(cfg.n_nodes - 1):
            tau_j = T - nodes[j]
            ce_curves[j] = _exchange_curve(dyn, tau_j, vbar1[j], vbar2[j], ratio_grid, quad)

    gh_x, gh_w = np.polynomial.hermite.hermgauss(cfg.gh_nodes)
    gh_w = gh_w / math.sqrt(math.pi)

    def jump_cost(node_j: int, b_node: float, s1: np.ndarray, s2: np.ndarray) -> np.ndarray:
        """lambda_i E^Y[(C - intrinsic) 1_{back into continuation}] per path at node_j."""
        out = np.zeros(s1.shape[0])
        if not any_jump or math.isinf(b_node):
            return out
        # At the terminal node (no ce curve) continuation equals the payoff,
        # which the intrinsic^+ clamp below reproduces with cont_per_s2 = 0.
        ratio = s1 / s2
        stopped = ratio >= b_node
        if not np.any(stopped):
            return out
        log_grid = np.log(ratio_grid)
        for asset_idx, jump in ((1, dyn.asset1.jump), (2, dyn.asset2.jump)):
            if not jump.active:
                continue
            y = jump.mu_j + math.sqrt(2.0) * jump.sigma_j * gh_x  # (gh,)
            shifted = ratio[stopped, None] * np.exp(y if asset_idx == 1 else -y)[None, :]
            back_in = shifted < b_node
            if not np.any(back_in):
                continue
            if node_j in ce_curves:
                cont_per_s2 = np.interp(
                    np.log(np.clip(shifted, ratio_grid[0], ratio_grid[-1])),
                    log_grid,
                    ce_curves[node_j],
                )
            else:
                cont_per_s2 = np.zeros_like(shifted)
            cont_per_s2 = np.maximum(cont_per_s2, np.maximum(shifted - 1.0, 0.0))
            if asset_idx == 1:
                intrinsic = (ratio[stopped, None] * np.exp(y)[None, :] - 1.0) * s2[stopped, None]
                cont = cont_per_s2 * s2[stopped, None]
            else:
                s2j = s2[stopped, None] * np.exp(y)[None, :]
                intrinsic = s1[stopped, None] - s2j
                cont = cont_per_s2 * s2j
            cost = np.where(back_in, cont - intrinsic, 0.0)
            total = np.zeros(s1.shape[0])
            total[stopped] = jump.intensity * (cost @ gh_w)
            out += total
        return out

    converged = True
    for idx in range(cfg.n_nodes - 2, -1, -1):
        t_k = nodes[idx]
        tail = nodes[idx:]
        spn = max(1, round(cfg.steps_per_year * (nodes[1] - nodes[0])))
        sim = SimConfig(
            n_paths=cfg.n_paths,
            n_steps=spn * (cfg.n_nodes - 1 - idx),
            seed=cfg.seed + idx,
            antithetic=cfg.antithetic,
            threads=cfg.threads,
        )
        start = MarketState(1.0, 1.0, vbar1[idx], vbar2[idx])
        batch = simulate(dyn, start, t_k, T, sim, store_times=tail)
        snaps = batch.snaps
        exp_x1 = [np.exp(snaps["x1"][j]) for j in range(len(tail))]
        exp_x2 = [np.exp(snaps["x2"][j]) for j in range(len(tail))]

        du = tail[1] - tail[0]
        w_int = np.full(len(tail), du)
        w_int[0] = w_int[-1] = 0.5 * du
        tau_k = T - t_k

        prev = values[idx + 1]
        b = prev if math.isfinite(prev) else max(1.0, q2 / q1) * 1.5
        b = max(b, 1.0 + 1e-9)
        residual = np.inf
        diverged = False
        for _ in range(cfg.max_iter):
            ce = float(
                _exchange_curve(dyn, tau_k, vbar1[idx], vbar2[idx], np.array([b]), quad)[0]
            )
            premium = 0.0
            for j, u in enumerate(tail):
                disc = math.exp(-dyn.r * (u - t_k))
                s1_j = b * exp_x1[j]
                s2_j = exp_x2[j]
                b_j = b if j == 0 else values[idx + j]
                in_stop = (s1_j / s2_j) >= b_j
                flow = float(np.mean(np.where(in_stop, q1 * s1_j - q2 * s2_j, 0.0)))
                cost = float(np.mean(jump_cost(idx + j, b_j, s1_j, s2_j))) if any_jump else 0.0
                premium += w_int[j] * disc * (flow - cost)
            target = 1.0 + ce + premium
            residual = abs(b - target)
            if not math.isfinite(target) or target > cfg.ratio_cap:
                diverged = True
                break
            b_new = max(1.0 + 1e-9, (1.0 - cfg.damping) * b + cfg.damping * target)
            if abs(b_new - b) <= cfg.tol * max(1.0, b):
                b = b_new
                residual = abs(b - target)
                break
            b = b_new
        if diverged:
            values[idx] = np.inf
            residuals[idx] = 0.0
        else:
            values[idx] = b
            residuals[idx] = residual
            if residual > 10.0 * cfg.tol * max(1.0, b):
                converged = False

    return BoundaryCurve(nodes, values, residuals, converged=converged)


def american_price(
    model: MarketModel,
    state: Optional[MarketState],
    t: float,
    T: float,
    lsm_cfg: LSMConfig,
    boundary_cfg: Optional[BoundarySolverConfig] = None,
    quad: QuadratureConfig = QuadratureConfig(),
) -> PriceReport:
    """Convenience: solve the boundary, then price via the EEP decomposition."""
    state = model.initial_state() if state is None else state
    if boundary_cfg is None:
        boundary_cfg = BoundarySolverConfig(seed=lsm_cfg.seed + 1)
    boundary = solve_boundary(model, state, T, boundary_cfg, quad)
    report = eep_decomposition(model, state, t, T, boundary, lsm_cfg, quad=quad)
    if not boundary.converged:
        report.detail["boundary_converged"] = 0.0
    return report
