"""Joint path simulation under Q / Qhat1 / Qhat2 and the MC estimators.

Log prices advance by exact drift plus Euler diffusion; the variance uses
either full-truncation Euler (general correlation structure) or the
quadratic-exponential scheme (requires rho_z = 0). Jumps are compound
Poisson per step with the active measure's intensity and normal marks,
applied as aggregate normal sums (exact in distribution). Under a numeraire
measure the correlated Wiener vector gains drift Sigma e_{W_i} sqrt(v_i);
the variance part of that drift is already folded into the effective
mean-reversion coefficients, so only the log-price rows apply it here.

Randomness comes from one counter-based Philox generator. Paths are laid out
in fixed-width blocks; block b uses the substream Philox(seed).jumped(b) and
is always drawn in full, so increasing n_paths appends paths without
reshuffling earlier ones. With antithetic=True adjacent lanes form pairs:
Gaussian draws (diffusion and jump marks) are negated, uniforms reflected,
Poisson counts shared. Results are byte-identical for identical
(model, state, config) regardless of thread count (blocks reduce in index
order); threads only parallelize block computation.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.special import ndtri

from .errors import ModelValidationError
from .market import MEASURE_Q, MEASURE_QHAT1, MEASURE_QHAT2, MarketState
from .measures import ModelDynamics, ModelLike, as_dynamics
from .reporting import PriceReport

FULL_TRUNCATION = "full-truncation-euler"
QE = "qe"

BLOCK = 32768  # lanes per RNG substream; fixed so path layout is stable

_QE_PSI_SWITCH = 1.5


@dataclass(frozen=True)
class SimConfig:
    """Simulation settings. A seed is required — there is no entropy default."""

    n_paths: int
    n_steps: int
    seed: int
    scheme: str = FULL_TRUNCATION
    antithetic: bool = False
    threads: int = 1

    def check(self) -> "SimConfig":
        problems = []
        if self.n_paths < 1:
            problems.append(f"sim.n_paths must be >= 1, got {self.n_paths}")
        if self.n_steps < 1:
            problems.append(f"sim.n_steps must be >= 1, got {self.n_steps}")
        if self.seed is None:
            problems.append("sim.seed is required")
        if self.scheme not in (FULL_TRUNCATION, QE):
            problems.append(f"sim.scheme must be {FULL_TRUNCATION}|{QE}, got {self.scheme}")
        if self.antithetic and self.n_paths % 2:
            problems.append("antithetic pairing requires an even n_paths")
        if self.threads < 1:
            problems.append(f"sim.threads must be >= 1, got {self.threads}")
        if problems:
            raise ModelValidationError(problems)
        return self

    def as_dict(self) -> dict:
        return {
            "n_paths": self.n_paths,
            "n_steps": self.n_steps,
            "seed": self.seed,
            "scheme": self.scheme,
            "antithetic": self.antithetic,
        }


@dataclass
class PathBatch:
    """Simulated joint paths: terminal state per path plus optional snapshots.

    Snapshot arrays have shape (n_times, n_paths); variances are stored
    truncated at zero. sum_y1/sum_y2 accumulate the log jump marks over
    (t, T] per path; n1/n2 count jumps.
    """

    measure_tag: str
    seed: int
    t: float
    T: float
    antithetic: bool
    x1: np.ndarray
    x2: np.ndarray
    v1: np.ndarray
    v2: np.ndarray
    n1: np.ndarray
    n2: np.ndarray
    sum_y1: np.ndarray
    sum_y2: np.ndarray
    times: Optional[np.ndarray] = None
    snaps: Optional[Dict[str, np.ndarray]] = None

    @property
    def n_paths(self) -> int:
        return self.x1.shape[0]

    @property
    def s1(self) -> np.ndarray:
        return np.exp(self.x1)

    @property
    def s2(self) -> np.ndarray:
        return np.exp(self.x2)


def pair_collapse(values: np.ndarray, antithetic: bool) -> np.ndarray:
    """Collapse antithetic pairs to their means so samples are independent."""
    if antithetic:
        return values.reshape(-1, 2).mean(axis=1)
    return values


def mean_stderr(values: np.ndarray, antithetic: bool = False) -> Tuple[float, float]:
    """Sample mean and its standard error, honoring antithetic pairing."""
    vals = pair_collapse(np.asarray(values, dtype=float), antithetic)
    n = vals.shape[0]
    m = float(vals.mean())
    if n < 2:
        return m, float("inf")
    return m, float(vals.std(ddof=1) / math.sqrt(n))


def _correlation_factor(dyn: ModelDynamics) -> np.ndarray:
    sigma = np.array(
        [
            [1.0, dyn.rho_w, dyn.asset1.rho_wz, 0.0],
            [dyn.rho_w, 1.0, 0.0, dyn.asset2.rho_wz],
            [dyn.asset1.rho_wz, 0.0, 1.0, dyn.rho_z],
            [0.0, dyn.asset2.rho_wz, dyn.rho_z, 1.0],
        ]
    )
    try:
        return np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError:
        eigval, eigvec = np.linalg.eigh(sigma)
        if eigval.min() < -1e-12:
            raise ModelValidationError(
                [f"correlation matrix is not PSD (min eigenvalue {eigval.min():.3e})"]
            )
        return eigvec * np.sqrt(np.clip(eigval, 0.0, None))


class _BlockRng:
    """Deterministic per-block draws with antithetic mirroring."""

    def __init__(self, seed: int, block_index: int, width: int, antithetic: bool):
        self.rng = np.random.Generator(np.random.Philox(key=seed).jumped(block_index))
        self.width = width
        self.anti = antithetic
        self.half = width // 2

    def normals(self, rows: int) -> np.ndarray:
        if not self.anti:
            return self.rng.standard_normal((rows, self.width))
        g = self.rng.standard_normal((rows, self.half))
        out = np.empty((rows, self.width))
        out[:, 0::2] = g
        out[:, 1::2] = -g
        return out

    def uniforms(self, rows: int) -> np.ndarray:
        if not self.anti:
            return self.rng.random((rows, self.width))
        u = self.rng.random((rows, self.half))
        out = np.empty((rows, self.width))
        out[:, 0::2] = u
        out[:, 1::2] = 1.0 - u
        return out

    def poisson(self, lam: float) -> np.ndarray:
        if not self.anti:
            return self.rng.poisson(lam, self.width)
        n = self.rng.poisson(lam, self.half)
        return np.repeat(n, 2)


def _snapshot_indices(t: float, T: float, n_steps: int, times: Sequence[float]) -> np.ndarray:
    dt = (T - t) / n_steps
    idx = np.rint((np.asarray(times, dtype=float) - t) / dt).astype(int)
    recon = t + idx * dt
    if np.any(idx < 0) or np.any(idx > n_steps) or np.any(
        np.abs(recon - np.asarray(times)) > 1e-9 * max(1.0, abs(T))
    ):
        raise ModelValidationError(
            ["store_times must lie on the simulation step grid within [t, T]"]
        )
    return idx


def _simulate_block(
    dyn: ModelDynamics,
    state: MarketState,
    t: float,
    T: float,
    cfg: SimConfig,
    block_index: int,
    snap_idx: Optional[np.ndarray],
    zero_noise: bool,
) -> dict:
    m = BLOCK
    n_steps = cfg.n_steps
    dt = (T - t) / n_steps
    sqdt = math.sqrt(dt)
    rng = _BlockRng(cfg.seed, block_index, m, cfg.antithetic)

    a1, a2 = dyn.asset1, dyn.asset2
    chol = _correlation_factor(dyn)
    num = dyn.numeraire
    if num is not None:
        # Column W_num of Sigma: drift loadings of the two stock Wieners.
        cx = (1.0, dyn.rho_w) if num == 1 else (dyn.rho_w, 1.0)
    qe = cfg.scheme == QE
    if qe:
        if dyn.rho_z != 0.0:
            raise ModelValidationError(["the qe scheme requires rho_z = 0"])
        resid = math.sqrt((1.0 - a1.rho_wz**2) * (1.0 - a2.rho_wz**2))
        rho_g = dyn.rho_w / resid if resid > 0.0 else 0.0
        if abs(rho_g) > 1.0:
            raise ModelValidationError(
                ["rho_w too large for the qe residual correlation; use the Euler scheme"]
            )
        qe_const = []
        for a in (a1, a2):
            e = math.exp(-a.kappa_mr * dt)
            theta = a.theta_lr
            c1 = a.sigma**2 * e * (1.0 - e) / a.kappa_mr
            c2 = theta * a.sigma**2 * (1.0 - e) ** 2 / (2.0 * a.kappa_mr)
            qe_const.append((e, theta, c1, c2))

    x1 = np.full(m, state.x1)
    x2 = np.full(m, state.x2)
    v1 = np.full(m, state.v1)
    v2 = np.full(m, state.v2)
    n1 = np.zeros(m, dtype=np.int64)
    n2 = np.zeros(m, dtype=np.int64)
    sy1 = np.zeros(m)
    sy2 = np.zeros(m)

    snaps = None
    if snap_idx is not None:
        snaps = {
            key: np.empty((len(snap_idx), m))
            for key in ("x1", "x2", "v1", "v2")
        }
        snaps["n1"] = np.empty((len(snap_idx), m), dtype=np.int64)
        snaps["n2"] = np.empty((len(snap_idx), m), dtype=np.int64)
        lookup = {int(step): row for row, step in enumerate(snap_idx)}
        if 0 in lookup:
            row = lookup[0]
            for key, arr in (("x1", x1), ("x2", x2), ("v1", v1), ("v2", v2), ("n1", n1), ("n2", n2)):
                snaps[key][row] = arr
    else:
        lookup = {}

    def add_jumps(asset, x, count, sum_y):
        if not asset.jump.active:
            return x
        n = rng.poisson(asset.jump.intensity * dt)
        if zero_noise:
            n = np.zeros_like(n)
        g = rng.normals(1)[0]
        marks = n * asset.jump.mu_j + np.sqrt(n.astype(float)) * asset.jump.sigma_j * g
        count += n
        sum_y += marks
        return x + marks

    for step in range(n_steps):
        if qe:
            vp1 = np.maximum(v1, 0.0)
            vp2 = np.maximum(v2, 0.0)
            u = rng.uniforms(2)
            g = rng.normals(2)
            if zero_noise:
                u = np.full_like(u, 0.5)
                g = np.zeros_like(g)
            g2 = rho_g * g[0] + math.sqrt(max(0.0, 1.0 - rho_g**2)) * g[1]
            gs = (g[0], g2)
            new_v = []
            for i, (a, v) in enumerate(((a1, vp1), (a2, vp2))):
                e, theta, c1, c2 = qe_const[i]
                mean = theta + (v - theta) * e
                var = v * c1 + c2
                psi = var / np.maximum(mean**2, 1e-300)
                # quadratic branch
                two_over = 2.0 / np.maximum(psi, 1e-300)
                bb = two_over - 1.0 + np.sqrt(np.maximum(two_over * (two_over - 1.0), 0.0))
                az = mean / (1.0 + bb)
                zv = ndtri(np.clip(u[i], 1e-16, 1.0 - 1e-16))
                v_quad = az * (np.sqrt(bb) + zv) ** 2
                # exponential branch
                p = (psi - 1.0) / (psi + 1.0)
                beta = (1.0 - p) / np.maximum(mean, 1e-300)
                with np.errstate(divide="ignore"):
                    v_exp = np.where(
                        u[i] <= p,
                        0.0,
                        np.log((1.0 - p) / np.maximum(1.0 - u[i], 1e-300)) / beta,
                    )
                new_v.append(np.where(psi <= _QE_PSI_SWITCH, v_quad, v_exp))
            nv1, nv2 = new_v
            for a, x, v_old, v_new, gg in ((a1, x1, vp1, nv1, gs[0]), (a2, x2, vp2, nv2, gs[1])):
                iv = 0.5 * (v_old + v_new) * dt
                lever = (a.rho_wz / a.sigma) * (
                    v_new - v_old - a.vtheta * dt + a.kappa_mr * iv
                )
                x += a.drift_const * dt - 0.5 * iv + lever
                x += np.sqrt(np.maximum((1.0 - a.rho_wz**2) * iv, 0.0)) * gg
            if num is not None:
                von, vnn = (vp1, nv1) if num == 1 else (vp2, nv2)
                x1 += cx[0] * 0.5 * (np.sqrt(vp1 * von) + np.sqrt(nv1 * vnn)) * dt
                x2 += cx[1] * 0.5 * (np.sqrt(vp2 * von) + np.sqrt(nv2 * vnn)) * dt
            v1, v2 = nv1, nv2
        else:
            z = rng.normals(4)
            if zero_noise:
                z = np.zeros_like(z)
            dw = (chol @ z) * sqdt
            vp1 = np.maximum(v1, 0.0)
            vp2 = np.maximum(v2, 0.0)
            sq1 = np.sqrt(vp1)
            sq2 = np.sqrt(vp2)
            x1 += (a1.drift_const - 0.5 * vp1) * dt + sq1 * dw[0]
            x2 += (a2.drift_const - 0.5 * vp2) * dt + sq2 * dw[1]
            if num is not None:
                sqn = sq1 if num == 1 else sq2
                x1 += cx[0] * sq1 * sqn * dt
                x2 += cx[1] * sq2 * sqn * dt
            v1 = v1 + (a1.vtheta - a1.kappa_mr * vp1) * dt + a1.sigma * sq1 * dw[2]
            v2 = v2 + (a2.vtheta - a2.kappa_mr * vp2) * dt + a2.sigma * sq2 * dw[3]

        x1 = add_jumps(a1, x1, n1, sy1)
        x2 = add_jumps(a2, x2, n2, sy2)

        row = lookup.get(step + 1)
        if row is not None:
            snaps["x1"][row] = x1
            snaps["x2"][row] = x2
            snaps["v1"][row] = np.maximum(v1, 0.0)
            snaps["v2"][row] = np.maximum(v2, 0.0)
            snaps["n1"][row] = n1
            snaps["n2"][row] = n2

    return {
        "x1": x1,
        "x2": x2,
        "v1": np.maximum(v1, 0.0),
        "v2": np.maximum(v2, 0.0),
        "n1": n1,
        "n2": n2,
        "sum_y1": sy1,
        "sum_y2": sy2,
        "snaps": snaps,
    }


def simulate(
    model: ModelLike,
    state: Optional[MarketState],
    t: float,
    T: float,
    cfg: SimConfig,
    store_times: Optional[Sequence[float]] = None,
    zero_noise: bool = False,
) -> PathBatch:
    """Simulate joint (X1, X2, v1, v2) paths over [t, T] under the model's measure.

    `store_times` requests state snapshots on the step grid (needed by the
    American pricers). `zero_noise` is a unit-test hook that zeroes every
    draw, reducing the scheme to its deterministic drift.
    """
    cfg.check()
    if not T > t:
        raise ModelValidationError([f"require T > t, got t={t}, T={T}"])
    dyn = as_dynamics(model)
    state = _default_state(model, dyn, state)

    snap_idx = None
    times_arr = None
    if store_times is not None:
        times_arr = np.asarray(store_times, dtype=float)
        snap_idx = _snapshot_indices(t, T, cfg.n_steps, times_arr)

    n = cfg.n_paths
    n_blocks = (n + BLOCK - 1) // BLOCK

    out = {key: np.empty(n) for key in ("x1", "x2", "v1", "v2", "sum_y1", "sum_y2")}
    out["n1"] = np.empty(n, dtype=np.int64)
    out["n2"] = np.empty(n, dtype=np.int64)
    snaps = None
    if snap_idx is not None:
        snaps = {key: np.empty((len(snap_idx), n)) for key in ("x1", "x2", "v1", "v2")}
        snaps["n1"] = np.empty((len(snap_idx), n), dtype=np.int64)
        snaps["n2"] = np.empty((len(snap_idx), n), dtype=np.int64)

    def run_block(b: int) -> None:
        res = _simulate_block(dyn, state, t, T, cfg, b, snap_idx, zero_noise)
        lo = b * BLOCK
        hi = min(lo + BLOCK, n)
        width = hi - lo
        for key in ("x1", "x2", "v1", "v2", "n1", "n2", "sum_y1", "sum_y2"):
            out[key][lo:hi] = res[key][:width]
        if snaps is not None:
            for key, arr in snaps.items():
                arr[:, lo:hi] = res["snaps"][key][:, :width]

    if cfg.threads > 1 and n_blocks > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            list(pool.map(run_block, range(n_blocks)))
    else:
        for b in range(n_blocks):
            run_block(b)

    return PathBatch(
        measure_tag=dyn.measure_tag,
        seed=cfg.seed,
        t=t,
        T=T,
        antithetic=cfg.antithetic,
        x1=out["x1"],
        x2=out["x2"],
        v1=out["v1"],
        v2=out["v2"],
        n1=out["n1"],
        n2=out["n2"],
        sum_y1=out["sum_y1"],
        sum_y2=out["sum_y2"],
        times=times_arr,
        snaps=snaps,
    )


def _default_state(model: ModelLike, dyn: ModelDynamics, state: Optional[MarketState]):
    if state is not None:
        return state
    from .market import MarketModel

    if isinstance(model, MarketModel):
        return model.initial_state()
    raise ModelValidationError(
        ["a MarketState is required when simulating from ModelDynamics"]
    )


def price_spread_mc(
    model: ModelLike,
    state: Optional[MarketState],
    t: float,
    T: float,
    K: float,
    cfg: SimConfig,
) -> PriceReport:
    """Discounted MC estimate of the spread option price E[(S1 - S2 - K)^+]."""
    dyn = as_dynamics(model)
    if dyn.measure_tag != MEASURE_Q:
        raise ModelValidationError(
            [f"price under the pricing measure Q, got '{dyn.measure_tag}'"]
        )
    batch = simulate(model, state, t, T, cfg)
    disc = math.exp(-dyn.r * (T - t))
    payoff = disc * np.maximum(batch.s1 - batch.s2 - K, 0.0)
    price, se = mean_stderr(payoff, cfg.antithetic)
    return PriceReport(
        price=price,
        method="mc",
        measure_tag=dyn.measure_tag,
        stderr=se,
        seed=cfg.seed,
        config={**cfg.as_dict(), "K": K, "t": t, "T": T},
    )


def price_exchange_mc(
    model: ModelLike,
    state: Optional[MarketState],
    t: float,
    T: float,
    cfg: SimConfig,
) -> PriceReport:
    """Discounted MC estimate of the exchange option price (K = 0)."""
    return price_spread_mc(model, state, t, T, 0.0, cfg)


def qhat_prob(
    dyn: ModelDynamics,
    state: MarketState,
    t: float,
    T: float,
    cfg: SimConfig,
) -> Tuple[float, float]:
    """In-the-money frequency Qhat_i(S1_T > S2_T) with binomial-style stderr.

    Requires dynamics produced by numeraire_shift_1/2.
    """
    if dyn.measure_tag not in (MEASURE_QHAT1, MEASURE_QHAT2) or dyn.numeraire not in (1, 2):
        raise ModelValidationError(
            ["qhat_prob requires dynamics produced by numeraire_shift_1/2"]
        )
    batch = simulate(dyn, state, t, T, cfg)
    hit = (batch.x1 > batch.x2).astype(float)
    return mean_stderr(hit, cfg.antithetic)


def martingale_checks(
    model: MarketModel,
    state: Optional[MarketState],
    t: float,
    T: float,
    cfg: SimConfig,
) -> Dict[str, Tuple[float, float]]:
    """MC means (with stderr) of quantities that are exactly 1 under Q.

    u1/u2 are the numeraire density candidates U_{i,T} = S_{i,T} e^{-(r-q_i)
    (T-t)} / S_{i,t} (the exponential of the compensated diffusion plus
    compensated jumps); yield1/yield2 are the discounted-yield ratios (same
    quantity measured from prices). jump1/jump2 compare e^{sum Y} against
    exp(lambda~ kappa~ tau), isolating the compound-Poisson layer.
    """
    dyn = as_dynamics(model)
    state = _default_state(model, dyn, state)
    batch = simulate(model, state, t, T, cfg)
    tau = T - t
    out: Dict[str, Tuple[float, float]] = {}
    for i, (x_t, x0, asset) in enumerate(
        ((batch.x1, state.x1, dyn.asset1), (batch.x2, state.x2, dyn.asset2)), start=1
    ):
        u = np.exp(x_t - x0 - (dyn.r - asset.q) * tau)
        out[f"u{i}"] = mean_stderr(u, cfg.antithetic)
        out[f"yield{i}"] = out[f"u{i}"]
        sum_y = batch.sum_y1 if i == 1 else batch.sum_y2
        if asset.jump.active:
            comp = math.exp(asset.jump.intensity * asset.jump.kappa() * tau)
            out[f"jump{i}"] = mean_stderr(np.exp(sum_y) / comp, cfg.antithetic)
    return out


def dump_paths(batch: PathBatch, path: str) -> None:
    """Write stored snapshots as a columnar CSV: path_id, step, S1, S2, v1, v2, N1, N2."""
    if batch.snaps is None or batch.times is None:
        raise ModelValidationError(["dump_paths requires a batch simulated with store_times"])
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["path_id", "step", "S1", "S2", "v1", "v2", "N1", "N2"])
        s = batch.snaps
        for row, _t in enumerate(batch.times):
            s1 = np.exp(s["x1"][row])
            s2 = np.exp(s["x2"][row])
            for p in range(batch.n_paths):
                writer.writerow(
                    [
                        p,
                        row,
                        repr(float(s1[p])),
                        repr(float(s2[p])),
                        repr(float(s["v1"][row, p])),
                        repr(float(s["v2"][row, p])),
                        int(s["n1"][row, p]),
                        int(s["n2"][row, p]),
                    ]
                )
