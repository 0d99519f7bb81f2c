"""Scratch: American pricers end to end."""
import math
import time

import numpy as np

from svjdx import *
from svjdx.american import (
    BoundaryCurve,
    BoundarySolverConfig,
    LSMConfig,
    eep_decomposition,
    lsm_price,
    solve_boundary,
)

def mk(q1, q2, jumps1=None, jumps2=None):
    return MarketModel(
        asset1=AssetParams(100.0, q1, VolParams(2.0, 0.04, 0.25, 0.045), jumps1 or JumpSpec(0.0)),
        asset2=AssetParams(96.0, q2, VolParams(1.6, 0.05, 0.30, 0.05), jumps2 or JumpSpec(0.0)),
        corr=CorrelationStructure(0.0, -0.5, -0.4, 0.0),
        r=0.05,
    )

T = 0.5

# (a) q1=0, no jumps: premium ~ 0
m_a = mk(0.0, 0.02)
eu_a = exchange_price(m_a, None, 0.0, T).price
t0 = time.time()
lsm_a = lsm_price(m_a, None, 0.0, T, LSMConfig(n_paths=100_000, n_dates=50, seed=101))
print(f"(a) q1=0: eu={eu_a:.4f} lsm={lsm_a.price:.4f}+-{lsm_a.stderr:.4f} z={(lsm_a.price-eu_a)/lsm_a.stderr:+.2f} [{time.time()-t0:.1f}s]")

bd_a = solve_boundary(m_a, None, T, BoundarySolverConfig(seed=11))
print("(a) boundary all inf:", np.all(np.isinf(bd_a.values[:-1])), bd_a.values[-1])
eep_a = eep_decomposition(m_a, None, 0.0, T, bd_a, LSMConfig(n_paths=50_000, n_dates=50, seed=103))
print("(a) eep premium:", eep_a.term2, "+-", eep_a.stderr)

# (b) q1=0.08, q2=0: positive premium
m_b = mk(0.08, 0.0)
eu_b = exchange_price(m_b, None, 0.0, T).price
t0 = time.time()
lsm_b = lsm_price(m_b, None, 0.0, T, LSMConfig(n_paths=100_000, n_dates=50, seed=111))
print(f"(b) q1=0.08: eu={eu_b:.4f} lsm={lsm_b.price:.4f}+-{lsm_b.stderr:.4f} premium_z={(lsm_b.price-eu_b)/lsm_b.stderr:+.2f} [{time.time()-t0:.1f}s]")

t0 = time.time()
bd_b = solve_boundary(m_b, None, T, BoundarySolverConfig(seed=12))
print(f"(b) boundary [{time.time()-t0:.1f}s] converged={bd_b.converged}")
print("    times:", np.round(bd_b.times, 3))
print("    B:    ", np.round(bd_b.values, 4))
print("    resid:", np.round(bd_b.residuals, 5))

t0 = time.time()
eep_b = eep_decomposition(m_b, None, 0.0, T, bd_b, LSMConfig(n_paths=100_000, n_dates=50, seed=113))
print(f"(b) eep: {eep_b.price:.4f} (eu {eep_b.detail['european']:.4f} + prem {eep_b.term2:.4f}+-{eep_b.stderr:.4f}) vs lsm {lsm_b.price:.4f} [{time.time()-t0:.1f}s]")
print(f"    rel gap vs lsm: {abs(eep_b.price-lsm_b.price)/lsm_b.price:.4%}")

# (c) with jumps
m_c = mk(0.06, 0.01, JumpSpec(0.3, -0.05, 0.15), JumpSpec(0.2, 0.02, 0.12))
eu_c = exchange_price(m_c, None, 0.0, T).price
lsm_c = lsm_price(m_c, None, 0.0, T, LSMConfig(n_paths=100_000, n_dates=50, seed=121))
t0 = time.time()
bd_c = solve_boundary(m_c, None, T, BoundarySolverConfig(seed=13))
eep_c = eep_decomposition(m_c, None, 0.0, T, bd_c, LSMConfig(n_paths=100_000, n_dates=50, seed=123))
print(f"(c) jumps: eu={eu_c:.4f} lsm={lsm_c.price:.4f}+-{lsm_c.stderr:.4f} eep={eep_c.price:.4f} [{time.time()-t0:.1f}s]")
print(f"    premium parts: diff={eep_c.detail['premium_diffusive']:.4f} j1={eep_c.detail['premium_jump1']:.5f} j2={eep_c.detail['premium_jump2']:.5f}")
print(f"    rel gap vs lsm: {abs(eep_c.price-lsm_c.price)/lsm_c.price:.4%}")
print("    boundary:", np.round(bd_c.values, 3))

# homogeneity of boundary: scale spots
m_b2 = MarketModel(
    asset1=AssetParams(200.0, 0.08, m_b.asset1.vol, m_b.asset1.jump),
    asset2=AssetParams(192.0, 0.0, m_b.asset2.vol, m_b.asset2.jump),
    corr=m_b.corr, r=0.05,
)
bd_b2 = solve_boundary(m_b2, None, T, BoundarySolverConfig(seed=12))
fin = np.isfinite(bd_b.values)
print("homogeneity max rel dev:", np.max(np.abs(bd_b2.values[fin] - bd_b.values[fin]) / bd_b.values[fin]))

# deterministic LSM sanity: zero vol, zero jumps, q=0
m_det = MarketModel(
    asset1=AssetParams(100.0, 0.0, VolParams(2.0, 1e-12, 1e-10, 1e-12)),
    asset2=AssetParams(96.0, 0.0, VolParams(1.6, 1e-12, 1e-10, 1e-12)),
    corr=CorrelationStructure(), r=0.05,
)
lsm_det = lsm_price(m_det, None, 0.0, T, LSMConfig(n_paths=1000, n_dates=10, seed=5))
print("deterministic lsm:", lsm_det.price, "expected", 100.0 - 96.0)
