"""Scratch: Fourier vs Margrabe vs MC, decomposition comparability."""
import math
import time

import numpy as np
from scipy.stats import norm

from svjdx import *
from svjdx.mc import martingale_checks

def margrabe(s1, s2, q1, q2, tau, sig):
    d1 = (math.log(s1 / s2) + (q2 - q1 + 0.5 * sig**2) * tau) / (sig * math.sqrt(tau))
    d2 = d1 - sig * math.sqrt(tau)
    return s1 * math.exp(-q1 * tau) * norm.cdf(d1) - s2 * math.exp(-q2 * tau) * norm.cdf(d2)

flat = MarketModel(
    asset1=AssetParams(100.0, 0.03, VolParams(2.0, 0.04, 1e-8, 0.04), JumpSpec(0.0)),
    asset2=AssetParams(96.0, 0.02, VolParams(1.6, 0.05, 1e-8, 0.05), JumpSpec(0.0)),
    corr=CorrelationStructure(), r=0.05,
)
T = 0.5
rep = exchange_price(flat, None, 0.0, T, QuadratureConfig())
ana = margrabe(100.0, 96.0, 0.03, 0.02, T, math.sqrt(0.04 + 0.05))
print("fourier margrabe:", rep.price, "analytic:", ana, "rel err:", abs(rep.price - ana) / ana)

model = MarketModel(
    asset1=AssetParams(100.0, 0.03, VolParams(2.0, 0.04, 0.25, 0.045), JumpSpec(0.4, -0.04, 0.18)),
    asset2=AssetParams(96.0, 0.02, VolParams(1.6, 0.05, 0.30, 0.05, 0.1), JumpSpec(0.25, 0.02, 0.15)),
    corr=CorrelationStructure(0.0, -0.5, -0.4, 0.0),
    r=0.05,
)
rep = exchange_price(model, None, 0.0, T)
dec = exchange_price_decomposed(model, None, 0.0, T)
print("desk fourier:", rep.price, " quad_err:", rep.quad_error)
print("decomposition:", dec.price, "terms:", dec.term1, dec.term2, "probs:", dec.detail)
print("comparability:", abs(rep.price - dec.price))

# delta robustness
for d in (0.25, 0.5, 1.0, 2.0):
    p = exchange_price(model, None, 0.0, T, QuadratureConfig(delta=d)).price
    print(f"delta={d}: {p:.12f} rel dev {abs(p - rep.price)/rep.price:.2e}")

# nodes refinement
p2 = exchange_price(model, None, 0.0, T, QuadratureConfig(n_nodes=4096, z_max=400.0)).price
print("refined:", p2, "rel dev:", abs(p2 - rep.price) / rep.price)

# r-independence
dev = r_independence_check(model, None, 0.0, T, [0.0, 0.05, 0.15])
print("r-independence max dev:", dev, "rel:", dev / rep.price)

# K>0 control: r-dependence present
k25a = spread_lower_bound(MarketModel(model.asset1, model.asset2, model.corr, 0.0), None, 0.0, T, 25.0).price
k25b = spread_lower_bound(MarketModel(model.asset1, model.asset2, model.corr, 0.15), None, 0.0, T, 25.0).price
print("K=25 r=0 vs r=0.15:", k25a, k25b, "dev:", abs(k25a-k25b))

# MC euler
t0 = time.time()
cfg = SimConfig(n_paths=200_000, n_steps=125, seed=42, antithetic=True)
mc_rep = price_exchange_mc(model, None, 0.0, T, cfg)
print(f"mc euler: {mc_rep.price} +- {mc_rep.stderr}  z={(mc_rep.price-rep.price)/mc_rep.stderr:.2f}  [{time.time()-t0:.1f}s]")

t0 = time.time()
cfg_qe = SimConfig(n_paths=200_000, n_steps=125, seed=43, scheme="qe", antithetic=True)
mc_qe = price_exchange_mc(model, None, 0.0, T, cfg_qe)
print(f"mc qe:    {mc_qe.price} +- {mc_qe.stderr}  z={(mc_qe.price-rep.price)/mc_qe.stderr:.2f}  [{time.time()-t0:.1f}s]")

# Margrabe MC
mg = price_exchange_mc(flat, None, 0.0, T, SimConfig(100_000, 60, seed=7, antithetic=True))
print(f"mc margrabe: {mg.price} +- {mg.stderr} z={(mg.price-ana)/mg.stderr:.2f}")

# martingale suite
checks = martingale_checks(model, None, 0.0, T, SimConfig(100_000, 125, seed=11, antithetic=True))
for k, (m, se) in checks.items():
    print(f"martingale {k}: {m:.5f} +- {se:.5f}  z={(m-1)/se:+.2f}")

# qhat probabilities vs fourier decomposition
d1 = numeraire_shift_1(model)
d2 = numeraire_shift_2(model)
st = model.initial_state()
p1, se1 = qhat_prob(d1, st, 0.0, T, SimConfig(200_000, 125, seed=21, antithetic=True))
p2q, se2 = qhat_prob(d2, st, 0.0, T, SimConfig(200_000, 125, seed=22, antithetic=True))
print(f"qhat1 prob: {p1:.5f}+-{se1:.5f} fourier {dec.detail['prob1']:.5f} z={(p1-dec.detail['prob1'])/se1:+.2f}")
print(f"qhat2 prob: {p2q:.5f}+-{se2:.5f} fourier {dec.detail['prob2']:.5f} z={(p2q-dec.detail['prob2'])/se2:+.2f}")
mc_dec = 100.0*math.exp(-0.03*T)*p1 - 96.0*math.exp(-0.02*T)*p2q
print("mc decomposition price:", mc_dec, "vs", rep.price)

# determinism + n_paths extension
b1 = simulate(model, None, 0.0, T, SimConfig(1000, 50, seed=5))
b2 = simulate(model, None, 0.0, T, SimConfig(1000, 50, seed=5))
b3 = simulate(model, None, 0.0, T, SimConfig(40000, 50, seed=5))
print("determinism:", np.array_equal(b1.x1, b2.x1), " extension:", np.array_equal(b1.x1, b3.x1[:1000]))

# zero-noise deterministic limit
zn = simulate(flat, None, 0.0, T, SimConfig(4, 10, seed=1), zero_noise=True)
xt = math.log(100.0) + (0.05 - 0.03 - 0.5 * 0.04) * T
print("zero noise err:", abs(zn.x1[0] - xt))
