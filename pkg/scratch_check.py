"""Scratch smoke checks for the CF layer (not part of the deliverable)."""
import numpy as np

from svjdx import *
from svjdx.charfn import log_phi_joint
from svjdx.measures import q_dynamics

model = MarketModel(
    asset1=AssetParams(100.0, 0.03, VolParams(2.0, 0.04, 0.25, 0.045), JumpSpec(0.4, -0.04, 0.18)),
    asset2=AssetParams(96.0, 0.02, VolParams(1.6, 0.05, 0.30, 0.05, 0.1), JumpSpec(0.25, 0.02, 0.15)),
    corr=CorrelationStructure(0.0, -0.5, -0.4, 0.0),
    r=0.05,
)
state = model.initial_state()
t, T = 0.0, 0.5
print("validate:", validate(model).violations)

# CF normalization
v = phi_joint(model, state, t, T, 0.0, 0.0).value
print("phi(0,0) =", v)

# forward identities
f1 = phi_joint(model, state, t, T, -1j, 0.0).value
f2 = phi_joint(model, state, t, T, 0.0, -1j).value
print("phi(-i,0) vs fwd1:", f1, forward_price(model, 1, t, T))
print("phi(0,-i) vs fwd2:", f2, forward_price(model, 2, t, T))

# conjugate symmetry + |phi|<=1
rng = np.random.default_rng(0)
for _ in range(4):
    u1, u2 = rng.normal(size=2) * 5
    a = phi_joint(model, state, t, T, u1, u2).value
    b = phi_joint(model, state, t, T, -u1, -u2).value
    print("conj sym err:", abs(np.conj(a) - b), " |phi|:", abs(a))

# ratio identity: phi_hat1(u1,u2) = phi_Q(u1 - i, u2)/phi_Q(-i, 0)
dyn1 = numeraire_shift_1(model)
dyn2 = numeraire_shift_2(model)
for u1, u2 in [(0.7, -1.3), (3.0, 2.0), (-2.0, 0.5)]:
    lhs = phi_joint(dyn1, state, t, T, u1, u2).value
    rhs = phi_joint(model, state, t, T, u1 - 1j, u2).value / f1
    print("hat1 ratio identity err:", abs(lhs - rhs) / abs(lhs))
    lhs2 = phi_joint(dyn2, state, t, T, u1, u2).value
    rhs2 = phi_joint(model, state, t, T, u1, u2 - 1j).value / f2
    print("hat2 ratio identity err:", abs(lhs2 - rhs2) / abs(lhs2))

# Riccati vs RK4
def rk4_riccati(dyn, s_end, u1, u2, n=4000):
    betas = (0.5 if dyn.numeraire == 1 else -0.5, 0.5 if dyn.numeraire == 2 else -0.5)
    def deriv(d, asset, beta, u):
        return (
            0.5 * asset.sigma**2 * d * d
            + (1j * u * asset.rho_wz * asset.sigma - asset.kappa_mr) * d
            + (beta * 1j * u - 0.5 * u * u)
        )
    h = s_end / n
    d1 = d2 = 0.0 + 0.0j
    c = 0.0 + 0.0j
    a1, a2 = dyn.asset1, dyn.asset2
    drift = 1j * (u1 * a1.drift_const + u2 * a2.drift_const)
    for _ in range(n):
        # D1, D2 independent; C' = drift + vtheta1*D1 + vtheta2*D2
        k1a = deriv(d1, a1, betas[0], u1); k1b = deriv(d2, a2, betas[1], u2)
        k1c = drift + a1.vtheta * d1 + a2.vtheta * d2
        k2a = deriv(d1 + 0.5 * h * k1a, a1, betas[0], u1); k2b = deriv(d2 + 0.5 * h * k1b, a2, betas[1], u2)
        k2c = drift + a1.vtheta * (d1 + 0.5 * h * k1a) + a2.vtheta * (d2 + 0.5 * h * k1b)
        k3a = deriv(d1 + 0.5 * h * k2a, a1, betas[0], u1); k3b = deriv(d2 + 0.5 * h * k2b, a2, betas[1], u2)
        k3c = drift + a1.vtheta * (d1 + 0.5 * h * k2a) + a2.vtheta * (d2 + 0.5 * h * k2b)
        k4a = deriv(d1 + h * k3a, a1, betas[0], u1); k4b = deriv(d2 + h * k3b, a2, betas[1], u2)
        k4c = drift + a1.vtheta * (d1 + h * k3a) + a2.vtheta * (d2 + h * k3b)
        d1 += h / 6 * (k1a + 2 * k2a + 2 * k3a + k4a)
        d2 += h / 6 * (k1b + 2 * k2b + 2 * k3b + k4b)
        c += h / 6 * (k1c + 2 * k2c + 2 * k3c + k4c)
    return d1, d2, c

dyn = q_dynamics(model)
worst = 0.0
for u in [-20.0, -5.0, -1.0, -0.1, 0.0, 0.1, 1.0, 5.0, 20.0]:
    for s in [0.1, 0.5, 1.0, 2.0]:
        parts = riccati(model, s, u, -0.5 * u)
        d1r, d2r, cr = rk4_riccati(dyn, s, u, -0.5 * u)
        worst = max(worst, abs(parts.d1 - d1r), abs(parts.d2 - d2r), abs(parts.c - cr))
print("riccati vs RK4 worst abs err:", worst)

# sigma -> 0 stability
import dataclasses
flat = MarketModel(
    asset1=AssetParams(100.0, 0.03, VolParams(2.0, 0.04, 1e-8, 0.04), JumpSpec(0.0)),
    asset2=AssetParams(96.0, 0.02, VolParams(1.6, 0.05, 1e-8, 0.05), JumpSpec(0.0)),
    corr=CorrelationStructure(), r=0.05,
)
st = flat.initial_state()
lp = log_phi_joint(flat, st.x1, st.x2, st.v1, st.v2, 0.5, 1.3, -0.4)
# two-asset flat-variance CF: sum_j i u_j (x_j + (c_j - eta_j/2) tau) - u_j^2 eta_j tau / 2
tau = 0.5
c1 = 0.05 - 0.03
c2 = 0.05 - 0.02
u1, u2 = 1.3, -0.4
expected = (
    1j * u1 * (st.x1 + (c1 - 0.5 * 0.04) * tau) - 0.5 * u1**2 * 0.04 * tau
    + 1j * u2 * (st.x2 + (c2 - 0.5 * 0.05) * tau) - 0.5 * u2**2 * 0.05 * tau
)
print("flat-variance log-CF err:", abs(complex(lp) - expected))
