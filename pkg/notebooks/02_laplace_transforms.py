# %% [markdown]
# # Laplace transforms from the Riccati-type ODEs
#
# E exp(-lam Y_t) needs v_t(lam) solving v' = -R(v); the joint transform of
# (Y_t, int Y) needs psi_{u,v}. Both are solved with an adaptive RK pair.

# %%
import numpy as np

from stablecir import ModelParams
from stablecir.transforms import joint_laplace, laplace_Y, solve_v, stationary_laplace

p = ModelParams(a=1.0, b=1.0, sigma=1.0, delta=1.0, alpha=1.5, y0=1.0)

# %%
print(" lam      t   ODE route          quadrature route   |diff|")
for lam, t in [(0.5, 1.0), (1.0, 2.0), (5.0, 0.3), (20.0, 4.0)]:
    a = laplace_Y(p, lam, t).value
    b = laplace_Y(p, lam, t, route="quadrature").value
    print(f"{lam:4g} {t:6g}   {a:.15f}  {b:.15f}  {abs(a - b):.1e}")

# %% [markdown]
# The v-trajectory decays to 0 for b >= 0; from y0 = 0 the transform converges
# to the stationary one.

# %%
s, v = solve_v(p, 2.0, 5.0, n_samples=6).trajectory
print(np.column_stack([s, v]))
p0 = p.replace(y0=0.0)
for t in (1.0, 5.0, 20.0, 50.0):
    print(f"t = {t:5g}: {laplace_Y(p0, 1.0, t).value:.12f}")
print(f"stationary: {stationary_laplace(p0, 1.0).value:.12f}")

# %% [markdown]
# Joint transform: with v = 0 it reduces to the marginal one.

# %%
print(joint_laplace(p, -1.0, 0.0, 2.0).value, laplace_Y(p, 1.0, 2.0).value)
print("with the occupation term:", joint_laplace(p, -1.0, -0.5, 2.0).value)
