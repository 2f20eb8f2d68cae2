# %% [markdown]
# # alpha = 3/2: closed forms against the numeric engines
#
# For alpha = 3/2 the stationary transform, the implicit psi equation, K and
# E exp(uV) have elementary closed forms. The suite below compares every one of
# them with the general quadrature / ODE code.

# %%
from collections import Counter

from stablecir import ModelParams
from stablecir.model import theta0
from stablecir.transforms import K_alpha32, K_fun, oracle_suite, stationary_laplace, stationary_laplace_alpha32

rows = oracle_suite()
worst = {}
for r in rows:
    key = (r["kind"], r["case"])
    worst[key] = max(worst.get(key, 0.0), r["error"])
for (kind, case), err in sorted(worst.items()):
    print(f"{kind:<13}{case:<26}max error {err:.1e}")
print(Counter(r["passed"] for r in rows))

# %% [markdown]
# The stationary law has three branches depending on the sign of
# 2b/sigma^2 - (2 delta^{3/2} / (3 sigma^2))^2; sigma = delta = 1 puts the
# boundary at b = 2/9.

# %%
for b in (1.0, 2 / 9, 0.05, 0.0):
    p = ModelParams(1.0, b, 1.0, 1.0, 1.5)
    print(f"b = {b:.4f}: closed {stationary_laplace_alpha32(p, 1.0):.15f}  "
          f"quadrature {stationary_laplace(p, 1.0).value:.15f}")

# %%
p = ModelParams(1.0, -1.0, 1.0, 1.0, 1.5)
th = theta0(p)
for f in (0.1, 0.5, 0.9, 0.999):
    print(f"K({f:5.3f} theta0) closed {K_alpha32(p, f * th):.12e}  quadrature {K_fun(p, f * th):.12e}")
