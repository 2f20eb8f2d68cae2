# %% [markdown]
# # Simulating the alpha-stable CIR process
#
# Euler steps with exact stable increments and a projection onto [0, inf).
# We look at one path per regime, the recorded jumps, and the first moment.

# %%
import numpy as np

from stablecir import ModelParams, integrate_path, mean_Y, simulate_path

regimes = {
    "subcritical": ModelParams(a=1.0, b=1.0, sigma=1.0, delta=1.0, alpha=1.5, y0=1.0),
    "critical": ModelParams(a=1.0, b=0.0, sigma=1.0, delta=1.0, alpha=1.5, y0=1.0),
    "supercritical": ModelParams(a=1.0, b=-0.5, sigma=1.0, delta=1.0, alpha=1.5, y0=1.0),
}

# %%
T, n = 10.0, 10_000
for name, p in regimes.items():
    path = simulate_path(p, T, n, seed=1)
    big = max(path.jump_records, key=lambda r: r.dy, default=None)
    print(f"{name:>14}: Y_T = {path.values[-1]:10.3f}  int Y = {integrate_path(path):10.3f}  "
          f"jumps = {len(path.jump_records):3d}  largest dY = {big.dy if big else 0:.3f} at t = "
          f"{path.times[big.step] if big else 0:.2f}")

# %% [markdown]
# Jumps only go up, and their size scales with Y^{1/alpha} at the jump time.
# The mean follows y0 e^{-bt} + a (1 - e^{-bt}) / b; a small Monte Carlo check.
# Y has infinite variance for alpha < 2, so the sample mean usually sits a
# little low (the rare big jumps are under-sampled) and the SE is a rough guide.

# %%
p = regimes["subcritical"].replace(y0=0.2)
ends = np.array([simulate_path(p, 2.0, 2000, seed=s).values[-1] for s in range(4000)])
se = ends.std(ddof=1) / np.sqrt(ends.size)
print(f"MC mean {ends.mean():.4f} +- {se:.4f}   exact {mean_Y(p, 2.0):.4f}")

# %% [markdown]
# Without immigration a path started at zero never leaves it.

# %%
zero = simulate_path(ModelParams(0.0, 1.0, 1.0, 1.0, 1.5, 0.0), 5.0, 5000, seed=3)
print("max |Y| with a = 0, y0 = 0:", np.abs(zero.values).max())
