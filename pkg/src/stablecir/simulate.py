"""Euler-Maruyama paths of the alpha-stable CIR SDE and the Path data model.

The scheme freezes the coefficients at the left endpoint of each step and
projects onto [0, inf):

    Y_{k+1} = max(0, Y_k + (a - b Y_k) dt + sigma sqrt(Y_k) dW_k
                     + delta Y_k^{1/alpha} dL_k)

dL_k is an exact stable increment, so bias only comes from the frozen
coefficients and the projection. The projection limits the weak order; it is
kept because it is the simplest positivity-preserving choice.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, field
from typing import Optional

import numba
import numpy as np

from .levy import StableLaw
from .model import ModelParams, NumericalFault, ValidationError

__all__ = [
    "DEFAULT_KAPPA",
    "JumpRecord",
    "Path",
    "coarsen",
    "integrate_path",
    "jump_threshold",
    "read_path",
    "replay",
    "simulate_path",
    "write_path",
]

# six Gaussian standard deviations
DEFAULT_KAPPA = 6.0


@numba.njit(cache=True)
def _euler_kernel(y0, a, b, sigma, delta, inv_alpha, dt, dW, dL, out):
    n = dW.shape[0]
    y = y0
    out[0] = y
    clamps = 0
    for k in range(n):
        nxt = y + (a - b * y) * dt + sigma * math.sqrt(y) * dW[k] + delta * y**inv_alpha * dL[k]
        if nxt < 0.0:
            nxt = 0.0
            clamps += 1
        y = nxt
        out[k + 1] = y
    return clamps


@dataclass(frozen=True)
class JumpRecord:
    step: int  # grid index k; the jump happens over (t_{k-1}, t_k]
    dy: float


@dataclass(frozen=True, eq=False)
class Path:
    """A trajectory on a uniform grid, with noise bookkeeping when simulated.

    ``brownian_increments[k-1]`` and ``stable_increments[k-1]`` drive the step
    from ``values[k-1]`` to ``values[k]``.
    """

    times: np.ndarray
    values: np.ndarray
    brownian_increments: Optional[np.ndarray] = None
    stable_increments: Optional[np.ndarray] = None
    jump_records: tuple = ()
    params_used: Optional[ModelParams] = None
    seed: Optional[int] = None
    kappa: float = DEFAULT_KAPPA
    n_clamped: int = 0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.ndim != 1 or times.shape != values.shape:
            raise ValidationError("times and values must be 1-d arrays of equal length")
        if times.size < 2:
            raise ValidationError("a path needs at least two grid points")
        if np.any(np.diff(times) <= 0):
            raise ValidationError("times must be strictly increasing")
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise ValidationError("path values must be finite and nonnegative")
        for name in ("brownian_increments", "stable_increments"):
            inc = getattr(self, name)
            if inc is not None:
                inc = np.asarray(inc, dtype=float)
                if inc.shape != (times.size - 1,):
                    raise ValidationError(f"{name} must have one entry per step")
                inc.flags.writeable = False
                object.__setattr__(self, name, inc)
        times.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "jump_records", tuple(self.jump_records))

    @property
    def n_steps(self) -> int:
        return self.times.size - 1

    @property
    def horizon(self) -> float:
        return float(self.times[-1] - self.times[0])

    @property
    def dt(self) -> float:
        return self.horizon / self.n_steps

    @property
    def has_noise(self) -> bool:
        return self.brownian_increments is not None and self.stable_increments is not None


def jump_threshold(dt: float, alpha: float, kappa: float = DEFAULT_KAPPA) -> float:
    """Cutoff ``kappa * dt^(1/alpha)`` on stable increments; kappa = 0 records every step."""
    if not dt > 0:
        raise ValidationError(f"dt must be > 0, got {dt}")
    if kappa < 0:
        raise ValidationError(f"kappa must be >= 0, got {kappa}")
    return kappa * dt ** (1.0 / alpha)


def _jump_records(values, dL, p: ModelParams, threshold: float) -> tuple:
    steps = np.flatnonzero(np.abs(dL) > threshold) if threshold > 0 else np.arange(dL.size)
    dy = p.delta * values[steps] ** (1.0 / p.alpha) * dL[steps]
    return tuple(JumpRecord(int(k) + 1, float(d)) for k, d in zip(steps, dy))


def simulate_path(
    p: ModelParams,
    T: float,
    n_steps: int,
    seed,
    *,
    kappa: float = DEFAULT_KAPPA,
    brownian: bool = True,
    stable: bool = True,
) -> Path:
    """Simulate one Euler path on [0, T] with ``n_steps`` uniform steps.

    ``brownian=False`` / ``stable=False`` zero the respective noise stream
    (the draws are still consumed so the other stream is unchanged).
    """
    if not T > 0:
        raise ValidationError(f"T must be > 0, got {T}")
    if isinstance(n_steps, bool) or int(n_steps) != n_steps or n_steps < 1:
        raise ValidationError(f"n_steps must be a positive integer, got {n_steps}")
    n_steps = int(n_steps)
    dt = T / n_steps
    rng = np.random.default_rng(seed)
    dW = rng.standard_normal(n_steps) * math.sqrt(dt)
    dL = StableLaw(p.alpha).sample_increment(dt, rng, n_steps)
    if not brownian:
        dW = np.zeros_like(dW)
    if not stable:
        dL = np.zeros_like(dL)
    values = np.empty(n_steps + 1)
    clamps = _euler_kernel(p.y0, p.a, p.b, p.sigma, p.delta, 1.0 / p.alpha, dt, dW, dL, values)
    if not np.all(np.isfinite(values)):
        raise NumericalFault("non-finite state in Euler recursion")
    times = np.linspace(0.0, T, n_steps + 1)
    records = _jump_records(values, dL, p, jump_threshold(dt, p.alpha, kappa))
    seed_meta = seed if isinstance(seed, (int, np.integer)) else None
    return Path(
        times=times,
        values=values,
        brownian_increments=dW,
        stable_increments=dL,
        jump_records=records,
        params_used=p,
        seed=None if seed_meta is None else int(seed_meta),
        kappa=kappa,
        n_clamped=int(clamps),
    )


def replay(path: Path, p: Optional[ModelParams] = None) -> np.ndarray:
    """Rebuild the grid values from the stored increments."""
    p = p or path.params_used
    if p is None or not path.has_noise:
        raise ValidationError("replay needs stored increments and parameters")
    out = np.empty(path.n_steps + 1)
    _euler_kernel(
        p.y0, p.a, p.b, p.sigma, p.delta, 1.0 / p.alpha, path.dt,
        np.ascontiguousarray(path.brownian_increments),
        np.ascontiguousarray(path.stable_increments),
        out,
    )
    return out


def coarsen(path: Path, factor: int) -> Path:
    """Re-run the scheme on a grid ``factor`` times coarser, driven by block sums
    of the stored increments, so both resolutions share one noise realization."""
    p = path.params_used
    if p is None or not path.has_noise:
        raise ValidationError("coarsening needs stored increments and parameters")
    if isinstance(factor, bool) or int(factor) != factor or factor < 1 or path.n_steps % factor:
        raise ValidationError(f"factor must be a positive divisor of n_steps, got {factor}")
    factor = int(factor)
    n = path.n_steps // factor
    dW = path.brownian_increments.reshape(n, factor).sum(axis=1)
    dL = path.stable_increments.reshape(n, factor).sum(axis=1)
    dt = path.dt * factor
    values = np.empty(n + 1)
    clamps = _euler_kernel(p.y0, p.a, p.b, p.sigma, p.delta, 1.0 / p.alpha, dt, dW, dL, values)
    if not np.all(np.isfinite(values)):
        raise NumericalFault("non-finite state in Euler recursion")
    return Path(
        times=np.linspace(path.times[0], path.times[-1], n + 1),
        values=values,
        brownian_increments=dW,
        stable_increments=dL,
        jump_records=_jump_records(values, dL, p, jump_threshold(dt, p.alpha, path.kappa)),
        params_used=p,
        seed=path.seed,
        kappa=path.kappa,
        n_clamped=int(clamps),
    )


def integrate_path(path: Path) -> float:
    """Left-endpoint Riemann sum of int_0^T Y_s ds."""
    return float(np.sum(path.values[:-1]) * path.dt)


# --- CSV + JSON sidecar -----------------------------------------------------

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _sidecar_name(csv_path) -> str:
    root, _ = os.path.splitext(os.fspath(csv_path))
    return root + ".json"


def path_to_rows(path: Path):
    header = ["t", "y"]
    if path.has_noise:
        header += ["dW", "dL", "is_jump"]
    jump_steps = {r.step for r in path.jump_records}
    rows = [header]
    for k in range(path.n_steps + 1):
        row = [_fmt(path.times[k]), _fmt(path.values[k])]
        if path.has_noise:
            if k == 0:
                row += ["0", "0", "0"]
            else:
                row += [
                    _fmt(path.brownian_increments[k - 1]),
                    _fmt(path.stable_increments[k - 1]),
                    "1" if k in jump_steps else "0",
                ]
        rows.append(row)
    return rows


def path_sidecar(path: Path) -> dict:
    return {
        "params": None if path.params_used is None else path.params_used.to_dict(),
        "seed": path.seed,
        "T": path.horizon,
        "n_steps": path.n_steps,
        "kappa": path.kappa,
        "n_clamped": path.n_clamped,
    }


def write_path(path: Path, csv_path) -> None:
    """Write ``csv_path`` and a JSON sidecar next to it (same stem, .json)."""
    with open(csv_path, "w", newline="") as fh:
        csv.writer(fh).writerows(path_to_rows(path))
    with open(_sidecar_name(csv_path), "w") as fh:
        json.dump(path_sidecar(path), fh, indent=2)


def read_path(csv_path) -> Path:
    """Inverse of :func:`write_path`; the sidecar is optional."""
    with open(csv_path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValidationError(f"{csv_path}: empty file") from None
        rows = [r for r in reader if r]
    if header[:2] != ["t", "y"] or header not in (["t", "y"], ["t", "y", "dW", "dL", "is_jump"]):
        raise ValidationError(f"{csv_path}: header must be t,y[,dW,dL,is_jump]")
    try:
        cols = list(zip(*rows))
        times = np.array([float(x) for x in cols[0]])
        values = np.array([float(x) for x in cols[1]])
    except (ValueError, IndexError):
        raise ValidationError(f"{csv_path}: malformed numeric column") from None

    meta = {}
    sidecar = _sidecar_name(csv_path)
    if os.path.exists(sidecar):
        with open(sidecar) as fh:
            meta = json.load(fh)
    params = ModelParams.from_dict(meta["params"]) if meta.get("params") else None

    dW = dL = None
    records = ()
    if len(header) == 5:
        try:
            dW = np.array([float(x) for x in cols[2][1:]])
            dL = np.array([float(x) for x in cols[3][1:]])
            flags = np.array([int(x) for x in cols[4][1:]], dtype=bool)
        except ValueError:
            raise ValidationError(f"{csv_path}: malformed increment column") from None
        steps = np.flatnonzero(flags)
        if params is not None:
            dy = params.delta * values[steps] ** (1.0 / params.alpha) * dL[steps]
        else:
            dy = values[steps + 1] - values[steps]
        records = tuple(JumpRecord(int(k) + 1, float(d)) for k, d in zip(steps, dy))
    return Path(
        times=times,
        values=values,
        brownian_increments=dW,
        stable_increments=dL,
        jump_records=records,
        params_used=params,
        seed=meta.get("seed"),
        kappa=meta.get("kappa", DEFAULT_KAPPA),
        n_clamped=meta.get("n_clamped", 0),
    )
