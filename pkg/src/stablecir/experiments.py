"""Monte Carlo replication of simulate -> estimate, with distributional checks.

Every replication gets its own seed derived from (base_seed, rep, T index) by
numpy's SeedSequence, so results do not depend on scheduling or worker count.
Rows are gathered back into (T index, rep) order before any reduction.
"""

from __future__ import annotations

import csv
import io
import math
import multiprocessing
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .inference import Method, NotComputable, auxiliary_supercritical_estimators, mle_b
from .model import ModelParams, ValidationError
from .simulate import integrate_path, simulate_path
from .transforms import laplace_V

__all__ = [
    "ExperimentConfig",
    "ExperimentResult",
    "ROW_FIELDS",
    "check_V_limit",
    "consistency_curve",
    "ks_normal",
    "rep_seed",
    "run_experiment",
]

ROW_FIELDS = (
    "t_index", "rep", "T", "seed", "status", "b_hat", "scaled_error_deterministic",
    "scaled_error_random", "sigma2_hat", "integral_Y", "Y_T", "aux_log_ratio", "aux_ratio",
    "scaled_Y_T", "scaled_integral", "n_clamped",
)
_CONFIG_FIELDS = {"version", "params", "T_grid", "dt", "n_reps", "base_seed", "method", "kappa"}


@dataclass(frozen=True)
class ExperimentConfig:
    params: ModelParams
    T_grid: tuple
    dt: float
    n_reps: int
    base_seed: int = 0
    method: Method = Method.FULL_INFORMATION
    kappa: float = 6.0

    def __post_init__(self):
        try:
            grid = tuple(float(t) for t in self.T_grid)
        except (TypeError, ValueError):
            raise ValidationError("T_grid entries must be numbers") from None
        if not grid or any(t <= 0 for t in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValidationError("T_grid must be a non-empty, strictly increasing list of positive horizons")
        if not self.dt > 0:
            raise ValidationError(f"dt must be > 0, got {self.dt}")
        if isinstance(self.n_reps, bool) or int(self.n_reps) != self.n_reps or self.n_reps < 2:
            raise ValidationError(f"n_reps must be an integer >= 2, got {self.n_reps}")
        if isinstance(self.base_seed, bool) or int(self.base_seed) != self.base_seed or self.base_seed < 0:
            raise ValidationError(f"base_seed must be a nonnegative integer, got {self.base_seed}")
        object.__setattr__(self, "T_grid", grid)
        object.__setattr__(self, "n_reps", int(self.n_reps))
        object.__setattr__(self, "base_seed", int(self.base_seed))
        object.__setattr__(self, "method", Method(self.method))

    def n_steps(self, T: float) -> int:
        return max(1, int(round(T / self.dt)))

    def to_dict(self) -> dict:
        return {
            "version": 1,
            "params": self.params.to_dict(),
            "T_grid": list(self.T_grid),
            "dt": self.dt,
            "n_reps": self.n_reps,
            "base_seed": self.base_seed,
            "method": self.method.value,
            "kappa": self.kappa,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ValidationError("experiment config must be a JSON object")
        unknown = set(data) - _CONFIG_FIELDS
        if unknown:
            raise ValidationError(f"unknown experiment field(s): {sorted(unknown)}")
        for key in ("params", "T_grid", "dt", "n_reps"):
            if key not in data:
                raise ValidationError(f"missing experiment field {key!r}")
        if not isinstance(data["T_grid"], list):
            raise ValidationError("T_grid must be a list")
        return cls(
            params=ModelParams.from_dict(data["params"]),
            T_grid=tuple(data["T_grid"]),
            dt=data["dt"],
            n_reps=data["n_reps"],
            base_seed=data.get("base_seed", 0),
            method=data.get("method", "full"),
            kappa=data.get("kappa", 6.0),
        )


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    rows: list
    summary: list
    runtime: dict = field(default_factory=dict)

    def column(self, name: str, t_index: int = 0, ok_only: bool = True) -> np.ndarray:
        vals = [r[name] for r in self.rows
                if r["t_index"] == t_index and (r["status"] == "ok" or not ok_only)]
        return np.array(vals, dtype=float)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(ROW_FIELDS)
        for r in self.rows:
            writer.writerow([_render(r[k]) for k in ROW_FIELDS])
        return buf.getvalue()

    def summary_dict(self) -> dict:
        return {"config": self.config.to_dict(), "summary": self.summary}


def _render(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def rep_seed(base_seed: int, rep: int, t_index: int) -> int:
    """Order-independent per-replication seed."""
    ss = np.random.SeedSequence([base_seed, rep, t_index])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _nan_row(t_index, rep, T, seed, status):
    row = dict.fromkeys(ROW_FIELDS, math.nan)
    row.update(t_index=t_index, rep=rep, T=T, seed=seed, status=status, n_clamped=-1)
    return row


def _one_rep(task):
    params_dict, T, n_steps, seed, t_index, rep, method, kappa = task
    p = ModelParams.from_dict(params_dict)
    try:
        path = simulate_path(p, T, n_steps, seed, kappa=kappa)
        rep_ = mle_b(path, method, p, b_true=p.b)
    except (ValidationError, ArithmeticError, RuntimeError) as exc:
        return _nan_row(t_index, rep, T, seed, f"error: {type(exc).__name__}: {exc}")
    y_T = float(path.values[-1])
    aux1 = aux2 = math.nan
    if p.b < 0:
        try:
            aux1, aux2 = auxiliary_supercritical_estimators(path, rep_.integral_Y)
        except NotComputable:
            pass
    scale = math.exp(p.b * T)
    none_nan = lambda x: math.nan if x is None else float(x)  # noqa: E731
    return {
        "t_index": t_index, "rep": rep, "T": T, "seed": seed, "status": "ok",
        "b_hat": rep_.b_hat,
        "scaled_error_deterministic": none_nan(rep_.scaled_error_deterministic),
        "scaled_error_random": none_nan(rep_.scaled_error_random),
        "sigma2_hat": rep_.sigma2_hat,
        "integral_Y": rep_.integral_Y,
        "Y_T": y_T,
        "aux_log_ratio": aux1,
        "aux_ratio": aux2,
        "scaled_Y_T": scale * y_T,
        "scaled_integral": scale * integrate_path(path),
        "n_clamped": path.n_clamped,
    }


def _map(tasks, workers: int):
    if workers <= 1:
        return [_one_rep(t) for t in tasks]
    ctx = multiprocessing.get_context("fork")
    with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
        return list(pool.map(_one_rep, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


def ks_normal(samples):
    """One-sample KS statistic against N(0, 1) and its asymptotic p-value."""
    x = np.asarray(samples, dtype=float)
    x = x[np.isfinite(x)]
    if x.size < 20:
        raise ValidationError(f"KS check needs at least 20 finite samples, got {x.size}")
    res = stats.kstest(x, "norm", method="asymp")
    return float(res.statistic), float(res.pvalue)


def _summarize(cfg: ExperimentConfig, rows) -> list:
    p = cfg.params
    out = []
    for ti, T in enumerate(cfg.T_grid):
        ok = [r for r in rows if r["t_index"] == ti and r["status"] == "ok"]
        b_hat = np.array([r["b_hat"] for r in ok])
        entry = {"T": T, "n_eff": len(ok), "n_failed": cfg.n_reps - len(ok)}
        if len(ok) >= 2:
            entry["mean_b_hat"] = float(b_hat.mean())
            entry["var_b_hat"] = float(b_hat.var(ddof=1))
            entry["median_abs_error"] = float(np.median(np.abs(b_hat - p.b)))
            for key in ("scaled_error_deterministic", "scaled_error_random"):
                col = np.array([r[key] for r in ok])
                col = col[np.isfinite(col)]
                if col.size >= 2:
                    entry[f"mean_{key}"] = float(col.mean())
                    entry[f"var_{key}"] = float(col.var(ddof=1))
                if key == "scaled_error_random" and col.size >= 20:
                    entry["ks_random"] = list(ks_normal(col))
                if key == "scaled_error_deterministic" and col.size >= 20 and p.b > 0 and p.a > 0:
                    entry["ks_deterministic"] = list(ks_normal(col / math.sqrt(p.sigma**2 * p.b / p.a)))
        out.append(entry)
    return out


def run_experiment(cfg: ExperimentConfig, workers: int = 1) -> ExperimentResult:
    """Run n_reps replications at every horizon; deterministic in ``cfg``."""
    start = time.perf_counter()
    pd = cfg.params.to_dict()
    tasks = [
        (pd, T, cfg.n_steps(T), rep_seed(cfg.base_seed, rep, ti), ti, rep, cfg.method.value, cfg.kappa)
        for ti, T in enumerate(cfg.T_grid)
        for rep in range(cfg.n_reps)
    ]
    rows = _map(tasks, workers)
    rows.sort(key=lambda r: (r["t_index"], r["rep"]))
    return ExperimentResult(cfg, rows, _summarize(cfg, rows),
                            {"seconds": time.perf_counter() - start, "workers": workers})


def consistency_curve(cfg: ExperimentConfig, workers: int = 1, result=None):
    """[(T, median |b_hat - b|)] over the horizons of ``cfg``."""
    result = result or run_experiment(cfg, workers)
    return [(s["T"], s.get("median_abs_error", math.nan)) for s in result.summary]


def check_V_limit(cfg: ExperimentConfig, u_grid, workers: int = 1, result=None) -> dict:
    """Compare the MC mean of exp(u e^{bT} Y_T) at the largest horizon with E exp(u V).

    Also reports the fraction of paths where e^{bT} int Y and -e^{bT} Y_T / b
    agree within 5% (both converge to -V/b).
    """
    p = cfg.params
    if p.b >= 0:
        raise ValidationError("the V limit exists only for b < 0")
    result = result or run_experiment(cfg, workers)
    ti = len(cfg.T_grid) - 1
    scaled = result.column("scaled_Y_T", ti)
    scaled_int = result.column("scaled_integral", ti)
    rows = []
    for u in u_grid:
        if u > 0:
            raise ValidationError(f"u must be <= 0, got {u}")
        vals = np.exp(u * scaled)
        se = float(vals.std(ddof=1) / math.sqrt(vals.size))
        rows.append({"u": u, "mc": float(vals.mean()), "se": se, "analytic": laplace_V(p, u).value})
    gap = np.abs(scaled_int + scaled / p.b) / np.maximum(scaled, 0.01)
    return {"T": cfg.T_grid[ti], "rows": rows, "identity_fraction": float(np.mean(gap < 0.05)),
            "n_eff": int(scaled.size)}
