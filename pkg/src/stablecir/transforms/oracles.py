"""The alpha = 3/2 closed forms against the general numeric engines, on fixed grids."""

from __future__ import annotations

import math

import numpy as np

from ..model import ModelParams, theta0
from .alpha32 import K_alpha32, laplace_V_alpha32, psi_residual_alpha32, stationary_laplace_alpha32
from .ode import solve_psi
from .stationary import stationary_laplace
from .supercritical import K_fun, laplace_V

__all__ = ["oracle_suite"]

LAMBDAS = tuple(float(x) for x in np.geomspace(0.01, 100.0, 10))
FRACTIONS = tuple(float(x) for x in np.linspace(0.02, 0.98, 10))
U_GRID = tuple(-float(x) for x in np.geomspace(0.01, 100.0, 10))
PSI_POINTS = tuple((-float(u), float(t)) for u, t in zip(np.geomspace(0.05, 20.0, 10),
                                                        np.linspace(0.2, 5.0, 10)))

STATIONARY_CASES = {
    "stationary b>b*": ModelParams(1.2, 1.0, 1.0, 1.0, 1.5),
    "stationary b=b*": ModelParams(1.2, 2.0 / 9.0, 1.0, 1.0, 1.5),
    "stationary 0<b<b*": ModelParams(1.2, 0.05, 1.0, 1.0, 1.5),
    "stationary b>0 sigma=0": ModelParams(1.2, 0.7, 0.0, 1.3, 1.5),
    "stationary b=0 sigma>0": ModelParams(1.2, 0.0, 0.8, 1.3, 1.5),
    "stationary b=0 sigma=0": ModelParams(1.2, 0.0, 0.0, 1.3, 1.5),
}
SUPER_CASES = {
    "sigma>0": ModelParams(1.2, -1.0, 1.0, 1.0, 1.5, 0.8),
    "sigma=0": ModelParams(1.2, -1.0, 0.0, 1.0, 1.5, 0.8),
}
PSI_CASES = {
    "b>b*": ModelParams(1.0, 1.0, 1.0, 1.0, 1.5),
    "b=b*": ModelParams(1.0, 2.0 / 9.0, 1.0, 1.0, 1.5),
    "0<b<b*": ModelParams(1.0, 0.05, 1.0, 1.0, 1.5),
    "b=0": ModelParams(1.0, 0.0, 1.0, 1.0, 1.5),
    "b<0": ModelParams(1.0, -1.0, 1.0, 1.0, 1.5),
}


def _rel(closed: float, numeric: float) -> float:
    return abs(closed - numeric) / abs(closed)


def oracle_suite(rtol: float = 1e-8, residual_tol: float = 1e-7) -> list:
    """Rows {kind, case, point, closed, numeric, error, tol, passed}."""
    rows = []

    def add(kind, case, point, closed, numeric, err, tol):
        rows.append({"kind": kind, "case": case, "point": point, "closed": closed,
                     "numeric": numeric, "error": err, "tol": tol, "passed": bool(err <= tol)})

    for case, p in STATIONARY_CASES.items():
        for lam in LAMBDAS:
            c, n = stationary_laplace_alpha32(p, lam), stationary_laplace(p, lam).value
            add("stationary", case, lam, c, n, _rel(c, n), rtol)
    for case, p in SUPER_CASES.items():
        th = theta0(p)
        for f in FRACTIONS:
            c, n = K_alpha32(p, f * th), K_fun(p, f * th)
            add("K", case, f * th, c, n, _rel(c, n), rtol)
        for u in U_GRID:
            c, n = laplace_V_alpha32(p, u), laplace_V(p, u).value
            add("V", case, u, c, n, _rel(c, n), rtol)
    for case, p in PSI_CASES.items():
        for u, t in PSI_POINTS:
            psi = solve_psi(p, u, 0.0, t, n_samples=0).terminal_value
            r = psi_residual_alpha32(p, psi, t, u)
            add("psi_residual", case, [u, t], 0.0, r, abs(r), residual_tol)
    for row in rows:
        if not math.isfinite(row["error"]):
            row["passed"] = False
    return rows
