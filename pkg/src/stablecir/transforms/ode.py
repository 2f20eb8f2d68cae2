"""Riccati-type ODEs behind the Laplace transforms of Y_t and (Y_t, int Y).

    d/dt v_t(lam)   = -R(v_t(lam)),                 v_0 = lam >= 0
    d/dt psi_{u,v}  = R(-psi_{u,v}) + v,             psi_{u,v}(0) = u <= 0

so that

    E exp(-lam Y_t)              = exp(-y0 v_t - int_0^t F(v_s) ds)
    E exp(u Y_t + v int_0^t Y)   = exp(y0 psi(t) + a int_0^t psi(s) ds).

The running integral is carried as a second state component, so a single
adaptive solve gives both terms. The right-hand sides are Lipschitz except at
the invariant boundary 0, where the state is clamped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate

from ..model import ModelParams, NumericalFault, ValidationError, c_v_root, theta0
from ._quad import integral_F_over_R
from .result import TransformResult

__all__ = [
    "OdeSolution",
    "critical_psi_integral",
    "joint_laplace",
    "laplace_Y",
    "solve_psi",
    "solve_v",
]

RTOL = 1e-10
ATOL = 1e-12
N_SAMPLES = 65

# 4-point Gauss-Legendre rule on [0, 1] for the defect check
_GL_X, _GL_W = np.polynomial.legendre.leggauss(4)
_GL_X = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_W


@dataclass(frozen=True)
class OdeSolution:
    """Terminal state plus diagnostics of one adaptive solve.

    ``integral`` is the running integral carried in the augmented state
    (int F(v_s) ds for v, int psi(s) ds for psi). ``max_residual`` is the
    largest per-step defect y(t_{k+1}) - y(t_k) - int f(y) of the dense output.
    """

    terminal_value: float
    integral: float
    trajectory: Optional[tuple]
    steps_taken: int
    max_residual: float


def _constant(value: float, rate: float, t: float, n_samples: int) -> OdeSolution:
    times = np.linspace(0.0, t, n_samples) if n_samples else None
    traj = (times, np.full(n_samples, value)) if n_samples else None
    return OdeSolution(value, rate * t, traj, 0, 0.0)


def _solve(rhs, start: float, t: float, clamp, rtol, atol, n_samples) -> OdeSolution:
    sol = integrate.solve_ivp(rhs, (0.0, t), [start, 0.0], method="DOP853", rtol=rtol,
                              atol=atol, dense_output=True, vectorized=True)
    if not sol.success:
        raise NumericalFault(f"ODE solver failed: {sol.message}")
    y_end, i_end = sol.y[0, -1], sol.y[1, -1]
    if not (math.isfinite(y_end) and math.isfinite(i_end)):
        raise NumericalFault("ODE solver produced a non-finite state")

    # defect of the continuous approximation on every accepted step
    t0, t1 = sol.t[:-1], sol.t[1:]
    h = t1 - t0
    nodes = (t0[:, None] + h[:, None] * _GL_X[None, :]).ravel()
    f_nodes = rhs(nodes, sol.sol(nodes))[0].reshape(h.size, _GL_X.size)
    defect = sol.sol(t1)[0] - sol.sol(t0)[0] - h * (f_nodes @ _GL_W)
    max_res = float(np.max(np.abs(defect))) if defect.size else 0.0

    traj = None
    if n_samples:
        times = np.linspace(0.0, t, n_samples)
        traj = (times, clamp(sol.sol(times)[0]))
    return OdeSolution(float(clamp(y_end)), float(i_end), traj, int(sol.t.size - 1), max_res)


def solve_v(p: ModelParams, lam: float, t: float, *, rtol: float = RTOL, atol: float = ATOL,
            n_samples: int = N_SAMPLES) -> OdeSolution:
    """Solve v' = -R(v), v(0) = lam, carrying int_0^t F(v_s) ds."""
    if lam < 0:
        raise ValidationError(f"lambda must be >= 0, got {lam}")
    if t < 0:
        raise ValidationError(f"t must be >= 0, got {t}")
    if lam == 0.0 or t == 0.0:
        return _constant(lam, p.a * lam, t, n_samples)
    s2h, da, al, b, a = 0.5 * p.sigma**2, p.delta_alpha / p.alpha, p.alpha, p.b, p.a

    def rhs(_, y):
        v = np.maximum(y[0], 0.0)
        return np.array([-(s2h * v * v + da * v**al + b * v), a * v])

    return _solve(rhs, lam, t, lambda x: np.maximum(x, 0.0), rtol, atol, n_samples)


def solve_psi(p: ModelParams, u: float, v: float, t: float, *, rtol: float = RTOL,
              atol: float = ATOL, n_samples: int = N_SAMPLES) -> OdeSolution:
    """Solve psi' = sigma^2 psi^2/2 + delta^alpha (-psi)^alpha/alpha - b psi + v, psi(0) = u.

    The integral component is int_0^t psi(s) ds (without the factor a).
    """
    if u > 0 or v > 0:
        raise ValidationError(f"need u <= 0 and v <= 0, got u={u}, v={v}")
    if t < 0:
        raise ValidationError(f"t must be >= 0, got {t}")
    if (u == 0.0 and v == 0.0) or t == 0.0:
        return _constant(u, u, t, n_samples)
    s2h, da, al, b = 0.5 * p.sigma**2, p.delta_alpha / p.alpha, p.alpha, p.b

    def rhs(_, y):
        w = np.maximum(-y[0], 0.0)
        # (-psi)^alpha as exp(alpha log w), guarded at w = 0
        w_al = np.where(w > 0.0, np.exp(al * np.log(np.where(w > 0.0, w, 1.0))), 0.0)
        return np.array([s2h * w * w + da * w_al + b * w + v, -w])

    return _solve(rhs, u, t, lambda x: np.minimum(x, 0.0), rtol, atol, n_samples)


def laplace_Y(p: ModelParams, lam: float, t: float, *, route: str = "ode",
              rtol: float = RTOL, atol: float = ATOL) -> TransformResult:
    """E exp(-lam Y_t) started from y0.

    route="ode" integrates F(v_s) along the trajectory; route="quadrature" uses
    exp(-y0 v_t + int_lam^{v_t} F/R), which needs lam != theta0.
    """
    if lam < 0 or t < 0:
        raise ValidationError(f"need lambda >= 0 and t >= 0, got ({lam}, {t})")
    sol = solve_v(p, lam, t, rtol=rtol, atol=atol, n_samples=0)
    v_t = sol.terminal_value
    diag = {"route": route, "v_t": v_t, "steps": sol.steps_taken,
            "max_residual": sol.max_residual}
    if route == "ode":
        log_val = -p.y0 * v_t - sol.integral
    elif route == "quadrature":
        if p.b < 0 and lam == theta0(p):
            raise ValidationError("the quadrature route is undefined at lambda = theta0")
        if lam == 0.0 or t == 0.0:
            log_val = -p.y0 * v_t
            diag["quad_error"] = 0.0
        else:
            lo, hi = min(lam, v_t), max(lam, v_t)
            integral, err = integral_F_over_R(p, lo, hi)
            # int_lam^{v_t}; v_t moves away from lam toward 0 or theta0
            sign = 1.0 if v_t >= lam else -1.0
            log_val = -p.y0 * v_t + sign * integral
            diag["quad_error"] = err
    else:
        raise ValidationError(f"unknown route {route!r}")
    return TransformResult(math.exp(log_val), diag)


def joint_laplace(p: ModelParams, u: float, v: float, t: float, *, rtol: float = RTOL,
                  atol: float = ATOL) -> TransformResult:
    """E exp(u Y_t + v int_0^t Y_s ds) for u, v <= 0."""
    sol = solve_psi(p, u, v, t, rtol=rtol, atol=atol, n_samples=0)
    log_val = p.y0 * sol.terminal_value + p.a * sol.integral
    diag = {"psi_t": sol.terminal_value, "int_psi": sol.integral, "steps": sol.steps_taken,
            "max_residual": sol.max_residual}
    return TransformResult(math.exp(log_val), diag)


def critical_psi_integral(p: ModelParams, v: float, psi_t: float) -> float:
    """int_0^{psi_t} x / (sigma^2 x^2/2 + delta^alpha (-x)^alpha/alpha + v) dx for b = 0.

    For b = 0 and u = 0 this equals int_0^t psi_{0,v}(s) ds, which gives an
    ODE-free cross-check of joint_laplace. Needs c_v < psi_t <= 0.
    """
    if p.b != 0.0:
        raise ValidationError("the substitution identity holds for b = 0 only")
    if not v < 0 or psi_t > 0:
        raise ValidationError("need v < 0 and psi_t <= 0")
    if psi_t == 0.0:
        return 0.0
    s2h, da, al = 0.5 * p.sigma**2, p.delta_alpha / p.alpha, p.alpha
    c_v = c_v_root(p, v)
    # the denominator has a simple zero at c_v; its pole part is integrated
    # in closed form so quad only sees a bounded remainder
    w = -c_v
    slope = -(p.sigma**2 * w + p.delta_alpha * w ** (al - 1.0))
    k = c_v / slope

    def f(x):
        w = -x
        return x / (s2h * w * w + da * w**al + v) - k / (x - c_v)

    val, _ = integrate.quad(f, psi_t, 0.0, epsabs=1e-14, epsrel=1e-12, limit=500)
    return -(val + k * math.log(-c_v / (psi_t - c_v)))
