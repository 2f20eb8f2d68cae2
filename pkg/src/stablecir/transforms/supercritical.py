"""Limit V = lim e^{bt} Y_t of the supercritical process (b < 0).

E exp(u V) = exp(y0 psi*_u + int_0^{-psi*_u} F/R), with psi*_u = -K^{-1}(-u)
and K(lam) = lam exp(int_0^lam (b/R(z) - 1/z) dz), a strictly increasing map
of (0, theta0) onto (0, inf).
"""

from __future__ import annotations

import math

from ..model import ModelParams, NumericalFault, ValidationError, theta0
from ._quad import integral_F_over_R, log_K_integral
from .result import TransformResult

__all__ = ["K_fun", "K_inverse", "laplace_V", "log_K"]


def _need_supercritical(p: ModelParams):
    if p.b >= 0:
        raise ValidationError(f"needs b < 0, got b={p.b}")


def log_K(p: ModelParams, lam: float) -> float:
    _need_supercritical(p)
    if not 0.0 < lam < theta0(p):
        raise ValidationError(f"K is defined on (0, theta0), got lambda={lam}")
    return math.log(lam) + log_K_integral(p, lam)[0]


def K_fun(p: ModelParams, lam: float) -> float:
    return math.exp(log_K(p, lam))


def K_inverse(p: ModelParams, x: float) -> float:
    """The lam in (0, theta0) with K(lam) = x, by bisection down to adjacent floats."""
    _need_supercritical(p)
    if not x > 0 or not math.isfinite(x):
        raise ValidationError(f"x must be finite and > 0, got {x}")
    target = math.log(x)
    lo, hi = 0.0, theta0(p)
    while True:
        # geometric midpoints once lo > 0 keep small roots cheap
        mid = math.sqrt(lo * hi) if lo > 0 else 0.5 * hi
        if not lo < mid < hi:
            break
        if log_K(p, mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    lam = 0.5 * (lo + hi) if lo > 0 else hi
    if not 0.0 < lam < theta0(p):
        raise NumericalFault("K inversion left (0, theta0)")
    return lam


def laplace_V(p: ModelParams, u: float) -> TransformResult:
    """E exp(u V) for u <= 0."""
    _need_supercritical(p)
    if u > 0:
        raise ValidationError(f"u must be <= 0, got {u}")
    if u == 0.0:
        return TransformResult(1.0, {"psi_star": 0.0, "quad_error": 0.0})
    lam = K_inverse(p, -u)
    integral, err = integral_F_over_R(p, 0.0, lam)
    return TransformResult(math.exp(-p.y0 * lam + integral), {"psi_star": -lam, "quad_error": err})
