"""Quadratures shared by the stationary and supercritical transforms.

Both integrands have an integrable power singularity at the origin that is
removed by a change of variables, and (for b < 0) a simple pole at theta0
that is subtracted analytically.
"""

from __future__ import annotations

import math

from scipy import integrate

from ..model import ModelParams, NumericalFault, ValidationError, theta0

EPSABS = 1e-14
EPSREL = 1e-13
LIMIT = 500


def _reduced(p: ModelParams, x: float) -> float:
    # R(x)/x
    return 0.5 * p.sigma**2 * x + p.delta_alpha * x ** (p.alpha - 1.0) / p.alpha + p.b


def _reduced_slope(p: ModelParams, x: float) -> float:
    # d/dx R(x)/x
    return 0.5 * p.sigma**2 + p.delta_alpha * (p.alpha - 1.0) * x ** (p.alpha - 2.0) / p.alpha


def _quad(f, lo, hi):
    val, err, info = integrate.quad(f, lo, hi, epsabs=EPSABS, epsrel=EPSREL, limit=LIMIT,
                                    full_output=1)[:3]
    if not math.isfinite(val):
        raise NumericalFault("quadrature returned a non-finite value")
    return val, err, info["neval"]


def integral_F_over_R(p: ModelParams, lo: float, hi: float):
    """int_lo^hi F(x)/R(x) dx for 0 <= lo <= hi, returned as (value, error_estimate).

    Uses s = x^(2-alpha), which turns a x/R(x) ~ x^(1-alpha) (b = 0) into a
    bounded integrand. For b < 0 the interval must stay on one side of theta0;
    the simple pole a/(r'(theta0)(x - theta0)) is integrated in closed form.
    """
    if lo < 0 or hi < lo:
        raise ValidationError(f"need 0 <= lo <= hi, got ({lo}, {hi})")
    if p.a == 0.0 or lo == hi:
        return 0.0, 0.0
    al = p.alpha
    th = theta0(p)
    pole = 0.0
    if p.b < 0:
        if lo < th < hi or lo == th or hi == th:
            raise ValidationError("F/R integral would cross the pole at theta0")
        pole = p.a / _reduced_slope(p, th)
    da = p.delta_alpha / al

    def integrand(s):
        x = s ** (1.0 / (2.0 - al))
        tail = p.b * x ** (1.0 - al) if p.b != 0.0 else 0.0
        val = p.a / ((2.0 - al) * (0.5 * p.sigma**2 * s + da + tail))
        if pole:
            val -= pole * x ** (al - 1.0) / ((2.0 - al) * (x - th))
        return val

    val, err, _ = _quad(integrand, lo ** (2.0 - al), hi ** (2.0 - al))
    if pole:
        val += pole * math.log(abs(hi - th) / abs(lo - th))
    return val, err


def log_K_integral(p: ModelParams, lam: float):
    """int_0^lam (b/R(z) - 1/z) dz for b < 0 and 0 < lam < theta0, as (value, error).

    The integrand -(sigma^2 z/2 + delta^alpha z^(alpha-1)/alpha)/R(z) behaves
    like z^(alpha-2) at 0, so s = z^(alpha-1) is used here. Near theta0 the pole
    b/(theta0 r'(theta0) (z - theta0)) is subtracted and integrated exactly.
    """
    al = p.alpha
    th = theta0(p)
    if not 0.0 < lam < th:
        raise ValidationError(f"lambda must lie in (0, theta0={th}), got {lam}")
    pole = p.b / (th * _reduced_slope(p, th))
    da = p.delta_alpha / al

    def integrand(s):
        z = s ** (1.0 / (al - 1.0))
        z2a = z ** (2.0 - al)
        val = -(0.5 * p.sigma**2 * z2a + da) / ((al - 1.0) * _reduced(p, z))
        return val - pole * z2a / ((al - 1.0) * (z - th))

    val, err, _ = _quad(integrand, 0.0, lam ** (al - 1.0))
    return val + pole * math.log((th - lam) / th), err
