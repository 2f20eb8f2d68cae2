"""Explicit formulas for alpha = 3/2, used as oracles for the numeric engines.

With alpha = 3/2 the substitution x = y^2 turns every F/R and K integrand into a
rational function of y. Writing

    p = 4 delta^(3/2) / (3 sigma^2),   q = 2 b / sigma^2,   D = q - p^2/4,

everything reduces to integrals of 1/(y^2 + p y + q), whose antiderivative is
an arctan (D > 0), a reciprocal (D = 0) or a log of a ratio (D < 0).

Three of the formulas in the source derivation carry typos that quadrature
exposes immediately; the versions below are re-derived and match quadrature
to ~1e-15:
  * the log branch coefficient of int dy/(y^2+py+q) is 1/(2 sqrt(-D)), not
    1/sqrt(-D);
  * in the D = 0 stationary case int_0^Y dy/(y+p/2)^2 = Y/((p/2)(Y+p/2));
  * the product form of K for sigma > 0 has exponents -1 + c and -1 - c on the
    (+) and (-) factors with c = (p/2)/sqrt(-D).
"""

from __future__ import annotations

import math

from ..model import ModelParams, NumericalFault, ValidationError, _bisect, theta0

__all__ = [
    "K_alpha32",
    "closed_form_oracles_alpha32",
    "laplace_V_alpha32",
    "psi_residual_alpha32",
    "psi_star_alpha32",
    "stationary_laplace_alpha32",
]

# relative width of the D = 0 band; inside it the reciprocal branch is used
_BRANCH_TOL = 1e-12


def _check(p: ModelParams):
    if p.alpha != 1.5:
        raise ValidationError(f"closed forms need alpha = 1.5, got {p.alpha}")


def _pq(p: ModelParams):
    d32 = p.delta**1.5
    return 4.0 * d32 / (3.0 * p.sigma**2), 2.0 * p.b / p.sigma**2


def _branch(p: ModelParams) -> int:
    """Sign of D, i.e. of b - 2 delta^3/(9 sigma^2)."""
    b_star = 2.0 * p.delta**3 / (9.0 * p.sigma**2)
    if abs(p.b - b_star) <= _BRANCH_TOL * b_star:
        return 0
    return 1 if p.b > b_star else -1


def _quadratic_antiderivative(y: float, p: float, q: float, branch: int) -> float:
    """An antiderivative of 1/(y^2 + p y + q)."""
    h = y + 0.5 * p
    if branch > 0:
        k = math.sqrt(q - 0.25 * p * p)
        return math.atan(h / k) / k
    if branch == 0:
        return -1.0 / h
    k = math.sqrt(0.25 * p * p - q)
    return math.log(abs((h - k) / (h + k))) / (2.0 * k)


# --- stationary law ------------------------------------------------------------

def stationary_laplace_alpha32(p: ModelParams, lam: float) -> float:
    """Laplace transform of the stationary law at lam >= 0 (b >= 0)."""
    _check(p)
    if p.b < 0:
        raise ValidationError("stationary law needs b >= 0")
    if lam < 0:
        raise ValidationError(f"lambda must be >= 0, got {lam}")
    if lam == 0:
        return 1.0
    a, b, s2, d32 = p.a, p.b, p.sigma**2, p.delta**1.5
    r = math.sqrt(lam)
    if s2 == 0.0:
        if b == 0.0:
            return math.exp(-3.0 * a * r / d32)
        return math.exp(-3.0 * a * r / d32) * (1.0 + 2.0 * d32 * r / (3.0 * b)) ** (
            9.0 * b * a / (2.0 * d32 * d32))
    if b == 0.0:
        return (3.0 * s2 * r / (4.0 * d32) + 1.0) ** (-4.0 * a / s2)
    pp, q = _pq(p)
    base = (s2 * lam / (2.0 * b) + 2.0 * d32 * r / (3.0 * b) + 1.0) ** (-2.0 * a / s2)
    c = 8.0 * a * d32 / (3.0 * s2 * s2)
    br = _branch(p)
    if br > 0:
        k = math.sqrt(q - 0.25 * pp * pp)
        return base * math.exp(c / k * math.atan(k / (q / r + 0.5 * pp)))
    if br == 0:
        return base * math.exp(c / (0.5 * pp) / (1.0 + 0.5 * pp / r))
    k = math.sqrt(0.25 * pp * pp - q)
    ratio = (r * (0.5 * pp + k) + q) / (r * (0.5 * pp - k) + q)
    return base * ratio ** (c / (2.0 * k))


# --- implicit psi_{u,0} relation ------------------------------------------------

def _g_antiderivative(p: ModelParams, g: float) -> float:
    """An antiderivative G of 1/((g^2 + p g + q) g); then G(g(t)) - G(g(0)) = -sigma^2 t/4."""
    pp, q = _pq(p)
    if p.b == 0.0:
        return math.log1p(pp / g) / (pp * pp) - 1.0 / (pp * g)
    s2, d32 = p.sigma**2, p.delta**1.5
    lead = -s2 / (4.0 * p.b) * math.log(abs(1.0 + pp / g + q / (g * g)))
    return lead - d32 / (3.0 * p.b) * _quadratic_antiderivative(g, pp, q, _branch(p))


def psi_residual_alpha32(p: ModelParams, psi: float, t: float, u: float) -> float:
    """Residual of the implicit equation linking psi_{u,0}(t), u and t.

    Zero iff ``psi`` solves psi' = sigma^2 psi^2/2 + (2 delta^(3/2)/3)(-psi)^(3/2) - b psi,
    psi(0) = u. Needs sigma > 0, u < 0 and, for b < 0, u != -theta0.
    """
    _check(p)
    if p.sigma == 0.0:
        raise ValidationError("the implicit psi relation needs sigma > 0")
    if not u < 0 or not psi < 0:
        raise ValidationError("need u < 0 and psi < 0")
    if p.b < 0 and u == -theta0(p):
        raise ValidationError("u = -theta0 is the constant solution; no implicit relation")
    g_t, g_0 = math.sqrt(-psi), math.sqrt(-u)
    return _g_antiderivative(p, g_t) - _g_antiderivative(p, g_0) + 0.25 * p.sigma**2 * t


# --- supercritical limit V ------------------------------------------------------

def K_alpha32(p: ModelParams, lam: float) -> float:
    _check(p)
    if p.b >= 0:
        raise ValidationError("K needs b < 0")
    th = theta0(p)
    if not 0.0 < lam < th:
        raise ValidationError(f"lambda must lie in (0, theta0={th}), got {lam}")
    b, d32, s = p.b, p.delta**1.5, lam**-0.5
    if p.sigma == 0.0:
        return (2.0 * d32 / (3.0 * b) + s) ** -2.0
    pp, q = _pq(p)
    c = 0.5 * pp / math.sqrt(0.25 * pp * pp - q)
    root = math.sqrt(d32 * d32 / (9.0 * b * b) - p.sigma**2 / (2.0 * b))
    r_plus, r_minus = d32 / (3.0 * b) + root, d32 / (3.0 * b) - root
    return (s + r_plus) ** (-1.0 + c) * (s + r_minus) ** (-1.0 - c)


def psi_star_alpha32(p: ModelParams, u: float) -> float:
    """psi*_u = -K^{-1}(-u); explicit for sigma = 0, bisection on the explicit K otherwise."""
    _check(p)
    if u > 0:
        raise ValidationError(f"u must be <= 0, got {u}")
    if u == 0:
        return 0.0
    if p.sigma == 0.0:
        return -((-u) ** -0.5 - 2.0 * p.delta**1.5 / (3.0 * p.b)) ** -2.0
    th = theta0(p)
    x = -u
    lam = _bisect(lambda z: math.log(K_alpha32(p, z)) - math.log(x) if z > 0 else -math.inf,
                  0.0, th, 0.0)
    if not 0.0 < lam < th:
        raise NumericalFault("K inversion left (0, theta0)")
    return -lam


def laplace_V_alpha32(p: ModelParams, u: float) -> float:
    """E exp(u V) for alpha = 3/2, b < 0, u <= 0."""
    _check(p)
    if p.b >= 0:
        raise ValidationError("V exists only for b < 0")
    if u == 0:
        return 1.0
    a, b, y0, d32 = p.a, p.b, p.y0, p.delta**1.5
    if p.sigma == 0.0:
        m = (-u) ** -0.5 - 2.0 * d32 / (3.0 * b)
        return (math.exp(-y0 * m**-2.0) * math.exp(3.0 * a / (d32 * m))
                * (1.0 - 2.0 * d32 * (-u) ** 0.5 / (3.0 * b)) ** (9.0 * b * a / (2.0 * d32 * d32)))
    psi = psi_star_alpha32(p, u)
    y = math.sqrt(-psi)
    pp, q = _pq(p)
    s2 = p.sigma**2
    # int_0^{y} 2y/(s2 y^2/2 + 2 d32 y/3 + b) dy
    log_part = 2.0 / s2 * math.log((y * y + pp * y + q) / q)
    a_part = _quadratic_antiderivative(y, pp, q, -1) - _quadratic_antiderivative(0.0, pp, q, -1)
    integral = log_part - 2.0 * pp / s2 * a_part
    return math.exp(y0 * psi + a * integral)


# --- dispatcher ------------------------------------------------------------------

def closed_form_oracles_alpha32(p: ModelParams, kind: str, **kw) -> float:
    """Evaluate one closed form.

    kind = "stationary" (lam), "psi_residual" (psi, t, u), "K" (lam), "V" (u).
    """
    _check(p)
    if kind == "stationary":
        return stationary_laplace_alpha32(p, kw["lam"])
    if kind == "psi_residual":
        return psi_residual_alpha32(p, kw["psi"], kw["t"], kw["u"])
    if kind == "K":
        return K_alpha32(p, kw["lam"])
    if kind == "V":
        return laplace_V_alpha32(p, kw["u"])
    raise ValidationError(f"unknown closed-form kind {kind!r}")
