"""Parameters, branching/immigration mechanisms and scalar root constructions.

The alpha-stable CIR process solves

    dY_t = (a - b Y_t) dt + sigma sqrt(Y_t) dW_t + delta Y_{t-}^{1/alpha} dL_t

and is a CBI process with branching mechanism

    R(z) = sigma^2 z^2 / 2 + delta^alpha z^alpha / alpha + b z

and immigration mechanism F(z) = a z.
"""

from __future__ import annotations

import enum
import functools
import json
import math
from dataclasses import asdict, dataclass

__all__ = [
    "BracketError",
    "ModelParams",
    "NumericalFault",
    "Regime",
    "ValidationError",
    "branching_mechanism",
    "c_v_root",
    "classify",
    "immigration_mechanism",
    "mean_Y",
    "theta0",
]

_TINY = 1e-300
_MAX_DOUBLINGS = 200


class ValidationError(ValueError):
    """Invalid parameters or arguments."""


class NumericalFault(RuntimeError):
    """A numerical routine failed (bracket search, ODE, quadrature, NaN state)."""


class BracketError(NumericalFault):
    pass


class Regime(str, enum.Enum):
    SUBCRITICAL = "subcritical"
    CRITICAL = "critical"
    SUPERCRITICAL = "supercritical"


@dataclass(frozen=True)
class ModelParams:
    """Parameter vector ``(a, b, sigma, delta, alpha)`` plus the initial value ``y0``."""

    a: float
    b: float
    sigma: float
    delta: float
    alpha: float
    y0: float = 0.0

    def __post_init__(self):
        for name in ("a", "b", "sigma", "delta", "alpha", "y0"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValidationError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise ValidationError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.a < 0:
            raise ValidationError(f"a must be >= 0, got {self.a}")
        if self.sigma < 0:
            raise ValidationError(f"sigma must be >= 0, got {self.sigma}")
        if self.delta <= 0:
            raise ValidationError(f"delta must be > 0, got {self.delta}")
        if not 1.0 < self.alpha < 2.0:
            raise ValidationError(f"alpha must lie in (1, 2), got {self.alpha}")
        if self.y0 < 0:
            raise ValidationError(f"y0 must be >= 0, got {self.y0}")

    def replace(self, **changes) -> "ModelParams":
        fields = asdict(self)
        fields.update(changes)
        return ModelParams(**fields)

    @property
    def delta_alpha(self) -> float:
        """``delta ** alpha``, the jump coefficient of the branching mechanism."""
        return self.delta**self.alpha

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ModelParams":
        if not isinstance(data, dict):
            raise ValidationError("params must be a JSON object")
        expected = {"a", "b", "sigma", "delta", "alpha", "y0"}
        unknown = set(data) - expected
        if unknown:
            raise ValidationError(f"unknown parameter field(s): {sorted(unknown)}")
        missing = expected - set(data)
        if missing:
            raise ValidationError(f"missing parameter field(s): {sorted(missing)}")
        return cls(**data)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "ModelParams":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"params are not valid JSON: {exc}") from None
        return cls.from_dict(data)


def branching_mechanism(p: ModelParams, z: float) -> float:
    """R(z) = sigma^2 z^2/2 + delta^alpha z^alpha/alpha + b z for z >= 0."""
    if z < 0:
        raise ValidationError(f"branching mechanism needs z >= 0, got {z}")
    return 0.5 * p.sigma**2 * z * z + p.delta_alpha * z**p.alpha / p.alpha + p.b * z


def immigration_mechanism(p: ModelParams, z: float) -> float:
    if z < 0:
        raise ValidationError(f"immigration mechanism needs z >= 0, got {z}")
    return p.a * z


def _reduced_branching(p: ModelParams, z: float) -> float:
    # R(z)/z, strictly increasing on (0, inf); avoids the 0/0 near the origin
    return 0.5 * p.sigma**2 * z + p.delta_alpha * z ** (p.alpha - 1.0) / p.alpha + p.b


def _bisect(f, lo: float, hi: float, xtol: float, *, geometric: bool = False) -> float:
    """Bisection for an increasing ``f`` with f(lo) < 0 < f(hi).

    ``geometric`` splits at sqrt(lo*hi) (same-sign, nonzero endpoints), which
    resolves roots many decades below the bracket width in relative terms.
    """
    while hi - lo > xtol:
        if geometric:
            mid = math.copysign(math.sqrt(lo * hi), lo)
        else:
            mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def theta0(p: ModelParams, *, xtol: float = 1e-12) -> float:
    """Largest root of R: zero unless b < 0, where it is the unique positive root.

    The root is located to adjacent floating-point numbers, which is tighter
    than ``xtol`` everywhere; it can sit far below 1 when alpha is near 1.
    """
    return _theta0_cached(p, xtol)


@functools.lru_cache(maxsize=256)
def _theta0_cached(p: ModelParams, xtol: float) -> float:
    if p.b >= 0:
        return 0.0
    if p.sigma == 0.0:
        return (-p.b * p.alpha / p.delta_alpha) ** (1.0 / (p.alpha - 1.0))
    lo, hi = _TINY, 1.0
    f = lambda z: _reduced_branching(p, z)  # noqa: E731
    for _ in range(_MAX_DOUBLINGS):
        if f(hi) > 0:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise BracketError("theta0: no sign change found while expanding the bracket")
    # polish to machine precision; the K machinery is sensitive to theta0
    return _bisect(f, lo, hi, 0.0, geometric=True)


def c_v_root(p: ModelParams, v: float, *, xtol: float = 1e-12) -> float:
    """Unique negative x with R(-x) = -v, for v < 0 and b >= 0."""
    if not v < 0:
        raise ValidationError(f"c_v needs v < 0, got {v}")
    if p.b < 0:
        raise ValidationError(f"c_v is only defined for b >= 0, got b={p.b}")

    def g(x):
        # R(-x) + v, strictly decreasing in x <= 0
        w = -x
        return 0.5 * p.sigma**2 * w * w + p.delta_alpha * w**p.alpha / p.alpha + p.b * w + v

    lo, hi = -1.0, -_TINY
    for _ in range(_MAX_DOUBLINGS):
        if g(lo) > 0:
            break
        hi, lo = lo, 2.0 * lo
    else:
        raise BracketError("c_v: no sign change found while expanding the bracket")
    # g decreasing: negate to reuse the increasing-function bisection
    root = _bisect(lambda x: -g(x), lo, hi, 0.0, geometric=True)
    return min(root, -_TINY)


def mean_Y(p: ModelParams, t: float) -> float:
    """First moment E(Y_t) started from y0."""
    if t < 0:
        raise ValidationError(f"t must be >= 0, got {t}")
    if abs(p.b) < 1e-12 * max(1.0, abs(p.a), p.y0):
        return p.y0 + p.a * t
    # (1 - e^{-bt})/b via expm1 keeps accuracy for small |b| t
    return p.y0 * math.exp(-p.b * t) + p.a * (-math.expm1(-p.b * t)) / p.b


def classify(p: ModelParams) -> Regime:
    if p.b > 0:
        return Regime.SUBCRITICAL
    if p.b == 0:
        return Regime.CRITICAL
    return Regime.SUPERCRITICAL
