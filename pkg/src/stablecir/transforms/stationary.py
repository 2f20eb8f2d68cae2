"""Stationary law of the subcritical and critical process (b >= 0)."""

from __future__ import annotations

import math

from ..model import ModelParams, ValidationError
from ._quad import integral_F_over_R
from .result import TransformResult

__all__ = ["stationary_laplace", "stationary_mean"]


def stationary_laplace(p: ModelParams, lam: float) -> TransformResult:
    """exp(-int_0^lam F(x)/R(x) dx)."""
    if p.b < 0:
        raise ValidationError("the stationary law exists only for b >= 0")
    if lam < 0:
        raise ValidationError(f"lambda must be >= 0, got {lam}")
    integral, err = integral_F_over_R(p, 0.0, lam)
    return TransformResult(math.exp(-integral), {"quad_error": err})


def stationary_mean(p: ModelParams) -> float:
    """a/b for b > 0; 0 when a = b = 0; inf when a > 0 = b."""
    if p.b < 0:
        raise ValidationError("the stationary law exists only for b >= 0")
    if p.b > 0:
        return p.a / p.b
    return 0.0 if p.a == 0.0 else math.inf
