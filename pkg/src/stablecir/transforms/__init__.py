"""Laplace transforms of the alpha-stable CIR process."""

from .alpha32 import (
    K_alpha32,
    closed_form_oracles_alpha32,
    laplace_V_alpha32,
    psi_residual_alpha32,
    psi_star_alpha32,
    stationary_laplace_alpha32,
)
from .ode import OdeSolution, critical_psi_integral, joint_laplace, laplace_Y, solve_psi, solve_v
from .result import TransformResult
from .stationary import stationary_laplace, stationary_mean
from .oracles import oracle_suite
from .supercritical import K_fun, K_inverse, laplace_V, log_K

__all__ = [
    "K_alpha32",
    "K_fun",
    "K_inverse",
    "OdeSolution",
    "TransformResult",
    "closed_form_oracles_alpha32",
    "critical_psi_integral",
    "joint_laplace",
    "laplace_V",
    "laplace_V_alpha32",
    "laplace_Y",
    "log_K",
    "oracle_suite",
    "psi_residual_alpha32",
    "psi_star_alpha32",
    "solve_psi",
    "solve_v",
    "stationary_laplace",
    "stationary_laplace_alpha32",
    "stationary_mean",
]
