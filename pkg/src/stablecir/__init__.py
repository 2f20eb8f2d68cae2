"""Simulation, drift estimation and Laplace transforms for the alpha-stable CIR process."""

from .levy import StableLaw
from .model import (
    BracketError,
    ModelParams,
    NumericalFault,
    Regime,
    ValidationError,
    branching_mechanism,
    c_v_root,
    classify,
    immigration_mechanism,
    mean_Y,
    theta0,
)
from .simulate import Path, coarsen, integrate_path, jump_threshold, read_path, simulate_path, write_path

__version__ = "0.1.0"

__all__ = [
    "BracketError",
    "ModelParams",
    "NumericalFault",
    "Path",
    "Regime",
    "StableLaw",
    "ValidationError",
    "branching_mechanism",
    "c_v_root",
    "classify",
    "immigration_mechanism",
    "coarsen",
    "integrate_path",
    "jump_threshold",
    "mean_Y",
    "read_path",
    "simulate_path",
    "theta0",
    "write_path",
]
