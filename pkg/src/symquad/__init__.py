"""Symmetric quadratic dynamical systems: classification, exact reduction to one ODE,
group normal forms, first integrals and numeric round trips."""

from .errors import ConfigError, SymQuadError
from .group_action import BMatrix, normal_form, transform_ode, transform_system
from .integrals import lv_rational_integral, quadratic_integral_basis
from .presets import preset
from .reduction import ReducedODE, initial_jets, reduce, sigma_system
from .systems import QuadraticTensor, SymmetricSystem, classify, detect_symmetry, to_tensor

__all__ = [
    "BMatrix", "ConfigError", "QuadraticTensor", "ReducedODE", "SymQuadError",
    "SymmetricSystem", "classify", "detect_symmetry", "initial_jets", "lv_rational_integral",
    "normal_form", "preset", "quadratic_integral_basis", "reduce", "sigma_system",
    "to_tensor", "transform_ode", "transform_system",
]
