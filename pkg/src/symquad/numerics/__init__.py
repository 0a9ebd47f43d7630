"""Numerical integration, root tracking and the reduce-then-lift pipeline."""

from .closed_forms import residual_check
from .integrator import ReducedSystem, dopri5, integrate_direct, integrate_reduced, uniform_grid
from .pipeline import IntegrationReport, Status, algebraic_integrate
from .roots import aberth, match_to, monic_from_sigma, track_roots
from .trajectory import ToleranceConfig, Trajectory

__all__ = [
    "ToleranceConfig", "Trajectory", "IntegrationReport", "Status",
    "dopri5", "integrate_direct", "integrate_reduced", "ReducedSystem", "uniform_grid",
    "aberth", "match_to", "monic_from_sigma", "track_roots",
    "algebraic_integrate", "residual_check",
]
