"""Harmonic analysis and frame-potential minimization over finite abelian groups."""

from .filterbank import FilterBank
from .group import GroupSpec, Subgroup, subgroup_closure
from .potential_opt import DesignProblem, DesignReport, minimize_fp

__all__ = [
    "FilterBank",
    "GroupSpec",
    "Subgroup",
    "subgroup_closure",
    "DesignProblem",
    "DesignReport",
    "minimize_fp",
]

__version__ = "0.1.0"
