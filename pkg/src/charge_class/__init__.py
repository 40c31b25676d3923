"""Simulation and verification lab for coupled 1+1D spinor/potential systems.

Exact-characteristic lattice evolution, closed-form and cone-integral
oracles, a fixed-point solver, and the below-charge blow-up experiment.
"""

__version__ = "0.1.0"

from .core import (
    CauchyData,
    Grid1D,
    NormReport,
    NumericalError,
    PotentialState,
    SpinorSlice,
    SystemSpec,
    charge,
    make_grid,
    norms,
    system_preset,
)
from .evolve import SolutionTrace, evolve
from .massless import MasslessSolution, lower_bound_A_minus
from .picard import existence_time, picard_iterate

__all__ = [
    "CauchyData",
    "Grid1D",
    "MasslessSolution",
    "NormReport",
    "NumericalError",
    "PotentialState",
    "SolutionTrace",
    "SpinorSlice",
    "SystemSpec",
    "charge",
    "evolve",
    "existence_time",
    "lower_bound_A_minus",
    "make_grid",
    "norms",
    "picard_iterate",
    "system_preset",
    "__version__",
]
