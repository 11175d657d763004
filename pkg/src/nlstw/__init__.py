"""Traveling-wave candidates for nonlinear Schrodinger equations with
nonzero conditions at infinity: functionals, momentum, vortex-ring ansatz,
Pohozaev-constrained minimization and the regularization audit."""

from .ansatz import AnsatzSpec, vortex_field
from .functionals import ChiCutoff, FunctionalReport, report
from .grid import ComplexField, DilationSpec, Grid
from .kernels import BACKEND
from .nonlinearity import (CubicQuintic, CutoffPhi, GrossPitaevskii,
                           NonlinearityModel, Tabulated, derived_constants)
from .variational import (MinimizeConfig, MinimizeTrace, el_gradient,
                          minimize, pohozaev_residuals, project_sigma)

__version__ = "0.1.0"

__all__ = [
    "AnsatzSpec", "BACKEND", "ChiCutoff", "ComplexField", "CubicQuintic",
    "CutoffPhi", "DilationSpec", "FunctionalReport", "Grid",
    "GrossPitaevskii", "MinimizeConfig", "MinimizeTrace",
    "NonlinearityModel", "Tabulated", "derived_constants", "el_gradient",
    "minimize", "pohozaev_residuals", "project_sigma", "report",
    "vortex_field",
]
