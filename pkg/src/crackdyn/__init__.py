"""Natural frequencies and transient dynamics of cracked beams and shallow arches."""

from .crack_physics import (CrackKind, CrackSpec, NondimModel, NondimSummary, PhysicalBeam,
                            flexibility_double_sided, flexibility_single_sided,
                            natural_frequencies, nondimensionalize)
from .dynamics import LoadModel, ModelKind, SimConfig, Trajectory, simulate, step_rk4
from .errors import EigenSolveError, InstabilityError, NumericalError, RootSearchError
from .modal_algebra import EnergyReport, State, energies
from .modal_solver import Eigenpair, ModalBasis, find_eigenvalues, modal_basis

__version__ = "0.1.0"
