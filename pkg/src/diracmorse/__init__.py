"""Bound states of the Dirac equation with a generalized Morse potential.

The spectrum follows from the parametric Nikiforov-Uvarov method after the
Pekeris replacement of the centrifugal term, for position-dependent mass and
for the pseudospin and spin symmetry limits. A Numerov shooting oracle checks
the closed forms on the same equation.
"""

from .eigensolver import SolverConfig, residual, solve_energy
from .morse_model import MorseProblem, xi_parameters
from .wavefunctions import bound_state, normalize

__all__ = ["MorseProblem", "SolverConfig", "bound_state", "normalize", "residual", "solve_energy", "xi_parameters"]
__version__ = "0.1.0"
