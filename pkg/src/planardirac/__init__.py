"""Toolkit for the planar (2+1-dimensional) Dirac equation.

Three pillars:

* exact 2x2 matrix algebra that proves or refutes the structural claims
  (Clifford relations, absence of a chirality operator, nonequivalence of
  the two gamma-matrix representations);
* grid operators that quantify the operator-ordering defect separating the
  mass-weighted quadratic Dirac equation from the naive factor product;
* two independent bound-state routes (radial shooting and a 2-D grid
  eigensolver) that must agree on spectra.
"""

from .exact import (
    ExactComplex,
    Mat2,
    Representation,
    REP_MINUS,
    REP_PLUS,
    anticommutant,
    anticommutator,
    commutator,
    decompose,
    gamma,
    pauli,
)
from .potentials import (
    Constant,
    Coulomb,
    Linear,
    LinearX,
    Oscillator,
    PotentialConfig,
    Tabulated,
    free_config,
    oscillator_config,
)
from .grids import GridSpec, ScalarField, SpinorField

__version__ = "0.1.0"

__all__ = [
    "ExactComplex",
    "Mat2",
    "Representation",
    "REP_PLUS",
    "REP_MINUS",
    "pauli",
    "gamma",
    "decompose",
    "commutator",
    "anticommutator",
    "anticommutant",
    "GridSpec",
    "ScalarField",
    "SpinorField",
    "PotentialConfig",
    "Constant",
    "Linear",
    "LinearX",
    "Oscillator",
    "Coulomb",
    "Tabulated",
    "free_config",
    "oscillator_config",
    "__version__",
]
