"""Tight-binding edge states of generalized honeycomb interfaces.

Library layout:

- :mod:`edgelab.lattice` -- six-site cell geometry and interface frames
- :mod:`edgelab.hamiltonian` -- hopping profiles, Bloch-reduced chain operators
- :mod:`edgelab.transfer` -- propagation matrices and exact zero modes
- :mod:`edgelab.spectrum` -- supercell spectra, filtering, crossing slopes
- :mod:`edgelab.bulk` -- 2D bulk bands, double Dirac point, band inversion
- :mod:`edgelab.dynamics` -- wavepacket evolution on finite 2D domains
- :mod:`edgelab.cli` -- command-line front end
"""

from .errors import (
    ConfigError,
    DegenerateGapless,
    EdgelabError,
    NoMidGapState,
    NotAZeroMode,
    NotConical,
    StepTooLarge,
)
from .hamiltonian import BlochOperator, CoefficientRow, HoppingProfile
from .lattice import InterfaceKind, SiteIndex

__all__ = [
    "BlochOperator",
    "CoefficientRow",
    "ConfigError",
    "DegenerateGapless",
    "EdgelabError",
    "HoppingProfile",
    "InterfaceKind",
    "NoMidGapState",
    "NotAZeroMode",
    "NotConical",
    "SiteIndex",
    "StepTooLarge",
]

__version__ = "0.1.0"
