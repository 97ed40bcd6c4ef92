"""Walk matrices, hitting matrices, and resistor-network response matrices
of directed weighted networks, with loop-erased-walk determinant oracles,
Monte Carlo estimators, and closed-form continuum kernels."""

from .matrix import ScalarMatrix, det, inverse, schur_complement, submatrix
from .network import DirectedNetwork, Edge, Walk, loop_erase, walk_weight
from .resistor import ConductivityNetwork
from .series import TruncatedSeries
from .walkmat import (
    hitting_matrix,
    le_constrained_sum,
    minor_via_walk_det,
    walk_matrix,
)

__all__ = [
    "ConductivityNetwork",
    "DirectedNetwork",
    "Edge",
    "ScalarMatrix",
    "TruncatedSeries",
    "Walk",
    "det",
    "hitting_matrix",
    "inverse",
    "le_constrained_sum",
    "loop_erase",
    "minor_via_walk_det",
    "schur_complement",
    "submatrix",
    "walk_matrix",
    "walk_weight",
]
__version__ = "0.1.0"
