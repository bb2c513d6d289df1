"""Reconstruction of the obstruction to admissible maps on the 2-skeleton of
the S_n-simplex, plus the piecewise-equivalent systems built from it."""

__version__ = "0.1.0"

from .perm import (Partition, Permutation, compose, enumerate_sn, inverse, join,
                   orbit_partition, refines, sign)
from .skeleton import CellIndex, Subsimplex, build_index, enumerate_cells, simplex_partition
from .obstruction import ObstructionSystem, build_delta, build_matrix, export_system, load_system

__all__ = [
    "CellIndex", "ObstructionSystem", "Partition", "Permutation", "Subsimplex",
    "build_delta", "build_index", "build_matrix", "compose", "enumerate_cells",
    "enumerate_sn", "export_system", "inverse", "join", "load_system", "orbit_partition",
    "refines", "sign", "simplex_partition",
]
