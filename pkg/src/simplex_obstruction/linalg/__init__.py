"""Exact solvability of M x = D over GF(2), GF(p), Q and Z."""

from .fields import is_prime, rank_gf2, rank_gfp, solve_gf2, solve_gfp
from .integer import HermiteLattice, hermite_decomposition, solve_integer
from .rational import rank_rational, solve_rational
from .report import SolveReport, check_witness
from .solve import FIELDS, solve_field, solve_system

__all__ = [
    "FIELDS", "HermiteLattice", "SolveReport", "check_witness", "hermite_decomposition",
    "is_prime", "rank_gf2", "rank_gfp", "rank_rational", "solve_field", "solve_gf2",
    "solve_gfp", "solve_integer", "solve_rational", "solve_system",
]
