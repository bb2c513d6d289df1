"""Exact elimination over Q with sparse Fraction rows."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..errors import DimensionError
from .report import SolveReport


def sparse_rows(M) -> list[dict[int, int]]:
    a = np.asarray(M, dtype=np.int64)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {a.shape}")
    return [{int(j): int(row[j]) for j in np.flatnonzero(row)} for row in a]


class RationalEchelon:
    """Row-echelon basis built by inserting one row at a time.

    Pivot rows are normalised to a leading 1 and are zero left of their
    pivot column; rows are not back-reduced (reduction happens on insert).
    """

    def __init__(self) -> None:
        self.pivots: dict[int, dict[int, Fraction]] = {}

    def reduce(self, row: dict) -> dict[int, Fraction]:
        vec = {j: Fraction(v) for j, v in row.items() if v}
        while vec:
            c = min(vec)
            prow = self.pivots.get(c)
            if prow is None:
                # entries right of c may still hit pivots; leave them, echelon suffices
                return vec
            f = vec[c]
            for j, v in prow.items():
                nv = vec.get(j, 0) - f * v
                if nv:
                    vec[j] = nv
                else:
                    vec.pop(j, None)
        return vec

    def insert(self, row: dict) -> int | None:
        """Add a row; return its new pivot column or None if dependent."""
        vec = self.reduce(row)
        if not vec:
            return None
        c = min(vec)
        lead = vec[c]
        self.pivots[c] = {j: v / lead for j, v in vec.items()}
        return c

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def back_substitute(self, rhs_col: int) -> dict[int, Fraction]:
        """Solution with free variables zero, for pivots left of ``rhs_col``."""
        x: dict[int, Fraction] = {}
        for c in sorted(self.pivots, reverse=True):
            if c >= rhs_col:
                continue
            row = self.pivots[c]
            val = row.get(rhs_col, Fraction(0))
            for j, v in row.items():
                if c < j < rhs_col and j in x:
                    val -= v * x[j]
            if val:
                x[c] = val
        return x


def rank_rational(M) -> int:
    ech = RationalEchelon()
    for row in sparse_rows(M):
        ech.insert(row)
    return ech.rank


def solve_rational(M, D) -> SolveReport:
    rows = sparse_rows(M)
    ncols = np.asarray(M).shape[1]
    d = [int(v) for v in np.asarray(D, dtype=np.int64).reshape(-1)]
    if len(d) != len(rows):
        raise DimensionError(f"D has length {len(d)}, M has {len(rows)} rows")
    ech = RationalEchelon()
    for row, rhs in zip(rows, d):
        if rhs:
            row = {**row, ncols: rhs}
        ech.insert(row)
    r_aug = ech.rank
    rank = sum(1 for c in ech.pivots if c < ncols)
    if rank != r_aug:
        return SolveReport("rational", rank, r_aug, False)
    sol = ech.back_substitute(ncols)
    x = tuple(sol.get(j, Fraction(0)) for j in range(ncols))
    return SolveReport("rational", rank, r_aug, True, x)
