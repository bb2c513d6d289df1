"""Integer solvability of M x = D through a Hermite normal form.

Work is done on the columns of M, i.e. on the rows of Mᵀ: a unimodular U
with U·Mᵀ = H (H in row Hermite form, zero rows last) is built by inserting
columns one at a time.  D lies in the column lattice of M iff Dᵀ reduces to
zero against H with exact quotients; the quotients times U give x.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..errors import DimensionError
from .report import SolveReport


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with s·a + t·b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def _axpy(y: dict, f: int, x: dict) -> dict:
    """y + f·x on sparse int vectors (new dict)."""
    out = dict(y)
    for j, v in x.items():
        nv = out.get(j, 0) + f * v
        if nv:
            out[j] = nv
        else:
            out.pop(j, None)
    return out


def _lincomb(a: int, x: dict, b: int, y: dict) -> dict:
    out = {}
    for j in x.keys() | y.keys():
        v = a * x.get(j, 0) + b * y.get(j, 0)
        if v:
            out[j] = v
    return out


class HermiteLattice:
    """Integer row lattice in echelon form, with the transformation tracked.

    Each basis row h is stored with ``combo`` such that h = Σ combo[i]·v_i over
    the inserted vectors v_i; vectors that reduce to zero leave their combo in
    ``relations``.
    """

    def __init__(self) -> None:
        self.pivots: dict[int, tuple[dict, dict]] = {}
        self.relations: list[dict] = []
        self.count = 0

    def insert(self, vec: dict) -> None:
        combo = {self.count: 1}
        self.count += 1
        vec = {j: int(v) for j, v in vec.items() if v}
        while vec:
            c = min(vec)
            entry = self.pivots.get(c)
            if entry is None:
                if vec[c] < 0:
                    vec = {j: -v for j, v in vec.items()}
                    combo = {j: -v for j, v in combo.items()}
                self.pivots[c] = (vec, combo)
                return
            prow, pcombo = entry
            a, b = prow[c], vec[c]
            if b % a == 0:
                q = b // a
                vec = _axpy(vec, -q, prow)
                combo = _axpy(combo, -q, pcombo)
                continue
            g, s, t = xgcd(a, b)
            # [[s, t], [-b/g, a/g]] has determinant 1
            self.pivots[c] = (_lincomb(s, prow, t, vec), _lincomb(s, pcombo, t, combo))
            vec, combo = (_lincomb(a // g, vec, -(b // g), prow),
                          _lincomb(a // g, combo, -(b // g), pcombo))
        self.relations.append(combo)

    def normalize(self) -> None:
        """Reduce entries above each pivot into [0, pivot)."""
        cols = sorted(self.pivots)
        for k, c in enumerate(cols):
            prow, pcombo = self.pivots[c]
            a = prow[c]
            for c0 in cols[:k]:
                row, combo = self.pivots[c0]
                q = row.get(c, 0) // a
                if q:
                    self.pivots[c0] = (_axpy(row, -q, prow), _axpy(combo, -q, pcombo))

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def express(self, target: dict):
        """Try to write target as an integer combination of the basis.

        Returns (in_lattice, in_span, coeffs over inserted vectors).
        """
        vec = {j: Fraction(v) for j, v in target.items() if v}
        integral = True
        coeffs: dict = {}
        while vec:
            c = min(vec)
            entry = self.pivots.get(c)
            if entry is None:
                return False, False, None
            prow, pcombo = entry
            q = vec[c] / prow[c]
            if q.denominator != 1:
                integral = False
            for j, v in prow.items():
                nv = vec.get(j, 0) - q * v
                if nv:
                    vec[j] = nv
                else:
                    vec.pop(j, None)
            if integral:
                coeffs = _axpy(coeffs, int(q), pcombo)
        return integral, True, (coeffs if integral else None)


def _columns(M) -> tuple[np.ndarray, list[dict]]:
    a = np.asarray(M, dtype=np.int64)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {a.shape}")
    cols = [{int(i): int(a[i, j]) for i in np.flatnonzero(a[:, j])} for j in range(a.shape[1])]
    return a, cols


def hermite_decomposition(M):
    """Return (U, H) as Python-int nested lists with U·Mᵀ = H.

    H is in row Hermite normal form (positive pivots, entries above a pivot in
    [0, pivot), zero rows at the bottom); U is unimodular.  Intended for
    small matrices: both outputs are dense.
    """
    a, cols = _columns(M)
    lat = HermiteLattice()
    for col in cols:
        lat.insert(col)
    lat.normalize()
    ncols = a.shape[1]
    width = a.shape[0]
    U, H = [], []
    for c in sorted(lat.pivots):
        prow, pcombo = lat.pivots[c]
        H.append([prow.get(j, 0) for j in range(width)])
        U.append([pcombo.get(j, 0) for j in range(ncols)])
    for rel in lat.relations:
        H.append([0] * width)
        U.append([rel.get(j, 0) for j in range(ncols)])
    return U, H


def solve_integer(M, D) -> SolveReport:
    """Decide existence of x ∈ Z^cols with M x = D; witness when it exists."""
    a, cols = _columns(M)
    d = [int(v) for v in np.asarray(D, dtype=np.int64).reshape(-1)]
    if len(d) != a.shape[0]:
        raise DimensionError(f"D has length {len(d)}, M has {a.shape[0]} rows")
    lat = HermiteLattice()
    for col in cols:
        lat.insert(col)
    target = {i: v for i, v in enumerate(d) if v}
    in_lattice, in_span, coeffs = lat.express(target)
    rank = lat.rank
    r_aug = rank if in_span else rank + 1
    if not in_lattice:
        return SolveReport("integer", rank, r_aug, False)
    x = tuple(int(coeffs.get(j, 0)) for j in range(a.shape[1]))
    return SolveReport("integer", rank, r_aug, True, x)
