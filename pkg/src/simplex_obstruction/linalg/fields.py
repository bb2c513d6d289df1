"""Rank and Rouché–Capelli solving over GF(2) and GF(p)."""

from __future__ import annotations

import numpy as np

from ..errors import DimensionError, ValidationError
from .kernels import gf2_rref, modp_rref, pack_gf2, unpack_gf2
from .report import SolveReport


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def _as_matrix(M) -> np.ndarray:
    a = np.asarray(M, dtype=np.int64)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {a.shape}")
    return a


def _augment(M, D) -> np.ndarray:
    a = _as_matrix(M)
    d = np.asarray(D, dtype=np.int64).reshape(-1)
    if d.shape[0] != a.shape[0]:
        raise DimensionError(f"D has length {d.shape[0]}, M has {a.shape[0]} rows")
    return np.hstack([a, d[:, None]])


def rank_gf2(M, backend: str | None = None) -> int:
    """Rank of M mod 2 by bit-packed elimination."""
    a = _as_matrix(M)
    if a.size == 0:
        return 0
    r, _ = gf2_rref(pack_gf2(a), a.shape[1], backend)
    return r


def _check_p(p: int) -> int:
    p = int(p)
    if not is_prime(p):
        raise ValidationError(f"p={p} is not prime")
    if p >= 2 ** 31:
        raise ValidationError(f"p={p} too large for the int64 kernel")
    return p


def rank_gfp(M, p: int, backend: str | None = None) -> int:
    """Rank of M over GF(p)."""
    p = _check_p(p)
    a = _as_matrix(M)
    if a.size == 0:
        return 0
    r, _ = modp_rref(np.ascontiguousarray(a % p), p, backend)
    return r


def solve_gf2(M, D, backend: str | None = None) -> SolveReport:
    aug = _augment(M, D)
    ncols = aug.shape[1] - 1
    if aug.shape[0] == 0:
        return SolveReport("gf2", 0, 0, True, (0,) * ncols)
    words = pack_gf2(aug)
    r_aug, piv = gf2_rref(words, ncols + 1, backend)
    rank = int(np.count_nonzero(piv < ncols))
    if rank != r_aug:
        return SolveReport("gf2", rank, r_aug, False)
    bits = unpack_gf2(words[:rank], ncols + 1)
    x = [0] * ncols
    for i, c in enumerate(piv):
        x[int(c)] = int(bits[i, ncols])
    return SolveReport("gf2", rank, r_aug, True, tuple(x))


def solve_gfp(M, D, p: int, backend: str | None = None) -> SolveReport:
    p = _check_p(p)
    if p == 2:
        rep = solve_gf2(M, D, backend)
        return SolveReport("gfp", rep.rank, rep.rank_augmented, rep.solvable, rep.witness, p)
    aug = _augment(M, D)
    ncols = aug.shape[1] - 1
    if aug.shape[0] == 0:
        return SolveReport("gfp", 0, 0, True, (0,) * ncols, p)
    a = np.ascontiguousarray(aug % p)
    r_aug, piv = modp_rref(a, p, backend)
    rank = int(np.count_nonzero(piv < ncols))
    if rank != r_aug:
        return SolveReport("gfp", rank, r_aug, False, None, p)
    x = [0] * ncols
    for i, c in enumerate(piv):
        x[int(c)] = int(a[i, ncols])
    return SolveReport("gfp", rank, r_aug, True, tuple(x), p)
