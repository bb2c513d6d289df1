"""Row-reduction kernels over GF(2) (bit-packed) and GF(p).

Each kernel exists twice: a numba loop and a vectorised numpy version.  Both
follow the same pivoting rule (lowest column first, first non-zero row at or
below the current rank in scan order) and therefore return identical RREFs.
"""

from __future__ import annotations

import numpy as np

from .._jit import default_backend, njit
from ..errors import ValidationError

WORD = 64


def pack_gf2(a: np.ndarray) -> np.ndarray:
    """Pack the parity of an integer matrix into uint64 words, bit c%64 of word c//64."""
    a = np.asarray(a)
    nrows, ncols = a.shape
    nwords = max(1, (ncols + WORD - 1) // WORD)
    bits = np.zeros((nrows, nwords * WORD), dtype=np.uint8)
    bits[:, :ncols] = (a % 2 != 0)
    packed = np.packbits(bits, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view(np.uint64).reshape(nrows, nwords).copy()


def unpack_gf2(words: np.ndarray, ncols: int) -> np.ndarray:
    bits = np.unpackbits(np.ascontiguousarray(words).view(np.uint8), axis=1, bitorder="little")
    return bits[:, :ncols].astype(np.int64)


@njit(cache=True)
def _gf2_rref_numba(a, ncols):
    nrows, nwords = a.shape
    pivots = np.empty(min(nrows, ncols), dtype=np.int64)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        w = c >> 6
        bit = np.uint64(1) << np.uint64(c & 63)
        p = -1
        for i in range(r, nrows):
            if a[i, w] & bit:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            for k in range(nwords):
                tmp = a[r, k]
                a[r, k] = a[p, k]
                a[p, k] = tmp
        for i in range(nrows):
            if i != r and (a[i, w] & bit):
                for k in range(w, nwords):
                    a[i, k] ^= a[r, k]
        pivots[r] = c
        r += 1
    return r, pivots


def _gf2_rref_numpy(a, ncols):
    nrows = a.shape[0]
    pivots = np.empty(min(nrows, ncols), dtype=np.int64)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        w = c >> 6
        bit = np.uint64(1) << np.uint64(c & 63)
        hits = np.flatnonzero(a[r:, w] & bit)
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        mask = (a[:, w] & bit) != 0
        mask[r] = False
        # rows left of word w are zero in the pivot row
        a[mask, w:] ^= a[r, w:]
        pivots[r] = c
        r += 1
    return r, pivots


def gf2_rref(words: np.ndarray, ncols: int, backend: str | None = None):
    """Reduce packed rows in place; return (rank, pivot columns)."""
    backend = backend or default_backend()
    if backend == "numba":
        r, piv = _gf2_rref_numba(words, ncols)
    elif backend == "numpy":
        r, piv = _gf2_rref_numpy(words, ncols)
    else:
        raise ValidationError(f"unknown backend {backend!r}")
    return int(r), piv[:r].copy()


@njit(cache=True)
def _inv_mod(a, p):
    # extended Euclid; a is a unit mod p
    t, newt = 0, 1
    r, newr = p, a % p
    while newr != 0:
        q = r // newr
        t, newt = newt, t - q * newt
        r, newr = newr, r - q * newr
    return t % p


@njit(cache=True)
def _modp_rref_numba(a, p):
    nrows, ncols = a.shape
    pivots = np.empty(min(nrows, ncols), dtype=np.int64)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for k in range(ncols):
                tmp = a[r, k]
                a[r, k] = a[piv, k]
                a[piv, k] = tmp
        inv = _inv_mod(a[r, c], p)
        for k in range(c, ncols):
            a[r, k] = (a[r, k] * inv) % p
        for i in range(nrows):
            f = a[i, c]
            if i != r and f != 0:
                for k in range(c, ncols):
                    a[i, k] = (a[i, k] - f * a[r, k]) % p
        pivots[r] = c
        r += 1
    return r, pivots


def _modp_rref_numpy(a, p):
    nrows, ncols = a.shape
    pivots = np.empty(min(nrows, ncols), dtype=np.int64)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        hits = np.flatnonzero(a[r:, c])
        if hits.size == 0:
            continue
        piv = r + int(hits[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r, c:] = (a[r, c:] * inv) % p
        mask = a[:, c] != 0
        mask[r] = False
        if mask.any():
            f = a[mask, c][:, None]
            a[mask, c:] = (a[mask, c:] - f * a[r, c:]) % p
        pivots[r] = c
        r += 1
    return r, pivots


def modp_rref(a: np.ndarray, p: int, backend: str | None = None):
    """Reduce an int64 matrix with entries in [0, p) in place to RREF mod p.

    p must be below 2**31 so products stay inside int64.
    """
    backend = backend or default_backend()
    if backend == "numba":
        r, piv = _modp_rref_numba(a, np.int64(p))
    elif backend == "numpy":
        r, piv = _modp_rref_numpy(a, p)
    else:
        raise ValidationError(f"unknown backend {backend!r}")
    return int(r), piv[:r].copy()
