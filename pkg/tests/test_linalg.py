import itertools
from fractions import Fraction
from math import gcd

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from simplex_obstruction._jit import HAVE_NUMBA
from simplex_obstruction.errors import DimensionError, ValidationError
from simplex_obstruction.linalg import (SolveReport, check_witness, hermite_decomposition,
                                        is_prime, rank_gf2, rank_gfp, rank_rational, solve_field,
                                        solve_integer, solve_rational)
from simplex_obstruction.linalg.integer import xgcd
from simplex_obstruction.linalg.kernels import gf2_rref, modp_rref, pack_gf2, unpack_gf2


def rank_mod_oracle(M, p):
    """Textbook elimination on Python lists; independent of the kernels."""
    rows = [[int(v) % p for v in r] for r in np.asarray(M).tolist()]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        rows[rank] = [v * inv % p for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def integer_solvable_oracle(M, D):
    """Determinantal-divisor criterion: M x = D has an integer solution iff
    rank M = rank (M|D) = r and the gcd of the r×r minors agrees."""
    A = sympy.Matrix(M)
    Aug = A.row_join(sympy.Matrix(D))
    r = A.rank()
    if Aug.rank() != r:
        return False
    if r == 0:
        return True

    def dr(X):
        g = 0
        for rs in itertools.combinations(range(X.rows), r):
            for cs in itertools.combinations(range(X.cols), r):
                g = gcd(g, int(X.extract(list(rs), list(cs)).det()))
        return g

    return dr(A) == dr(Aug)


small_int_mats = st.tuples(st.integers(1, 4), st.integers(1, 4)).flatmap(
    lambda s: arrays(np.int64, s, elements=st.integers(-3, 3)))


# --- GF(2) / GF(p) ----------------------------------------------------------

def test_rank_trivial():
    assert rank_gf2(np.zeros((5, 7), int)) == 0
    assert rank_gf2(np.eye(9, dtype=int)) == 9
    for p in (3, 5, 101):
        assert rank_gfp(np.eye(6, dtype=int), p) == 6
    assert rank_gf2(np.diag([2, 2])) == 0
    assert rank_gfp(np.diag([2, 2]), 3) == 2
    assert rank_gfp(np.diag([2]), 2) == 0 and rank_gfp(np.diag([2]), 3) == 1


def test_rank_gfp_rejects_composite():
    with pytest.raises(ValidationError):
        rank_gfp(np.eye(2, dtype=int), 9)
    with pytest.raises(ValidationError):
        rank_gfp(np.eye(2, dtype=int), 1)
    assert [q for q in range(30) if is_prime(q)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


@pytest.mark.parametrize("seed", range(10))
def test_rank_gf2_vs_modp_kernel(seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(-1, 2, size=(50, 50))
    if seed % 2:
        a[:, 25:] = a[:, :25] @ rng.integers(0, 2, size=(25, 25)) % 2  # force deficiency
    r = rank_gf2(a)
    assert r == rank_gfp(a, 2) == rank_mod_oracle(a, 2)


@given(small_int_mats, st.sampled_from([2, 3, 5, 7]))
def test_rank_vs_oracle(a, p):
    assert rank_gfp(a, p) == rank_mod_oracle(a, p)
    if p == 2:
        assert rank_gf2(a) == rank_mod_oracle(a, 2)


def test_pack_roundtrip():
    rng = np.random.default_rng(0)
    a = rng.integers(0, 2, size=(7, 130))
    assert np.array_equal(unpack_gf2(pack_gf2(a), 130), a)


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")
@pytest.mark.parametrize("seed", range(4))
def test_backends_agree(seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(-1, 2, size=(60, 140))
    w1, w2 = pack_gf2(a), pack_gf2(a)
    r1, p1 = gf2_rref(w1, 140, "numba")
    r2, p2 = gf2_rref(w2, 140, "numpy")
    assert r1 == r2 and np.array_equal(p1, p2) and np.array_equal(w1, w2)
    b1, b2 = (a % 7).copy(), (a % 7).copy()
    r1, p1 = modp_rref(b1, 7, "numba")
    r2, p2 = modp_rref(b2, 7, "numpy")
    assert r1 == r2 and np.array_equal(p1, p2) and np.array_equal(b1, b2)


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")
def test_backends_agree_n4(dense4):
    assert rank_gf2(dense4, "numba") == rank_gf2(dense4, "numpy") == 462
    assert rank_gfp(dense4, 5, "numba") == rank_gfp(dense4, 5, "numpy") == 463


def test_unknown_backend():
    with pytest.raises(ValidationError):
        rank_gf2(np.eye(2, dtype=int), "cuda")


# --- field solves -------------------------------------------------------------

@given(small_int_mats, st.data())
@settings(max_examples=60)
def test_rouche_capelli_all_fields(a, data):
    d = data.draw(arrays(np.int64, a.shape[0], elements=st.integers(-3, 3)))
    for field, p in (("gf2", None), ("gfp", 3), ("gfp", 5), ("rational", None)):
        rep = solve_field(a, d, field, p)
        assert rep.solvable == (rep.rank == rep.rank_augmented)
        modulus = {"gf2": 2, "gfp": p}.get(field)
        oracle_p = modulus
        if oracle_p:
            assert rep.rank == rank_mod_oracle(a, oracle_p)
            aug = np.hstack([a, d[:, None]])
            assert rep.rank_augmented == rank_mod_oracle(aug, oracle_p)
        else:
            assert rep.rank == sympy.Matrix(a).rank()
        if rep.solvable:
            assert check_witness(a, d.tolist(), list(rep.witness), modulus)
        else:
            assert rep.witness is None


@given(small_int_mats, st.data())
@settings(max_examples=60, deadline=None)
def test_integer_vs_determinantal_divisors(a, data):
    d = data.draw(arrays(np.int64, a.shape[0], elements=st.integers(-4, 4)))
    rep = solve_integer(a, d)
    assert rep.solvable == integer_solvable_oracle(a.tolist(), d.tolist())
    if rep.solvable:
        assert all(isinstance(v, int) for v in rep.witness)
        assert check_witness(a, d.tolist(), list(rep.witness))
    assert rep.rank == sympy.Matrix(a).rank()


def test_parity_example():
    assert not solve_integer([[2]], [1]).solvable
    rat = solve_rational([[2]], [1])
    assert rat.solvable and rat.witness == (Fraction(1, 2),)
    assert not solve_field([[2]], [1], "gf2").solvable


def test_empty_system():
    for field, p in (("gf2", None), ("gfp", 3), ("rational", None), ("integer", None)):
        rep = solve_field(np.zeros((0, 3), dtype=int), [], field, p)
        assert rep.solvable and rep.rank == 0
        assert list(rep.witness) == [0, 0, 0]


def test_dimension_mismatch():
    for field, p in (("gf2", None), ("gfp", 3), ("rational", None), ("integer", None)):
        with pytest.raises(DimensionError):
            solve_field(np.eye(3, dtype=int), [1, 2], field, p)


def test_field_and_p_validation():
    with pytest.raises(ValidationError):
        solve_field(np.eye(2, dtype=int), [1, 1], "gfp")
    with pytest.raises(ValidationError):
        solve_field(np.eye(2, dtype=int), [1, 1], "gf2", 3)
    with pytest.raises(ValidationError):
        solve_field(np.eye(2, dtype=int), [1, 1], "reals")


def test_xgcd():
    for a, b in itertools.product(range(-12, 13), repeat=2):
        g, s, t = xgcd(a, b)
        assert g == gcd(a, b) and s * a + t * b == g


@pytest.mark.parametrize("seed", range(8))
def test_hermite_unimodular(seed):
    rng = np.random.default_rng(seed)
    r, c = rng.integers(2, 6), rng.integers(2, 6)
    m = rng.integers(-4, 5, size=(r, c))
    if seed % 3 == 0:
        m[-1] = m[0] + m[1]
    U, H = hermite_decomposition(m)
    U_s = sympy.Matrix(U)
    assert U_s.shape == (c, c)
    assert U_s.det() in (1, -1)
    assert U_s * sympy.Matrix(m).T == sympy.Matrix(H)
    # echelon shape: pivot positions strictly increase, positive pivots, reduced above
    pivots = []
    for row in H:
        nz = [j for j, v in enumerate(row) if v]
        if nz:
            pivots.append(nz[0])
            assert row[nz[0]] > 0
    assert pivots == sorted(set(pivots))
    for k, pc in enumerate(pivots):
        for above in H[:k]:
            assert 0 <= above[pc] < H[k][pc]


def test_rational_rank_vs_sympy():
    rng = np.random.default_rng(11)
    for _ in range(20):
        m = rng.integers(-2, 3, size=(6, 5))
        m[:, 4] = m[:, 0] - 2 * m[:, 1]
        assert rank_rational(m) == sympy.Matrix(m).rank()


def test_report_json_roundtrip():
    rep = SolveReport("rational", 2, 2, True, (Fraction(3, 2), Fraction(-1)))
    doc = rep.to_json()
    assert doc["witness"] == ["3/2", "-1"]
    assert SolveReport.from_json(doc) == rep
    rep = SolveReport("gfp", 1, 2, False, None, 7)
    assert rep.to_json() == {"field": "gfp", "p": 7, "rank": 1, "rank_augmented": 2,
                             "solvable": False}
    assert SolveReport.from_json(rep.to_json()) == rep
    irep = SolveReport("integer", 1, 1, True, (2, -3))
    assert SolveReport.from_json(irep.to_json()) == irep


# --- the obstruction systems -------------------------------------------------------

def test_n3_all_fields(system3):
    M, D = system3.dense(), system3.D.tolist()
    for field, p in (("gf2", None), ("gfp", 3), ("rational", None), ("integer", None)):
        rep = solve_field(M, D, field, p)
        assert rep.solvable and rep.rank == 10
        assert check_witness(M, D, list(rep.witness), {"gf2": 2, "gfp": 3}.get(field))


def test_n4_gf2(dense4, system4):
    rep = solve_field(dense4, system4.D, "gf2")
    assert (rep.rank, rep.rank_augmented, rep.solvable) == (462, 463, False)


def test_n4_integer_unsolvable(dense4, system4):
    rep = solve_integer(dense4, system4.D)
    assert not rep.solvable and rep.witness is None
    assert rep.rank == rep.rank_augmented == 463
