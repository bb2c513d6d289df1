import json
from fractions import Fraction

import numpy as np
import pytest

from simplex_obstruction.errors import SizeLimitError, ValidationError
from simplex_obstruction.linalg import solve_field
from simplex_obstruction.obstruction import (MM_HEADER, build_delta, build_matrix, export_system,
                                             load_system, read_matrix_market)
from simplex_obstruction.skeleton import build_index, simplex_partition


def reference_matrix(n):
    """Dense M straight from the entry rule, looping over all (row, column) pairs."""
    rows = build_index(n, 2)
    cols = build_index(n, 1)
    out = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for r, (face, block) in enumerate(rows):
        g0, g1, g2 = face.vertices
        sign = {(g0, g1): 1, (g1, g2): 1, (g0, g2): -1}
        bset = set(block)
        for c, (edge, sub) in enumerate(cols):
            s = sign.get(edge.vertices)
            if s is not None and set(sub) <= bset:
                out[r, c] = s
    return out


def test_delta_examples(system2):
    assert system2.delta() == [Fraction(1, 2)]
    d = build_delta(build_index(4, 1))
    for (_, block), v in zip(build_index(4, 1), d):
        assert Fraction(int(v), 2) == Fraction(1 + (-1) ** len(block), 4)
    with pytest.raises(ValidationError):
        build_delta(build_index(3, 2))


def test_n2_empty(system2):
    assert system2.shape == (0, 1)
    assert system2.nnz == 0
    assert system2.D.size == 0


def test_size_guard():
    with pytest.raises(SizeLimitError):
        build_matrix(1)
    with pytest.raises(SizeLimitError):
        build_matrix(6)


def test_n3_matches_reference(system3):
    ref = reference_matrix(3)
    assert system3.shape == (20, 24)
    assert np.array_equal(system3.dense(), ref)
    assert system3.nnz == int(np.count_nonzero(ref))


def test_n4_matches_reference(dense4):
    ref = reference_matrix(4)
    assert dense4.shape == (2416, 552)
    assert np.array_equal(dense4, ref)


def test_n4_support_structure(system4, dense4):
    assert set(np.unique(dense4).tolist()) <= {-1, 0, 1}
    cols = system4.col_index
    for r, (face, block) in enumerate(system4.row_index):
        expected = sum(sum(1 for b in simplex_partition(e).blocks if set(b) <= set(block))
                       for e in face.edges())
        assert np.count_nonzero(dense4[r]) == expected
        # the (g0, g1) edge contributes +1 per contained sub-block
        first = face.edges()[0]
        idx = [cols.index(first, b) for b in simplex_partition(first).blocks if set(b) <= set(block)]
        assert dense4[r, idx].sum() == len(idx)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_delta_solves_exactly(n, system2, system3, system4):
    system = {2: system2, 3: system3, 4: system4}[n]
    assert system.D.dtype.kind == "i"
    assert system.matvec(system.delta()) == system.D.tolist()


def test_export_n2_header(system2, tmp_path):
    paths = export_system(system2, tmp_path)
    lines = paths["M.mtx"].read_text().splitlines()
    assert lines[0] == MM_HEADER
    size = [l for l in lines if not l.startswith("%")][0]
    assert size.split() == ["0", "1", "0"]
    for name in ("delta.json", "D.json", "indices.json"):
        doc = json.loads(paths[name].read_text())
        assert doc["n"] == 2 and doc["format_version"] == 1


def test_export_n3_nnz_recount(system3, tmp_path):
    export_system(system3, tmp_path)
    shape, rows, cols, vals, _ = read_matrix_market(tmp_path / "M.mtx")
    assert shape == (20, 24)
    assert len(vals) == int(np.count_nonzero(reference_matrix(3)))


def test_roundtrip_n4(system4, tmp_path):
    export_system(system4, tmp_path)
    again = load_system(tmp_path)
    assert again.same_structure(system4)


def test_export_unwritable(system2, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError, match=str(blocker)):
        export_system(system2, blocker / "sub")


def test_load_rejects_bad_version(system2, tmp_path):
    export_system(system2, tmp_path)
    doc = json.loads((tmp_path / "D.json").read_text())
    doc["format_version"] = 99
    (tmp_path / "D.json").write_text(json.dumps(doc))
    with pytest.raises(ValidationError):
        load_system(tmp_path)


@pytest.mark.parametrize("field,p", [("gf2", None), ("gfp", 3), ("rational", None),
                                     ("integer", None)])
def test_orientation_flip_n3(system3, field, p):
    M = system3.dense()
    D = system3.D.tolist()
    a = solve_field(M, D, field, p)
    b = solve_field(-M, D, field, p)
    assert a.solvable == b.solvable
    assert a.rank == b.rank
