"""The integer system M x = D whose integer solvability decides whether an
admissible map on the 1-skeleton extends over the 2-skeleton.

Rows are indexed by R = {(face, B)}, columns by C = {(edge, B')}.  For a face
g0 < g1 < g2 and a block B of its partition, the row has +1 on every sub-block
B' ⊆ B of the edges (g0,g1) and (g1,g2), and -1 on those of (g0,g2).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ConstructionError, DimensionError, SizeLimitError, ValidationError
from .perm import Permutation
from .skeleton import CellIndex, build_index, simplex_partition

FORMAT_VERSION = 1
MM_HEADER = "%%MatrixMarket matrix coordinate integer general"
# dense materialisation guard: ~16M cells
MAX_DENSE_CELLS = 1 << 24


@dataclass(frozen=True, eq=False)
class ObstructionSystem:
    """M (COO triplets), δ_n (numerators over 2) and D = M δ_n."""

    n: int
    col_index: CellIndex
    row_index: CellIndex
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray
    delta_num: np.ndarray
    D: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_index), len(self.col_index)

    @property
    def nnz(self) -> int:
        return int(self.vals.size)

    def dense(self) -> np.ndarray:
        """M as a dense int64 array."""
        r, c = self.shape
        if r * c > MAX_DENSE_CELLS:
            raise SizeLimitError(f"dense M would have {r * c} cells")
        m = np.zeros((r, c), dtype=np.int64)
        m[self.rows, self.cols] = self.vals
        return m

    def delta(self) -> list[Fraction]:
        return [Fraction(int(v), 2) for v in self.delta_num]

    def matvec(self, x) -> list:
        """Exact M·x for a vector of ints or Fractions."""
        if len(x) != self.shape[1]:
            raise DimensionError(f"vector of length {len(x)}, expected {self.shape[1]}")
        out = [0] * self.shape[0]
        for r, c, v in zip(self.rows.tolist(), self.cols.tolist(), self.vals.tolist()):
            out[r] += v * x[c]
        return out

    def same_structure(self, other: "ObstructionSystem") -> bool:
        return (self.n == other.n
                and self.col_index == other.col_index
                and self.row_index == other.row_index
                and np.array_equal(self.dense_key(), other.dense_key())
                and np.array_equal(self.delta_num, other.delta_num)
                and np.array_equal(self.D, other.D))

    def dense_key(self) -> np.ndarray:
        order = np.lexsort((self.cols, self.rows))
        return np.stack([self.rows[order], self.cols[order], self.vals[order]])


def build_delta(col_index: CellIndex) -> np.ndarray:
    """Numerators of δ_n over denominator 2: 1 for even blocks, 0 for odd."""
    if col_index.dim != 1:
        raise ValidationError("δ is indexed by edge blocks (dim 1)")
    return np.fromiter((1 if len(b) % 2 == 0 else 0 for _, b in col_index),
                       dtype=np.int64, count=len(col_index))


def build_matrix(n: int, order: Sequence[Permutation] | None = None) -> ObstructionSystem:
    """Assemble M, δ_n and D for S_n (2 <= n <= 5) under the given total order."""
    if not 2 <= n <= 5:
        raise SizeLimitError(f"obstruction system supports 2 <= n <= 5, got {n}")
    col_index = build_index(n, 1, order)
    row_index = build_index(n, 2, order)

    edge_blocks: dict = {}
    for k, (edge, block) in enumerate(col_index):
        edge_blocks.setdefault(edge, []).append((block, k))

    rows, cols, vals = [], [], []
    r = 0
    for face in row_index.cells():
        fpart = simplex_partition(face)
        label = fpart.labels()
        base = r
        for edge, s in zip(face.edges(), (1, 1, -1)):
            for block, k in edge_blocks[edge]:
                # edge partitions refine the face partition
                rows.append(base + label[block[0] - 1])
                cols.append(k)
                vals.append(s)
        r += len(fpart)
    if r != len(row_index):
        raise ConstructionError("row count does not match R")

    rows_a = np.asarray(rows, dtype=np.int64)
    cols_a = np.asarray(cols, dtype=np.int64)
    vals_a = np.asarray(vals, dtype=np.int64)
    delta_num = build_delta(col_index)

    twice_d = np.zeros(len(row_index), dtype=np.int64)
    np.add.at(twice_d, rows_a, vals_a * delta_num[cols_a])
    if np.any(twice_d % 2):
        bad = int(np.flatnonzero(twice_d % 2)[0])
        raise ConstructionError(f"D is not integral at row {bad}: M·δ = {twice_d[bad]}/2")
    return ObstructionSystem(n, col_index, row_index, rows_a, cols_a, vals_a,
                             delta_num, twice_d // 2)


def write_matrix_market(path: str | os.PathLike, shape: tuple[int, int], rows, cols, vals,
                        comments: Sequence[str] = ()) -> None:
    lines = [MM_HEADER]
    lines += [f"% {c}" for c in comments]
    lines.append(f"{shape[0]} {shape[1]} {len(vals)}")
    order = np.lexsort((np.asarray(cols), np.asarray(rows)))
    for k in order:
        lines.append(f"{int(rows[k]) + 1} {int(cols[k]) + 1} {int(vals[k])}")
    _write_text(path, "\n".join(lines) + "\n")


def read_matrix_market(path: str | os.PathLike):
    """Return (shape, rows, cols, vals, comments) from a coordinate integer file."""
    with open(path) as fh:
        header = fh.readline().strip()
        if header.lower() != MM_HEADER.lower():
            raise ValidationError(f"{path}: unsupported Matrix Market header {header!r}")
        comments = []
        line = fh.readline()
        while line.startswith("%"):
            comments.append(line[1:].strip())
            line = fh.readline()
        nr, nc, nnz = (int(t) for t in line.split())
        data = np.loadtxt(fh, dtype=np.int64, ndmin=2) if nnz else np.zeros((0, 3), np.int64)
    if data.shape[0] != nnz:
        raise ValidationError(f"{path}: expected {nnz} entries, found {data.shape[0]}")
    return (nr, nc), data[:, 0] - 1, data[:, 1] - 1, data[:, 2], comments


def _write_text(path, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {path}: {exc.strerror}") from exc


def _write_json(path, obj) -> None:
    _write_text(path, json.dumps(obj, indent=1, sort_keys=True) + "\n")


def export_system(system: ObstructionSystem, directory: str | os.PathLike) -> dict[str, Path]:
    """Write M.mtx, delta.json, D.json and indices.json into ``directory``."""
    out = Path(directory)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot create {out}: {exc.strerror}") from exc
    paths = {name: out / name for name in ("M.mtx", "delta.json", "D.json", "indices.json")}
    head = {"n": system.n, "format_version": FORMAT_VERSION}
    write_matrix_market(paths["M.mtx"], system.shape, system.rows, system.cols, system.vals,
                        comments=[f"n={system.n}", f"format_version={FORMAT_VERSION}"])
    _write_json(paths["delta.json"], {**head, "denominator": 2,
                                      "values": [str(f) for f in system.delta()]})
    _write_json(paths["D.json"], {**head, "values": system.D.tolist()})
    _write_json(paths["indices.json"], {**head, "columns": system.col_index.to_json(),
                                        "rows": system.row_index.to_json()})
    return paths


def load_system(directory: str | os.PathLike) -> ObstructionSystem:
    """Inverse of :func:`export_system`."""
    src = Path(directory)
    shape, rows, cols, vals, _ = read_matrix_market(src / "M.mtx")
    delta = json.loads((src / "delta.json").read_text())
    dvec = json.loads((src / "D.json").read_text())
    idx = json.loads((src / "indices.json").read_text())
    for doc in (delta, dvec, idx):
        if doc.get("format_version") != FORMAT_VERSION:
            raise ValidationError(f"{src}: unsupported format_version {doc.get('format_version')}")
    n = idx["n"]
    col_index = CellIndex.from_json(n, 1, idx["columns"])
    row_index = CellIndex.from_json(n, 2, idx["rows"])
    if shape != (len(row_index), len(col_index)):
        raise ValidationError(f"{src}: matrix shape {shape} disagrees with indices")
    delta_num = np.asarray([int(Fraction(v) * 2) for v in delta["values"]], dtype=np.int64)
    return ObstructionSystem(n, col_index, row_index, rows.astype(np.int64), cols.astype(np.int64),
                             vals.astype(np.int64), delta_num, np.asarray(dvec["values"], np.int64))
