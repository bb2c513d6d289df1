"""Cells of the low skeleta of the S_n-simplex and their (cell, block) indices."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import SizeLimitError, ValidationError
from .perm import Partition, Permutation, compose, enumerate_sn, inverse, orbit_partition

MAX_SKELETON_N = 5


@dataclass(frozen=True, order=True)
class Subsimplex:
    """Subsimplex spanned by 1-3 vertices listed in increasing total order.

    The vertex order fixes the orientation; ``vertices[0]`` is the basepoint
    g0 used in the partition P(g0⁻¹g1, ..., g0⁻¹gk).
    """

    vertices: tuple[Permutation, ...]

    def __post_init__(self) -> None:
        if not 1 <= len(self.vertices) <= 3:
            raise ValidationError("subsimplex must have 1..3 vertices")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValidationError("subsimplex vertices must be distinct")

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    @property
    def n(self) -> int:
        return self.vertices[0].n

    def edges(self) -> tuple["Subsimplex", "Subsimplex", "Subsimplex"]:
        """Boundary edges (g0,g1), (g1,g2), (g0,g2) of a 2-face."""
        if self.dim != 2:
            raise ValidationError("edges() is defined for 2-faces only")
        g0, g1, g2 = self.vertices
        return Subsimplex((g0, g1)), Subsimplex((g1, g2)), Subsimplex((g0, g2))

    def to_json(self) -> list[list[int]]:
        return [v.to_json() for v in self.vertices]

    @classmethod
    def from_json(cls, data) -> "Subsimplex":
        return cls(tuple(Permutation.from_json(v) for v in data))


def _check_size(n: int) -> None:
    if not 1 <= n <= MAX_SKELETON_N:
        raise SizeLimitError(f"skeleton enumeration supports 1 <= n <= {MAX_SKELETON_N}, got {n}")


def resolve_order(n: int, order: Sequence[Permutation] | None) -> list[Permutation]:
    """Validate a custom total order on S_n (default: lexicographic)."""
    if order is None:
        return enumerate_sn(n)
    order = list(order)
    if len(order) != len(set(order)) or set(order) != set(enumerate_sn(n)):
        raise ValidationError(f"order must list every element of S_{n} exactly once")
    return order


def enumerate_cells(n: int, dim: int, order: Sequence[Permutation] | None = None
                    ) -> list[Subsimplex]:
    """All dim-subsimplices of Δ^{S_n}, vertices increasing in ``order``.

    The output is lexicographic in the vertex tuples (positions in ``order``).
    """
    _check_size(n)
    if dim not in (0, 1, 2):
        raise ValidationError(f"dim must be 0, 1 or 2, got {dim}")
    verts = resolve_order(n, order)
    return [Subsimplex(c) for c in itertools.combinations(verts, dim + 1)]


@lru_cache(maxsize=None)
def _partition_of(vertices: tuple[Permutation, ...]) -> Partition:
    g0inv = inverse(vertices[0])
    return orbit_partition(vertices[0].n, [compose(g0inv, g) for g in vertices[1:]])


def simplex_partition(s: Subsimplex) -> Partition:
    """P(Δ^{g0..gk}) = orbit partition of {g0⁻¹g1, ..., g0⁻¹gk}."""
    return _partition_of(s.vertices)


@dataclass(frozen=True)
class CellIndex:
    """Flattened (cell, block) pairs; the index sets C (dim 1) and R (dim 2)."""

    n: int
    dim: int
    entries: tuple[tuple[Subsimplex, tuple[int, ...]], ...]
    _lookup: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        lookup = {e: k for k, e in enumerate(self.entries)}
        if len(lookup) != len(self.entries):
            raise ValidationError("duplicate (cell, block) entries")
        object.__setattr__(self, "_lookup", lookup)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[Subsimplex, tuple[int, ...]]]:
        return iter(self.entries)

    def __getitem__(self, k: int) -> tuple[Subsimplex, tuple[int, ...]]:
        return self.entries[k]

    def index(self, cell: Subsimplex, block: Sequence[int]) -> int:
        return self._lookup[(cell, tuple(block))]

    def cells(self) -> list[Subsimplex]:
        seen = []
        last = None
        for cell, _ in self.entries:
            if cell != last:
                seen.append(cell)
                last = cell
        return seen

    def to_json(self) -> list[dict]:
        return [{"vertices": c.to_json(), "block": list(b)} for c, b in self.entries]

    @classmethod
    def from_json(cls, n: int, dim: int, data: list[dict]) -> "CellIndex":
        return cls(n, dim, tuple((Subsimplex.from_json(d["vertices"]), tuple(d["block"]))
                                 for d in data))


def build_index(n: int, dim: int, order: Sequence[Permutation] | None = None) -> CellIndex:
    """Index set of (cell, block) pairs for all dim-cells, blocks by minimum."""
    if dim not in (1, 2):
        raise ValidationError(f"index is built for dim 1 or 2, got {dim}")
    entries = []
    for cell in enumerate_cells(n, dim, order):
        for block in simplex_partition(cell).blocks:
            entries.append((cell, block))
    return CellIndex(n, dim, tuple(entries))
