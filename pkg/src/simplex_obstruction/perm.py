"""Permutations of {1..n} in one-line notation and set partitions of {1..n}.

Permutations compare lexicographically by their image tuple, which is the
default total order on S_n used everywhere else in the package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, SizeLimitError, ValidationError

MAX_N = 8


@dataclass(frozen=True, order=True)
class Permutation:
    """Bijection of {1..n}; ``images[i-1] == g(i)``."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        imgs = tuple(int(v) for v in self.images)
        object.__setattr__(self, "images", imgs)
        if not imgs:
            raise ValidationError("permutation must act on n >= 1 points")
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise ValidationError(f"not a permutation of 1..{len(imgs)}: {imgs}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> "Permutation":
        """Build from disjoint cycles, e.g. ``from_cycles(4, (1, 2), (3, 4))``."""
        imgs = list(range(1, n + 1))
        for cyc in cycles:
            for a, b in zip(cyc, tuple(cyc[1:]) + (cyc[0],)):
                imgs[a - 1] = b
        return cls(tuple(imgs))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __repr__(self) -> str:
        return f"Permutation({self.images})"

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, self.n + 1))

    def cycles(self) -> list[tuple[int, ...]]:
        """Cycle decomposition including fixed points, each cycle led by its minimum."""
        seen: set[int] = set()
        out = []
        for start in range(1, self.n + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            j = self(start)
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self(j)
            out.append(tuple(cyc))
        return out

    def matrix(self) -> np.ndarray:
        """Permutation matrix U_g with U_g e_i = e_{g(i)}."""
        n = self.n
        u = np.zeros((n, n), dtype=np.complex128)
        u[np.asarray(self.images) - 1, np.arange(n)] = 1.0
        return u

    def to_json(self) -> list[int]:
        return list(self.images)

    @classmethod
    def from_json(cls, data: Sequence[int]) -> "Permutation":
        return cls(tuple(data))


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_N:
        raise SizeLimitError(f"n={n} outside supported range 1..{MAX_N}")


def enumerate_sn(n: int) -> list[Permutation]:
    """All n! permutations in lexicographic order of one-line notation."""
    _check_n(n)
    # itertools.permutations of a sorted input is already lexicographic
    return [Permutation(p) for p in itertools.permutations(range(1, n + 1))]


def compose(g: Permutation, h: Permutation) -> Permutation:
    """Return g∘h, i.e. i ↦ g(h(i))."""
    if g.n != h.n:
        raise DimensionError(f"cannot compose permutations on {g.n} and {h.n} points")
    gi = g.images
    return Permutation(tuple(gi[j - 1] for j in h.images))


def inverse(g: Permutation) -> Permutation:
    out = [0] * g.n
    for i, gi in enumerate(g.images, start=1):
        out[gi - 1] = i
    return Permutation(tuple(out))


def sign(g: Permutation) -> int:
    """+1 for even permutations, -1 for odd ones."""
    even_cycles = sum(1 for c in g.cycles() if len(c) % 2 == 0)
    return -1 if even_cycles % 2 else 1


@dataclass(frozen=True)
class Partition:
    """Set partition of {1..n} in canonical form.

    Blocks are sorted tuples and appear in increasing order of their minimum,
    so structural equality is partition equality.
    """

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        blocks = tuple(sorted((tuple(sorted(int(v) for v in b)) for b in self.blocks),
                              key=lambda b: b[0] if b else 0))
        object.__setattr__(self, "blocks", blocks)
        flat = [v for b in blocks for v in b]
        if any(len(b) == 0 for b in blocks):
            raise ValidationError("partition blocks must be non-empty")
        if sorted(flat) != list(range(1, len(flat) + 1)):
            raise ValidationError(f"blocks do not partition 1..{len(flat)}: {blocks}")

    @classmethod
    def finest(cls, n: int) -> "Partition":
        return cls(tuple((i,) for i in range(1, n + 1)))

    @classmethod
    def coarsest(cls, n: int) -> "Partition":
        return cls((tuple(range(1, n + 1)),))

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __contains__(self, block) -> bool:
        return tuple(sorted(block)) in self.blocks

    def block_of(self, i: int) -> tuple[int, ...]:
        for b in self.blocks:
            if i in b:
                return b
        raise ValidationError(f"{i} not in 1..{self.n}")

    def labels(self) -> list[int]:
        """labels[i-1] = index of the block containing i."""
        lab = [0] * self.n
        for k, b in enumerate(self.blocks):
            for v in b:
                lab[v - 1] = k
        return lab

    def same_block(self, i: int, j: int) -> bool:
        lab = self.labels()
        return lab[i - 1] == lab[j - 1]

    def relabel(self, g: Permutation) -> "Partition":
        """Image partition {g(B)}."""
        if g.n != self.n:
            raise DimensionError("relabel: size mismatch")
        return Partition(tuple(tuple(g(v) for v in b) for b in self.blocks))

    def to_json(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]

    @classmethod
    def from_json(cls, data) -> "Partition":
        return cls(tuple(tuple(b) for b in data))


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n + 1))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # smaller root wins so representatives are block minima
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb

    def partition(self, n: int) -> Partition:
        groups: dict[int, list[int]] = {}
        for i in range(1, n + 1):
            groups.setdefault(self.find(i), []).append(i)
        return Partition(tuple(tuple(v) for v in groups.values()))


def orbit_partition(n: int, generators: Iterable[Permutation]) -> Partition:
    """Orbits of the group generated by ``generators`` acting on {1..n}."""
    uf = _UnionFind(n)
    for g in generators:
        if g.n != n:
            raise DimensionError(f"generator on {g.n} points, expected {n}")
        for i in range(1, n + 1):
            uf.union(i, g(i))
    return uf.partition(n)


def refines(p: Partition, q: Partition) -> bool:
    """True iff every block of p lies inside a block of q (p ⪯ q)."""
    if p.n != q.n:
        raise DimensionError(f"partitions of {p.n} and {q.n} points")
    lab = q.labels()
    return all(len({lab[v - 1] for v in b}) == 1 for b in p.blocks)


def join(p: Partition, q: Partition) -> Partition:
    """Finest partition coarser than both p and q."""
    if p.n != q.n:
        raise DimensionError(f"partitions of {p.n} and {q.n} points")
    uf = _UnionFind(p.n)
    for part in (p, q):
        for b in part.blocks:
            for v in b[1:]:
                uf.union(b[0], v)
    return uf.partition(p.n)


def all_partitions(n: int) -> list[Partition]:
    """Every set partition of {1..n} (Bell(n) of them)."""
    def rec(i: int, blocks: list[list[int]]):
        if i > n:
            yield Partition(tuple(tuple(b) for b in blocks))
            return
        for b in blocks:
            b.append(i)
            yield from rec(i + 1, blocks)
            b.pop()
        blocks.append([i])
        yield from rec(i + 1, blocks)
        blocks.pop()

    return list(rec(1, []))
