"""The two 4-variable systems (X, σ) and (X, τ) on the 2-skeleton of Δ^{S_4}.

Points of the skeleton carry exact rational barycentric coordinates.  The
quotient Z identifies (x, i) ~ (x, j) when i, j share a block of P(Δ^{g..})
for some domain D_{g..} = {x_g >= 1/4 for all listed g} containing x; a class
[x, i] is represented by x together with the minimum of i's block.

On Z both systems are the constant map to the vertex e, so only the skeleton
part needs data.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import ConstructionError, InputError, ValidationError
from .perm import Partition, Permutation, enumerate_sn, inverse, join, refines
from .skeleton import Subsimplex, enumerate_cells, simplex_partition

QUARTER = Fraction(1, 4)
N_POINTS = 4


@dataclass(frozen=True)
class SkeletonPoint:
    """Point of the 2-skeleton: at most three non-zero coordinates summing to 1."""

    coords: tuple[tuple[Permutation, Fraction], ...]

    def __post_init__(self) -> None:
        merged: dict[Permutation, Fraction] = {}
        for g, v in self.coords:
            merged[g] = merged.get(g, Fraction(0)) + Fraction(v)
        clean = tuple(sorted((g, v) for g, v in merged.items() if v != 0))
        if any(v < 0 for _, v in clean):
            raise ValidationError("barycentric coordinates must be non-negative")
        if sum(v for _, v in clean) != 1:
            raise ValidationError("barycentric coordinates must sum to 1")
        if not 1 <= len(clean) <= 3:
            raise ValidationError(f"point must lie in the 2-skeleton, support size {len(clean)}")
        object.__setattr__(self, "coords", clean)

    @classmethod
    def from_mapping(cls, coords: Mapping[Permutation, Fraction | int]) -> "SkeletonPoint":
        return cls(tuple((g, Fraction(v)) for g, v in coords.items()))

    @classmethod
    def vertex(cls, g: Permutation) -> "SkeletonPoint":
        return cls(((g, Fraction(1)),))

    @classmethod
    def barycenter(cls, cell: Subsimplex) -> "SkeletonPoint":
        k = len(cell.vertices)
        return cls(tuple((g, Fraction(1, k)) for g in cell.vertices))

    @property
    def n(self) -> int:
        return self.coords[0][0].n

    def get(self, g: Permutation) -> Fraction:
        for h, v in self.coords:
            if h == g:
                return v
        return Fraction(0)

    def support(self) -> tuple[Permutation, ...]:
        return tuple(g for g, _ in self.coords)

    def to_json(self) -> list:
        return [[g.to_json(), str(v)] for g, v in self.coords]


@dataclass(frozen=True)
class ZClass:
    """Class [x, i] of the quotient, represented by the minimum of i's block."""

    point: SkeletonPoint
    rep: int


def in_v(x: SkeletonPoint, g: Permutation) -> bool:
    """x ∈ V_g, i.e. x_g > 1/4."""
    return x.get(g) > QUARTER


def in_d(x: SkeletonPoint, g: Permutation) -> bool:
    """x ∈ D_g, i.e. x_g >= 1/4."""
    return x.get(g) >= QUARTER


def charts(x: SkeletonPoint) -> tuple[Permutation, ...]:
    """All g with x ∈ V_g."""
    return tuple(g for g, v in x.coords if v > QUARTER)


def _domain_vertices(x: SkeletonPoint) -> tuple[Permutation, ...]:
    return tuple(g for g, v in x.coords if v >= QUARTER)


def containing_domains(x: SkeletonPoint) -> list[Subsimplex]:
    """All Δ^{g0..gl} with x ∈ D_{g0..gl}: non-empty subsets of {g : x_g >= 1/4}."""
    s = _domain_vertices(x)
    return [Subsimplex(c) for k in range(1, len(s) + 1) for c in itertools.combinations(s, k)]


@lru_cache(maxsize=None)
def _joined_partition(domain_vertices: tuple[Permutation, ...]) -> Partition:
    part = Partition.finest(domain_vertices[0].n)
    for k in range(1, len(domain_vertices) + 1):
        for c in itertools.combinations(domain_vertices, k):
            part = join(part, simplex_partition(Subsimplex(c)))
    return part


def quotient_partition(x: SkeletonPoint) -> Partition:
    """Join of P(Δ) over every domain containing x: the identification pattern at x."""
    return _joined_partition(_domain_vertices(x))


def _check_label(x: SkeletonPoint, i: int) -> None:
    if not 1 <= i <= x.n:
        raise ValidationError(f"index {i} outside 1..{x.n}")


def z_class(x: SkeletonPoint, i: int) -> ZClass:
    _check_label(x, i)
    return ZClass(x, quotient_partition(x).block_of(i)[0])


def sigma_eval(x: SkeletonPoint, i: int) -> ZClass:
    """σ̃_i(x) = [x, i]."""
    return z_class(x, i)


def tau_eval(x: SkeletonPoint, i: int, chart: Permutation | None = None) -> ZClass:
    """τ̃_i(x) = [x, g⁻¹(i)] for a chart V_g containing x (the first one by default)."""
    _check_label(x, i)
    if chart is None:
        available = charts(x)
        if not available:
            raise ConstructionError(f"no V_g contains {x.to_json()}; the V_g do not cover")
        chart = available[0]
    elif not in_v(x, chart):
        raise InputError(f"x is not in V_g for g={chart.images}")
    return z_class(x, inverse(chart)(i))


def point_partition(x: SkeletonPoint, which: str = "sigma") -> Partition:
    """i ~ j iff the chosen system sends x to the same class under maps i and j."""
    if which not in ("sigma", "tau"):
        raise ValidationError("which must be 'sigma' or 'tau'")
    ev = sigma_eval if which == "sigma" else tau_eval
    groups: dict[int, list[int]] = {}
    for i in range(1, x.n + 1):
        groups.setdefault(ev(x, i).rep, []).append(i)
    return Partition(tuple(tuple(v) for v in groups.values()))


def grid_points(face: Subsimplex, depth: int) -> Iterator[SkeletonPoint]:
    """Barycentric lattice {(a, b, c)/depth : a + b + c = depth} on a face."""
    if depth < 1:
        raise ValidationError("grid depth must be >= 1")
    verts = face.vertices
    for a in range(depth + 1):
        for b in range(depth + 1 - a):
            c = depth - a - b
            yield SkeletonPoint(tuple((g, Fraction(w, depth)) for g, w in zip(verts, (a, b, c))))


def check_point(x: SkeletonPoint, face: Subsimplex) -> dict[str, bool]:
    """All per-point checks for a point x of ``face``; True means the check passed."""
    out = {}
    chart_list = charts(x)
    out["cover"] = bool(chart_list) and any(in_v(x, g) for g in face.vertices)

    glued = True
    for i in range(1, x.n + 1):
        vals = {tau_eval(x, i, g) for g in chart_list}
        # on V_g, τ_i must equal σ_{g⁻¹(i)}
        vals |= {sigma_eval(x, inverse(g)(i)) for g in chart_list}
        glued &= len(vals) <= 1
    out["gluing"] = glued

    p_sigma = point_partition(x, "sigma")
    support = Subsimplex(x.support())
    out["partition_lemma"] = refines(p_sigma, simplex_partition(face)) and \
        refines(p_sigma, simplex_partition(support))

    fverts = set(face.vertices)
    out["intersection"] = all(set(d.vertices) <= fverts for d in containing_domains(x))

    if chart_list:
        p_tau = point_partition(x, "tau")
        out["relabel"] = all(p_tau == p_sigma.relabel(g) for g in chart_list)
    else:
        out["relabel"] = False
    return out


def check_piecewise_equivalence(grid_depth: int, faces: Iterable[Subsimplex] | None = None
                                ) -> dict:
    """Sweep the rational grid of every face (all 2024 faces of Δ^{S_4} by default).

    Failures are counted, never raised.  ``points_checked`` counts grid points
    per face, so shared edge points are visited once per incident face.
    """
    if grid_depth < 1:
        raise ValidationError("grid_depth must be >= 1")
    face_list = list(faces) if faces is not None else enumerate_cells(N_POINTS, 2)
    keys = ("cover", "gluing", "partition_lemma", "intersection", "relabel")
    failures = dict.fromkeys(keys, 0)
    points = 0
    for face in face_list:
        for x in grid_points(face, grid_depth):
            points += 1
            for k, ok in check_point(x, face).items():
                if not ok:
                    failures[k] += 1
    report = {"grid_depth": grid_depth, "faces": len(face_list), "points_checked": points,
              "cover_failures": failures["cover"], "gluing_failures": failures["gluing"],
              "partition_lemma_failures": failures["partition_lemma"],
              "intersection_failures": failures["intersection"],
              "relabel_failures": failures["relabel"]}
    report["passed"] = all(v == 0 for v in failures.values())
    return report


def expected_grid_size(n_faces: int, depth: int) -> int:
    return n_faces * math.comb(depth + 2, 2)


# --- unitary equivalence checkers -----------------------------------------

def is_unitary_equivalence_at(u: np.ndarray, x: SkeletonPoint, tol: float = 1e-9) -> bool:
    """u_ij(x) != 0 must force τ_i(x) = σ_j(x); entries with |u_ij| <= tol count as zero."""
    u = np.asarray(u)
    n = x.n
    if u.shape != (n, n):
        raise ValidationError(f"u must be {n}x{n}")
    if np.abs(u.conj().T @ u - np.eye(n)).max() > tol:
        return False
    for i in range(1, n + 1):
        ti = tau_eval(x, i)
        for j in range(1, n + 1):
            if abs(u[i - 1, j - 1]) > tol and ti != sigma_eval(x, j):
                return False
    return True


def intertwining_permutations(x: SkeletonPoint) -> list[Permutation]:
    """All g ∈ S_n with τ_i(x) = σ_{g⁻¹(i)}(x) for every i."""
    n = x.n
    tau = [tau_eval(x, i) for i in range(1, n + 1)]
    out = []
    for g in enumerate_sn(n):
        ginv = inverse(g)
        if all(tau[i - 1] == sigma_eval(x, ginv(i)) for i in range(1, n + 1)):
            out.append(g)
    return out


def unitary_conj_block(u: np.ndarray, x: SkeletonPoint, g: Permutation, tol: float = 1e-9
                       ) -> bool:
    """Whether U_g* u lies in U(P_σ(x)) up to ``tol`` off-block mass.

    Requires τ_i(x) = σ_{g⁻¹(i)}(x) for all i; a unitary equivalence u must
    then pass this check.
    """
    n = x.n
    ginv = inverse(g)
    if any(tau_eval(x, i) != sigma_eval(x, ginv(i)) for i in range(1, n + 1)):
        raise InputError(f"g={g.images} does not intertwine σ and τ at x")
    residue = g.matrix().conj().T @ np.asarray(u)
    lab = np.asarray(point_partition(x, "sigma").labels())
    off = lab[:, None] != lab[None, :]
    return not off.any() or float(np.abs(residue[off]).max()) <= tol
