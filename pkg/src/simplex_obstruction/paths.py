"""Sampled paths of block-diagonal unitaries and their winding invariants.

A path is stored as m+1 samples at t = 0, 1/m, ..., 1.  For a block B the
B-minor det_B(γ(t)) is a path in U(1); its winding number is obtained by
summing principal phase increments between consecutive samples, which is
exact as long as each increment stays below π - margin.

Edge convention: γ^{g0,g1}(0) = I at the vertex g0 and γ^{g0,g1}(1) = U_{g0⁻¹g1}
at g1, so the admissible map on the edge is u = U_{g0}·γ.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import CompositionError, InputError, ResolutionError, ValidationError
from .perm import Partition, Permutation, compose, inverse, join
from .skeleton import Subsimplex, simplex_partition

DEFAULT_SAMPLES = 1024
DEFAULT_MARGIN = math.pi / 4
DEFAULT_TOL = 1e-9
# |w - k| below this counts as the integer k when taking the ceiling
INTEGER_SNAP = 1e-9


def _off_block_mass(samples: np.ndarray, partition: Partition) -> float:
    lab = np.asarray(partition.labels())
    off = lab[:, None] != lab[None, :]
    if not off.any():
        return 0.0
    return float(np.abs(samples[..., off]).max())


def _unitarity_defect(samples: np.ndarray) -> float:
    n = samples.shape[-1]
    prod = np.conj(np.swapaxes(samples, -1, -2)) @ samples
    return float(np.linalg.norm(prod - np.eye(n), axis=(-2, -1)).max())


@dataclass(frozen=True, eq=False)
class BlockUnitaryPath:
    """Uniformly sampled path in U(partition)."""

    partition: Partition
    samples: np.ndarray
    tolerance: float = DEFAULT_TOL
    cell: Optional[Subsimplex] = None

    def __post_init__(self) -> None:
        s = np.asarray(self.samples, dtype=np.complex128)
        object.__setattr__(self, "samples", s)
        if s.ndim != 3 or s.shape[1] != s.shape[2] or s.shape[0] < 2:
            raise ValidationError(f"samples must have shape (m+1, n, n) with m >= 1, got {s.shape}")
        if s.shape[1] != self.partition.n:
            raise ValidationError(f"{s.shape[1]}x{s.shape[1]} samples for a partition of {self.partition.n}")
        err = _unitarity_defect(s)
        if err > self.tolerance:
            raise ValidationError(f"samples not unitary within {self.tolerance:g} (defect {err:.3g})")
        off = _off_block_mass(s, self.partition)
        if off > self.tolerance:
            raise ValidationError(f"samples leave U(P) for P={self.partition.to_json()} (off-block {off:.3g})")

    @property
    def n(self) -> int:
        return self.samples.shape[1]

    @property
    def m(self) -> int:
        return self.samples.shape[0] - 1

    def start(self) -> np.ndarray:
        return self.samples[0]

    def end(self) -> np.ndarray:
        return self.samples[-1]

    def to_json(self) -> dict:
        s = self.samples
        return {"n": self.n, "partition": self.partition.to_json(), "tolerance": self.tolerance,
                "samples": np.stack([s.real, s.imag], axis=-1).tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "BlockUnitaryPath":
        arr = np.asarray(data["samples"], dtype=float)
        return cls(Partition.from_json(data["partition"]), arr[..., 0] + 1j * arr[..., 1],
                   data["tolerance"])


@dataclass(frozen=True)
class WindingEntry:
    """Winding w, upper winding number ⌈w⌉ and defect ⌈w⌉ - w of one B-minor."""

    w: float
    uwn: int
    defect: float

    def to_json(self) -> dict:
        return {"w": self.w, "uwn": self.uwn, "defect": self.defect}


def _check_block(path: BlockUnitaryPath, block: Sequence[int]) -> tuple[int, ...]:
    b = tuple(sorted(block))
    lab = path.partition.labels()
    inside = {lab[i - 1] for i in b}
    covered = sum(len(path.partition.blocks[k]) for k in inside)
    if covered != len(b):
        raise ValidationError(f"block {b} is not a union of blocks of {path.partition.to_json()}")
    return b


def block_det(path: BlockUnitaryPath, block: Sequence[int]) -> np.ndarray:
    """det_B of every sample."""
    idx = np.asarray(_check_block(path, block)) - 1
    return np.linalg.det(path.samples[:, idx[:, None], idx[None, :]])


def winding(path: BlockUnitaryPath, block: Sequence[int], margin: float = DEFAULT_MARGIN
            ) -> WindingEntry:
    """Winding invariants of det_B along the path.

    Raises ResolutionError when a phase step reaches π - margin.
    """
    d = block_det(path, block)
    steps = np.angle(d[1:] * np.conj(d[:-1]))
    worst = float(np.abs(steps).max())
    if worst >= math.pi - margin:
        raise ResolutionError(
            f"phase step {worst:.3f} rad on block {tuple(block)} exceeds π - margin; "
            f"increase the sample count (m={path.m})")
    w = float(steps.sum() / (2 * math.pi))
    k = round(w)
    if abs(w - k) < INTEGER_SNAP:
        return WindingEntry(w, int(k), 0.0)
    uwn = math.ceil(w)
    return WindingEntry(w, uwn, uwn - w)


def winding_report(path: BlockUnitaryPath, margin: float = DEFAULT_MARGIN) -> dict:
    return {b: winding(path, b, margin) for b in path.partition.blocks}


# --- path algebra ---------------------------------------------------------

def concatenate(a: BlockUnitaryPath, b: BlockUnitaryPath, partition: Partition | None = None
                ) -> BlockUnitaryPath:
    """a ∗ b; the shared endpoint is kept once, so m = a.m + b.m."""
    tol = max(a.tolerance, b.tolerance)
    gap = float(np.abs(a.end() - b.start()).max())
    if gap > tol:
        raise CompositionError(f"endpoint mismatch {gap:.3g} exceeds tolerance {tol:g}")
    part = partition if partition is not None else join(a.partition, b.partition)
    return BlockUnitaryPath(part, np.concatenate([a.samples, b.samples[1:]]), tol)


def reverse(path: BlockUnitaryPath) -> BlockUnitaryPath:
    """γ⁻¹(t) = γ(1 - t)."""
    return BlockUnitaryPath(path.partition, path.samples[::-1].copy(), path.tolerance)


def left_multiply(V: np.ndarray, path: BlockUnitaryPath, partition: Partition | None = None
                  ) -> BlockUnitaryPath:
    """Pointwise product of the constant path V with γ."""
    part = partition if partition is not None else path.partition
    return BlockUnitaryPath(part, np.asarray(V) @ path.samples, path.tolerance)


def pointwise_product(a: BlockUnitaryPath, b: BlockUnitaryPath) -> BlockUnitaryPath:
    if a.m != b.m:
        raise ValidationError(f"sample counts differ ({a.m} vs {b.m})")
    part = join(a.partition, b.partition)
    return BlockUnitaryPath(part, a.samples @ b.samples, max(a.tolerance, b.tolerance))


def constant_path(V: np.ndarray, partition: Partition, m: int = DEFAULT_SAMPLES
                  ) -> BlockUnitaryPath:
    return BlockUnitaryPath(partition, np.repeat(np.asarray(V, complex)[None], m + 1, axis=0))


def scalar_path(turns: float, m: int = DEFAULT_SAMPLES) -> BlockUnitaryPath:
    """1x1 path t ↦ exp(2πi·turns·t)."""
    t = np.linspace(0.0, 1.0, m + 1)
    return BlockUnitaryPath(Partition.finest(1), np.exp(2j * math.pi * turns * t)[:, None, None])


def _haar_unitary(k: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_block_path(partition: Partition, rng: np.random.Generator, m: int = 256,
                      max_phase: float = 2 * math.pi) -> BlockUnitaryPath:
    """W_B·exp(i t H_B) per block, eigenvalues of H_B in [-max_phase, max_phase]."""
    n = partition.n
    out = np.zeros((m + 1, n, n), dtype=np.complex128)
    t = np.linspace(0.0, 1.0, m + 1)
    for block in partition.blocks:
        k = len(block)
        idx = np.asarray(block) - 1
        W = _haar_unitary(k, rng)
        Q = _haar_unitary(k, rng)
        lam = rng.uniform(-max_phase, max_phase, size=k)
        seg = np.einsum("ij,tj,kj->tik", Q, np.exp(1j * t[:, None] * lam[None, :]), Q.conj())
        out[:, idx[:, None], idx[None, :]] = W @ seg
    return BlockUnitaryPath(partition, out)


# --- admissible maps on the 1-skeleton ------------------------------------

def _edge_step(edge: Subsimplex) -> Permutation:
    g0, g1 = edge.vertices
    return compose(inverse(g0), g1)


def base_uwn(edge: Subsimplex) -> dict[tuple[int, ...], int]:
    """Upper winding numbers of the principal-logarithm path on each block."""
    return {b: (1 if len(b) % 2 == 0 else 0) for b in simplex_partition(edge).blocks}


def _cycle_eigensystem(h: Permutation, block: tuple[int, ...]):
    """Eigenvectors (columns, in block coordinates) and principal eigenphases
    of the cyclic permutation h restricted to ``block``."""
    k = len(block)
    order = [block[0]]
    for _ in range(k - 1):
        order.append(h(order[-1]))
    pos = {v: j for j, v in enumerate(order)}
    V = np.zeros((k, k), dtype=np.complex128)
    theta = np.zeros(k)
    for mode in range(k):
        for v in block:
            V[block.index(v), mode] = np.exp(-2j * math.pi * mode * pos[v] / k) / math.sqrt(k)
        phase = 2 * math.pi * mode / k
        theta[mode] = phase - 2 * math.pi if phase > math.pi else phase
    return V, theta


def edge_path(edge: Subsimplex, target_uwn: Mapping | Sequence[int] | None = None,
              m: int = DEFAULT_SAMPLES, margin: float = DEFAULT_MARGIN) -> BlockUnitaryPath:
    """γ^{g0,g1} from I to U_{g0⁻¹g1} in U(P(edge)) with prescribed uwn per block.

    On each cycle block the path is exp(t·log U) for the principal logarithm,
    with 2π·k added to one eigenphase to move the winding by k.  ``target_uwn``
    is a mapping block -> int or a sequence in block order; None keeps the base
    construction.
    """
    if edge.dim != 1:
        raise ValidationError("edge_path needs a 1-dimensional subsimplex")
    part = simplex_partition(edge)
    base = base_uwn(edge)
    if target_uwn is None:
        targets = base
    elif isinstance(target_uwn, Mapping):
        targets = {tuple(b): int(v) for b, v in target_uwn.items()}
    else:
        seq = list(target_uwn)
        if len(seq) != len(part):
            raise ValidationError(f"{len(seq)} targets for {len(part)} blocks")
        targets = dict(zip(part.blocks, (int(v) for v in seq)))
    if set(targets) != set(part.blocks):
        raise ValidationError(f"targets must be indexed by the blocks {part.to_json()}")

    h = _edge_step(edge)
    n = edge.n
    t = np.linspace(0.0, 1.0, m + 1)
    out = np.zeros((m + 1, n, n), dtype=np.complex128)
    for block in part.blocks:
        V, theta = _cycle_eigensystem(h, block)
        theta = theta.copy()
        theta[0] += 2 * math.pi * (targets[block] - base[block])
        step = abs(theta.sum()) / m
        if step >= math.pi - margin:
            raise ResolutionError(
                f"edge {[g.images for g in edge.vertices]} block {block}: phase step "
                f"{step:.3f} rad with m={m}; use more samples")
        idx = np.asarray(block) - 1
        seg = np.einsum("ij,tj,kj->tik", V, np.exp(1j * t[:, None] * theta[None, :]), V.conj())
        out[:, idx[:, None], idx[None, :]] = seg
    return BlockUnitaryPath(part, out, cell=edge)


def face_loop(face: Subsimplex, u_edges: Sequence[BlockUnitaryPath]) -> BlockUnitaryPath:
    """γ^{g0,g1} ∗ (U_{g0⁻¹g1}·γ^{g1,g2}) ∗ (γ^{g0,g2})⁻¹, a loop at I in U(P(face))."""
    if face.dim != 2:
        raise ValidationError("face_loop needs a 2-face")
    if len(u_edges) != 3:
        raise ValidationError("face_loop needs the three boundary edge paths")
    for path, edge in zip(u_edges, face.edges()):
        if path.cell is not None and path.cell != edge:
            raise CompositionError(f"path for edge {path.cell} given where {edge} expected")
    g0, g1, _ = face.vertices
    fpart = simplex_partition(face)
    e01, e12, e02 = u_edges
    shifted = left_multiply(compose(inverse(g0), g1).matrix(), e12, fpart)
    loop = concatenate(concatenate(e01, shifted, fpart), reverse(e02), fpart)
    eye = np.eye(face.n)
    for end in (loop.start(), loop.end()):
        if np.abs(end - eye).max() > loop.tolerance:
            raise CompositionError("face loop does not start and end at the identity")
    return loop


def face_winding_from_edges(face: Subsimplex, edge_windings: Sequence[Mapping]) -> dict:
    """w_B(γ01) + w_B(γ12) - w_B(γ02) per face block, edges measured by sub-block sums."""
    fpart = simplex_partition(face)
    lab = fpart.labels()
    out = {b: 0.0 for b in fpart.blocks}
    for ew, s in zip(edge_windings, (1, 1, -1)):
        for sub, w in ew.items():
            out[fpart.blocks[lab[sub[0] - 1]]] += s * w
    return out


# --- weak admissibility ----------------------------------------------------

def diagonal_correction(weights: Mapping[Permutation, float], phases: Mapping[Permutation, np.ndarray]
                        ) -> np.ndarray:
    """v(x) = exp(-i Σ_g x_g T_g) for diagonal T_g given by their diagonals."""
    total = sum(float(x) * np.asarray(phases[g], float) for g, x in weights.items())
    return np.diag(np.exp(-1j * np.asarray(total)))


def vertex_phases(vertex_values: Mapping[Permutation, np.ndarray], tol: float = DEFAULT_TOL
                  ) -> dict[Permutation, np.ndarray]:
    """Diagonals T_g with U_g* u(g) = exp(i T_g)."""
    out = {}
    for g, u in vertex_values.items():
        res = g.matrix().conj().T @ np.asarray(u, complex)
        off = res - np.diag(np.diag(res))
        if np.abs(off).max() > tol:
            raise InputError(f"U_g* u(g) is not diagonal at g={g.images}")
        d = np.diag(res)
        if np.abs(np.abs(d) - 1).max() > tol:
            raise InputError(f"u(g) is not unitary at g={g.images}")
        out[g] = np.angle(d)
    return out


def validate_weak_to_admissible(vertex_values: Mapping[Permutation, np.ndarray],
                                edges: Sequence[Subsimplex] | None = None,
                                m: int = 64, tol: float = DEFAULT_TOL,
                                rng: np.random.Generator | None = None) -> bool:
    """Check that u' = u·v is admissible for a weakly admissible u with the given vertex values.

    On each edge u(s) = U_{g0} γ(s) W(s), where γ is the base edge path and W a
    diagonal path from exp(iT_{g0}) to exp(iT_{g1}) (with a random integer
    twist if ``rng`` is given).  The correction at barycentric weights
    (1-s, s) must restore u'(g) = U_g and keep U_{g0}* u' block-diagonal.
    """
    phases = vertex_phases(vertex_values, tol)
    if edges is None:
        verts = sorted(phases)
        edges = [Subsimplex((a, b)) for i, a in enumerate(verts) for b in verts[i + 1:]]
    s = np.linspace(0.0, 1.0, m + 1)
    for edge in edges:
        g0, g1 = edge.vertices
        if g0 not in phases or g1 not in phases:
            raise InputError(f"missing vertex value for edge {edge}")
        part = simplex_partition(edge)
        gamma = edge_path(edge, None, m).samples
        T0, T1 = phases[g0], phases[g1]
        n = edge.n
        twist = rng.integers(-2, 3, size=n) if rng is not None else np.zeros(n)
        w_diag = np.exp(1j * (np.outer(1 - s, T0) + np.outer(s, T1) + 2 * math.pi * np.outer(s, twist)))
        U0 = g0.matrix()
        u = U0 @ gamma * w_diag[:, None, :]
        if _off_block_mass(U0.conj().T @ u, part) > tol:
            return False
        v_diag = np.exp(-1j * (np.outer(1 - s, T0) + np.outer(s, T1)))
        corrected = u * v_diag[:, None, :]
        if np.abs(corrected[0] - U0).max() > tol or np.abs(corrected[-1] - g1.matrix()).max() > tol:
            return False
        if _off_block_mass(U0.conj().T @ corrected, part) > tol:
            return False
        if _unitarity_defect(corrected) > tol:
            return False
    return True


# --- cross-validation against the obstruction matrix -----------------------

def verify_face_loops(system, faces: int = 50, samples: int = DEFAULT_SAMPLES, seed: int = 0,
                      tol: float = 1e-6, trials: int = 1, targets: str = "random",
                      target_range: int = 3) -> dict:
    """Compare lifted face-loop windings with (M ŵ - D) on random faces.

    Each trial draws an integer upper-winding vector ŵ over C (or uses the
    base construction when ``targets == "base"``) and a random subset of
    faces; every face block contributes one comparison.
    """
    if faces < 1:
        raise ValidationError("faces must be >= 1")
    if samples < 64:
        raise ValidationError("samples must be >= 64")
    if targets not in ("random", "base"):
        raise ValidationError("targets must be 'random' or 'base'")
    rng = np.random.default_rng(seed)
    cells = system.row_index.cells()
    cols = system.col_index
    max_dev = 0.0
    checked = 0
    loops = 0
    for _ in range(trials):
        if targets == "base":
            what = [1 if len(b) % 2 == 0 else 0 for _, b in cols]
        else:
            what = rng.integers(-target_range, target_range + 1, size=len(cols)).tolist()
        expected = [a - d for a, d in zip(system.matvec(what), system.D.tolist())]
        chosen = np.sort(rng.choice(len(cells), size=min(faces, len(cells)), replace=False))
        cache: dict = {}

        def path_for(edge):
            if edge not in cache:
                tgt = {b: what[cols.index(edge, b)] for b in simplex_partition(edge).blocks}
                cache[edge] = edge_path(edge, tgt, samples)
            return cache[edge]

        for k in chosen.tolist():
            face = cells[k]
            loop = face_loop(face, [path_for(e) for e in face.edges()])
            loops += 1
            for block in loop.partition.blocks:
                row = system.row_index.index(face, block)
                dev = abs(winding(loop, block).w - expected[row])
                max_dev = max(max_dev, dev)
                checked += 1
    return {"faces": faces, "samples": samples, "seed": seed, "tol": tol, "trials": trials,
            "targets": targets, "loops_checked": loops, "blocks_checked": checked,
            "max_deviation": max_dev, "passed": bool(max_dev < tol)}
