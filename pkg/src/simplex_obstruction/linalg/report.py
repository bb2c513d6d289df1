from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence


@dataclass(frozen=True)
class SolveReport:
    """Outcome of deciding M x = D over one coefficient domain.

    ``field`` is one of ``gf2``, ``gfp``, ``rational`` or ``integer``.  For the
    integer case ``rank``/``rank_augmented`` are the ranks over Q of M and
    (M | D); solvability there is decided by the lattice test, not by the ranks.
    """

    field: str
    rank: int
    rank_augmented: int
    solvable: bool
    witness: Optional[tuple] = None
    p: Optional[int] = None

    def to_json(self) -> dict:
        out = {"field": self.field, "rank": self.rank, "rank_augmented": self.rank_augmented,
               "solvable": self.solvable}
        if self.p is not None:
            out["p"] = self.p
        if self.witness is not None:
            out["witness"] = [str(Fraction(v)) for v in self.witness]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "SolveReport":
        witness = data.get("witness")
        if witness is not None:
            parsed = [Fraction(v) for v in witness]
            if all(f.denominator == 1 for f in parsed) and data["field"] != "rational":
                witness = tuple(int(f) for f in parsed)
            else:
                witness = tuple(parsed)
        return cls(data["field"], data["rank"], data["rank_augmented"], data["solvable"],
                   witness, data.get("p"))


def check_witness(M, D: Sequence[int], x: Sequence, modulus: int | None = None) -> bool:
    """Exact re-multiplication M·x == D (optionally modulo ``modulus``)."""
    for row, d in zip(M, D):
        acc = sum(int(a) * x[j] for j, a in enumerate(row) if a)
        if modulus is None:
            if acc != d:
                return False
        elif (acc - d) % modulus:
            return False
    return True
