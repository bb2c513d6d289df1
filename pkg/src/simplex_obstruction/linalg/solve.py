from __future__ import annotations

from ..errors import ValidationError
from .fields import solve_gf2, solve_gfp
from .integer import solve_integer
from .rational import solve_rational
from .report import SolveReport

FIELDS = ("gf2", "gfp", "rational", "integer")


def solve_field(M, D, field: str, p: int | None = None, backend: str | None = None
                ) -> SolveReport:
    """Dispatch to the solver for ``field`` (gf2 | gfp | rational | integer)."""
    if field not in FIELDS:
        raise ValidationError(f"unknown field {field!r}; expected one of {FIELDS}")
    if (p is not None) != (field == "gfp"):
        raise ValidationError("p is required for gfp and only for gfp")
    if field == "gf2":
        return solve_gf2(M, D, backend)
    if field == "gfp":
        return solve_gfp(M, D, p, backend)
    if field == "rational":
        return solve_rational(M, D)
    return solve_integer(M, D)


def solve_system(system, field: str, p: int | None = None, backend: str | None = None
                 ) -> SolveReport:
    """Solve an :class:`~simplex_obstruction.obstruction.ObstructionSystem`."""
    return solve_field(system.dense(), system.D, field, p, backend)
